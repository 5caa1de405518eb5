//! Text format: `coeff * Dx^k` and `coeff * theta^k` terms, coefficients
//! rational expressions in x. Products are operator compositions.

use super::DiffOperator;
use crate::error::{Error, Result};
use crate::expr::{self, Algebra};
use crate::qx::{Poly, RatFunc, Rational};
use num_bigint::BigInt;

impl Algebra for DiffOperator {
    fn from_int(n: &BigInt) -> Result<Self> {
        Ok(DiffOperator::constant(Rational::from_integer(n.clone())))
    }

    fn var(name: &str) -> Result<Self> {
        match name {
            "x" => Ok(DiffOperator::x()),
            "Dx" | "D" => Ok(DiffOperator::d()),
            "theta" | "θ" => Ok(DiffOperator::theta()),
            _ => Err(Error::Parse(format!("unknown symbol '{}'", name))),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(DiffOperator::add(self, o))
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(DiffOperator::sub(self, o))
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(DiffOperator::mul(self, o))
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if !o.is_function() {
            return Err(Error::Parse("can only divide by a rational function of x".into()));
        }
        let inv = o.coeff(0).inv()?;
        Ok(self.rmul_fn(&inv))
    }

    fn neg(&self) -> Result<Self> {
        Ok(DiffOperator::neg(self))
    }

    fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            if !self.is_function() {
                return Err(Error::Parse("negative powers only apply to functions".into()));
            }
            return Ok(DiffOperator::function(self.coeff(0).pow(e as i32)?));
        }
        Ok(DiffOperator::pow(self, e as usize))
    }
}

pub(super) fn parse_operator(s: &str) -> Result<DiffOperator> {
    expr::parse(s)?.eval::<DiffOperator>()
}

impl RatFunc {
    /// Parse a rational-function expression in x.
    pub fn parse(s: &str) -> Result<RatFunc> {
        let op = parse_operator(s)?;
        if !op.is_function() {
            return Err(Error::Parse(format!("'{}' is not a function of x", s)));
        }
        Ok(op.coeff(0))
    }
}

impl Poly {
    /// Parse a polynomial expression in x.
    pub fn parse(s: &str) -> Result<Poly> {
        let f = RatFunc::parse(s)?;
        if !f.is_polynomial() {
            return Err(Error::Parse(format!("'{}' is not a polynomial", s)));
        }
        Ok(f.numer())
    }
}
