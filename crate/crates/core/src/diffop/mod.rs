//! The operator algebra Q(x)⟨Dx⟩.
//!
//! Adjoint convention: `adjoint(L) = (-1)^ord(L) · Σ (-Dx)^i ∘ a_i`.
//! It is an anti-multiplicative involution, additive only on operators whose
//! orders share a parity, and fixes both `a1·Dx + a1'/2` and
//! `a2·Dx^2 + a2'·Dx + a0`. The sign-free version is [`DiffOperator::formal_adjoint`].

mod parse;
mod theta;

pub use theta::ThetaExpr;

use crate::error::{Error, Result};
use crate::qx::matrix::clear_rational_row;
use crate::qx::{Poly, RatFunc, Rational, ZPoly};
use crate::series::UnivariateSeries;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffOperator {
    coeffs: Vec<RatFunc>,
}

pub(crate) fn binomial(n: usize, k: usize) -> Rational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(r)
}

impl DiffOperator {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::function(RatFunc::one())
    }

    /// Dx.
    pub fn d() -> Self {
        DiffOperator::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// Dx^k.
    pub fn d_pow(k: usize) -> Self {
        let mut c = vec![RatFunc::zero(); k + 1];
        c[k] = RatFunc::one();
        DiffOperator::new(c)
    }

    /// Multiplication by x.
    pub fn x() -> Self {
        Self::function(RatFunc::x())
    }

    /// θ = x·Dx.
    pub fn theta() -> Self {
        DiffOperator::new(vec![RatFunc::zero(), RatFunc::x()])
    }

    /// Order-zero operator: multiplication by f.
    pub fn function(f: RatFunc) -> Self {
        DiffOperator::new(vec![f])
    }

    pub fn constant(c: Rational) -> Self {
        Self::function(RatFunc::constant(c))
    }

    /// Operator with polynomial coefficients given lowest power of Dx first.
    pub fn from_polys(c: &[Poly]) -> Self {
        DiffOperator::new(c.iter().map(RatFunc::from_poly).collect())
    }

    pub fn from_zpolys(c: &[ZPoly]) -> Self {
        DiffOperator::new(c.iter().map(RatFunc::from_zpoly).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse::parse_operator(s)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// Coefficient of Dx^i (zero beyond the order).
    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power of Dx with nonzero coefficient; 0 for the zero operator.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_function(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOperator::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOperator::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        DiffOperator { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DiffOperator::new(self.coeffs.iter().map(|a| a.scale_by(c)).collect())
    }

    /// f·L (left multiplication by a function).
    pub fn lmul_fn(&self, f: &RatFunc) -> Self {
        DiffOperator::new(self.coeffs.iter().map(|a| a.mul(f)).collect())
    }

    /// L·f (composition with multiplication by f on the right).
    pub fn rmul_fn(&self, f: &RatFunc) -> Self {
        self.mul(&DiffOperator::function(f.clone()))
    }

    /// Dx·L.
    pub fn d_mul(&self) -> Self {
        let n = self.coeffs.len();
        if n == 0 {
            return DiffOperator::zero();
        }
        let mut c = vec![RatFunc::zero(); n + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            c[j] = c[j].add(&b.derivative());
            c[j + 1] = c[j + 1].add(b);
        }
        DiffOperator::new(c)
    }

    /// Noncommutative product self·o.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return DiffOperator::zero();
        }
        let n = self.order() + o.order() + 1;
        let mut acc = vec![RatFunc::zero(); n];
        let mut dib = o.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                dib = dib.d_mul();
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in dib.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[j] = acc[j].add(&a.mul(b));
                }
            }
        }
        DiffOperator::new(acc)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = DiffOperator::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// L(f) = Σ a_i f^(i).
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut r = RatFunc::zero();
        let mut d = f.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derivative();
            }
            if !a.is_zero() && !d.is_zero() {
                r = r.add(&a.mul(&d));
            }
        }
        r
    }

    /// Σ (-Dx)^i ∘ a_i, without the parity sign.
    pub fn formal_adjoint(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![RatFunc::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut der = a.clone();
            // term of D^k carries a^(i-k); walk k from i downwards
            for k in (0..=i).rev() {
                if k < i {
                    der = der.derivative();
                }
                if der.is_zero() {
                    break;
                }
                let mut c = binomial(i, k);
                if i % 2 == 1 {
                    c = -c;
                }
                out[k] = out[k].add(&der.scale_by(&c));
            }
        }
        DiffOperator::new(out)
    }

    /// Parity-signed adjoint (see module docs).
    pub fn adjoint(&self) -> Self {
        let f = self.formal_adjoint();
        if self.order() % 2 == 1 {
            f.neg()
        } else {
            f
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint() == *self
    }

    /// A = Q·B + R with ord R < ord B.
    pub fn right_divide(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = b.order();
        if self.is_zero() || self.order() < n {
            return Ok((DiffOperator::zero(), self.clone()));
        }
        let m = self.order();
        let mut dkb = Vec::with_capacity(m - n + 1);
        dkb.push(b.clone());
        for k in 1..=m - n {
            let next = dkb[k - 1].d_mul();
            dkb.push(next);
        }
        let lcb = b.lc().inv()?;
        let mut q = vec![RatFunc::zero(); m - n + 1];
        let mut r = self.clone();
        while !r.is_zero() && r.order() >= n {
            let k = r.order() - n;
            let t = r.lc().mul(&lcb);
            r = r.sub(&dkb[k].lmul_fn(&t));
            q[k] = q[k].add(&t);
        }
        Ok((DiffOperator::new(q), r))
    }

    /// A = B·Q + R with ord R < ord B, through formal adjoints.
    pub fn left_divide(&self, b: &Self) -> Result<(Self, Self)> {
        let (q, r) = self.formal_adjoint().right_divide(&b.formal_adjoint())?;
        Ok((q.formal_adjoint(), r.formal_adjoint()))
    }

    /// −a_{n−1}/a_n, the logarithmic derivative of the Wronskian.
    pub fn wronskian_logderiv(&self) -> Result<RatFunc> {
        if self.is_zero() || self.order() == 0 {
            return Err(Error::InvalidInput("Wronskian needs order at least 1".into()));
        }
        let n = self.order();
        self.coeff(n - 1).neg().div(&self.lc())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().unwrap();
        self.lmul_fn(&inv)
    }

    /// Polynomial coefficients: the operator multiplied on the left by the
    /// lcm of its denominators, integer content removed, positive leading
    /// coefficient.
    pub fn cleared_coeffs(&self) -> Vec<ZPoly> {
        let mut c = clear_rational_row(&self.coeffs);
        if c.last().is_some_and(|p| p.lc().is_negative()) {
            c = c.iter().map(|p| p.neg()).collect();
        }
        c
    }

    pub fn cleared(&self) -> Self {
        DiffOperator::from_zpolys(&self.cleared_coeffs())
    }

    /// Equality up to left multiplication by a nonzero function.
    pub fn same_up_to_function(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.monic() == o.monic()
    }

    /// Equality up to a nonzero rational constant.
    pub fn same_up_to_constant(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        if self.order() != o.order() {
            return false;
        }
        match self.lc().div(&o.lc()).ok().and_then(|r| r.as_constant()) {
            Some(c) => o.scale(&c) == *self,
            None => false,
        }
    }

    /// The first `n` coefficients of L(s).
    pub fn apply_to_series(&self, s: &UnivariateSeries, n: usize) -> Result<UnivariateSeries> {
        let ord = self.order();
        let avail = s.len().saturating_sub(ord);
        if n > avail {
            return Err(Error::InsufficientTerms { required: n + ord, available: s.len() });
        }
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let aser = UnivariateSeries::from_ratfunc(a, n)?;
            let ds = s.derivative_n(i);
            for (j, aj) in aser.coeffs().iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                for m in 0..n - j {
                    let v = &ds.coeffs()[m];
                    if !v.is_zero() {
                        out[j + m] += aj * v;
                    }
                }
            }
        }
        Ok(UnivariateSeries::new(out))
    }

    /// Exact text form, highest power of Dx first.
    pub fn to_text(&self) -> String {
        format_terms(
            self.coeffs.iter().enumerate().rev().map(|(i, c)| (i, c.to_string())),
            "Dx",
        )
    }

    /// Cleared polynomial-coefficient text form.
    pub fn to_cleared_text(&self) -> String {
        let c = self.cleared_coeffs();
        format_terms(
            c.iter().enumerate().rev().map(|(i, p)| (i, crate::qx::ratfunc::zpoly_string(p))),
            "Dx",
        )
    }
}

/// Joins `(power, coefficient text)` terms as `c*Dx^k + ...`.
pub(crate) fn format_terms(terms: impl Iterator<Item = (usize, String)>, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in terms {
        if c == "0" {
            continue;
        }
        let compound = {
            let body = c.strip_prefix('-').unwrap_or(&c);
            body.contains(" + ") || body.contains(" - ")
        };
        let (neg, body) = match c.strip_prefix('-') {
            Some(b) if !compound => (true, b.to_string()),
            _ => (false, c.clone()),
        };
        let body = if compound { format!("({})", body) } else { body };
        let dpart = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let term = if i == 0 {
            body
        } else if body == "1" {
            dpart
        } else {
            format!("{}*{}", body, dpart)
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOperator({})", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qx::{q, qq};

    fn op(s: &str) -> DiffOperator {
        DiffOperator::parse(s).unwrap()
    }

    #[test]
    fn leibniz() {
        let d = DiffOperator::d();
        let x = DiffOperator::x();
        assert_eq!(d.mul(&x), op("x*Dx + 1"));
        assert_eq!(d.mul(&d).mul(&x), op("x*Dx^2 + 2*Dx"));
        let t = op("x*Dx");
        assert_eq!(t.mul(&t), op("x^2*Dx^2 + x*Dx"));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(op("Dx").adjoint(), op("Dx"));
        assert_eq!(op("x*Dx").adjoint(), op("x*Dx + 1"));
        assert_eq!(op("x*Dx + 1/2").adjoint(), op("x*Dx + 1/2"));
        assert!(op("(x^2+1)*Dx^2 + 2*x*Dx + x").is_self_adjoint());
        assert!(!op("x*Dx").is_self_adjoint());
    }

    #[test]
    fn right_division_examples() {
        let (qq_, r) = op("Dx^2").right_divide(&op("Dx")).unwrap();
        assert_eq!((qq_, r), (op("Dx"), DiffOperator::zero()));
        let (qq_, r) = op("Dx^2 + 1").right_divide(&op("Dx")).unwrap();
        assert_eq!((qq_, r), (op("Dx"), op("1")));
        assert!(op("Dx").right_divide(&DiffOperator::zero()).is_err());
    }

    #[test]
    fn left_division_examples() {
        let (qq_, r) = op("Dx^2").left_divide(&op("Dx")).unwrap();
        assert_eq!((qq_, r), (op("Dx"), DiffOperator::zero()));
        let a = op("x*Dx + 1");
        let b = op("x");
        let (qq_, r) = a.left_divide(&b).unwrap();
        assert_eq!(qq_, op("Dx + 1/x"));
        assert!(r.is_zero());
        assert_eq!(b.mul(&qq_).add(&r), a);
    }

    #[test]
    fn wronskian() {
        assert!(op("Dx^2").wronskian_logderiv().unwrap().is_zero());
        let l = op("(x^2+1)*Dx^2 + 2*x*Dx + x");
        assert_eq!(l.wronskian_logderiv().unwrap(), RatFunc::parse("-2*x/(x^2+1)").unwrap());
        assert!(DiffOperator::zero().wronskian_logderiv().is_err());
    }

    #[test]
    fn series_application() {
        let geo = UnivariateSeries::new(vec![q(1); 12]);
        let l = op("(1-x)*Dx - 1");
        let r = l.apply_to_series(&geo, 11).unwrap();
        assert!(r.coeffs().iter().all(|c| c.is_zero()));
        let mut f = Rational::one();
        let mut e = Vec::new();
        for k in 0..10 {
            e.push(f.clone());
            f /= q(k + 1);
        }
        let exp = UnivariateSeries::new(e);
        assert_eq!(op("Dx").apply_to_series(&exp, 9).unwrap(), exp.truncate(9));
        assert!(op("1/x*Dx").apply_to_series(&exp, 5).is_err());
        assert!(op("Dx").apply_to_series(&exp, 10).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let l = op("(x^2+1)/(3*x)*Dx^2 - 1/2*x*Dx + 7");
        assert_eq!(DiffOperator::parse(&l.to_text()).unwrap(), l);
        assert_eq!(op("x*Dx + 1/2").to_cleared_text(), "2*x*Dx + 1");
        assert_eq!(op("-Dx^2 + x").to_cleared_text(), "Dx^2 - x");
        assert_eq!(op("(1-x)*Dx - 1").to_text(), "(-x + 1)*Dx - 1");
        let _ = qq(1, 2);
    }
}
