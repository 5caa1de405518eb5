//! Dense polynomials over Q.

use super::zpoly::ZPoly;
use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients lowest degree first; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rational::one()] }
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(a: Rational) -> Self {
        Poly::new(vec![a])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let (ca, a) = self.to_zpoly();
        let (cb, b) = o.to_zpoly();
        Poly::from_zpoly(&(ca * cb), &a.mul(&b))
    }

    pub fn scale(&self, a: &Rational) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x * a).collect() }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut r = Rational::zero();
        for a in self.coeffs.iter().rev() {
            r = r * x + a;
        }
        r
    }

    /// Euclidean division over Q.
    pub fn div_rem(&self, o: &Poly) -> (Poly, Poly) {
        assert!(!o.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let n = o.coeffs.len();
        if r.len() < n {
            return (Poly::zero(), self.clone());
        }
        let inv = o.lc().recip();
        let mut q = vec![Rational::zero(); r.len() - n + 1];
        for k in (0..q.len()).rev() {
            let f = &r[k + n - 1] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            q[k] = f;
        }
        r.truncate(n - 1);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let g = self.to_zpoly().1.gcd(&o.to_zpoly().1);
        Poly::from_zpoly(&Rational::one(), &g).monic()
    }

    /// Split into a rational content and a primitive integer polynomial with
    /// positive leading coefficient. Zero maps to (0, 0).
    pub fn to_zpoly(&self) -> (Rational, ZPoly) {
        if self.is_zero() {
            return (Rational::zero(), ZPoly::zero());
        }
        let mut den = BigInt::one();
        for a in &self.coeffs {
            den = den.lcm(a.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|a| (a * &den).to_integer()).collect();
        let (g, z) = ZPoly::new(ints).primitive_part();
        (Rational::new(g, den), z)
    }

    pub fn from_zpoly(scale: &Rational, z: &ZPoly) -> Poly {
        if scale.is_zero() {
            return Poly::zero();
        }
        Poly::new(z.coeffs().iter().map(|a| scale * Rational::from_integer(a.clone())).collect())
    }

    /// Cleared integer form with content removed, and positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        self.to_zpoly().1
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "x")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Writes `c_n*x^n + ... + c_0`, highest degree first.
pub(crate) fn write_poly(f: &mut impl fmt::Write, coeffs: &[Rational], var: &str) -> fmt::Result {
    let mut first = true;
    for (k, a) in coeffs.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let neg = a.is_negative();
        let mag = a.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        match k {
            0 => write!(f, "{}", mag)?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if k == 1 {
                    write!(f, "{}", var)?;
                } else {
                    write!(f, "{}^{}", var, k)?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}
