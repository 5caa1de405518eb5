//! Truncated univariate power series with exact rational coefficients.
//!
//! File format: one rational per line in index order (`n` or `n/d`),
//! blank lines and `#` comments ignored.

use crate::error::{Error, Result};
use crate::qx::{RatFunc, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt::Write as _;

/// c_0..c_{n-1}; the truncation order is the length.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UnivariateSeries {
    coeffs: Vec<Rational>,
}

impl UnivariateSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        UnivariateSeries { coeffs }
    }

    pub fn from_integers(c: &[BigInt]) -> Self {
        UnivariateSeries { coeffs: c.iter().map(|a| Rational::from_integer(a.clone())).collect() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Truncation order.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, n: usize) -> Self {
        UnivariateSeries { coeffs: self.coeffs[..n.min(self.len())].to_vec() }
    }

    /// Series of a rational function whose denominator does not vanish at 0.
    pub fn from_ratfunc(f: &RatFunc, n: usize) -> Result<Self> {
        let (num, den) = f.to_integer_pair();
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::NotExpandable);
        }
        let d0 = Rational::from_integer(d0);
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = Rational::from_integer(num.coeff(k));
            for j in 1..=k.min(den.len().saturating_sub(1)) {
                let dj = den.coeff(j);
                if !dj.is_zero() {
                    s -= Rational::from_integer(dj) * &out[k - j];
                }
            }
            out.push(s / &d0);
        }
        Ok(UnivariateSeries { coeffs: out })
    }

    /// i-th derivative, truncated to the coefficients it determines.
    pub fn derivative_n(&self, i: usize) -> Self {
        if i == 0 {
            return self.clone();
        }
        let n = self.len().saturating_sub(i);
        let coeffs = (0..n)
            .map(|m| {
                let mut f = BigInt::one();
                for t in 1..=i {
                    f *= BigInt::from(m + t);
                }
                &self.coeffs[m + i] * Rational::from_integer(f)
            })
            .collect();
        UnivariateSeries { coeffs }
    }

    /// Coefficient-wise product, truncated to the shorter input.
    pub fn hadamard(&self, o: &Self) -> Self {
        UnivariateSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).collect() }
    }

    /// Cauchy product truncated to the shorter input.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let mut c = vec![Rational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        UnivariateSeries { coeffs: c }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let v: Rational = body
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: not a rational: '{}'", lineno + 1, body)))?;
            coeffs.push(v);
        }
        Ok(UnivariateSeries { coeffs })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.coeffs {
            writeln!(s, "{}", c).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qx::q;

    #[test]
    fn rational_expansion() {
        let f = RatFunc::parse("1/(1-x)^2").unwrap();
        let s = UnivariateSeries::from_ratfunc(&f, 5).unwrap();
        assert_eq!(s.coeffs(), &[q(1), q(2), q(3), q(4), q(5)]);
        assert!(UnivariateSeries::from_ratfunc(&RatFunc::parse("1/x").unwrap(), 3).is_err());
    }

    #[test]
    fn file_format() {
        let s = UnivariateSeries::parse("# header\n1\n-3/4  # note\n\n5\n").unwrap();
        assert_eq!(s.coeffs(), &[q(1), Rational::new((-3).into(), 4.into()), q(5)]);
        assert_eq!(UnivariateSeries::parse(&s.to_text()).unwrap(), s);
        assert!(UnivariateSeries::parse("1\nabc\n").is_err());
    }

    #[test]
    fn derivative() {
        let s = UnivariateSeries::new(vec![q(1), q(1), q(1), q(1)]);
        assert_eq!(s.derivative_n(2).coeffs(), &[q(2), q(6)]);
    }
}
