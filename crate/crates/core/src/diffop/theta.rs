//! θ-form of operators, θ = x·Dx.

use super::DiffOperator;
use crate::qx::{RatFunc, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Σ b_k(x)·θ^k with rational-function coefficients b_k.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaExpr {
    coeffs: Vec<RatFunc>,
}

/// Signed Stirling numbers of the first kind s(n, k), rows 0..=n.
fn stirling1(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = &s[i - 1][k - 1] - BigInt::from(i - 1) * &s[i - 1][k];
        }
    }
    s
}

/// Stirling numbers of the second kind S(n, k), rows 0..=n.
fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = &s[i - 1][k - 1] + BigInt::from(k) * &s[i - 1][k];
        }
    }
    s
}

impl ThetaExpr {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ThetaExpr { coeffs }
    }

    /// Coefficient of θ^k.
    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Terms `(power of x, power of θ, coefficient)` when every b_k is a
    /// Laurent polynomial.
    pub fn terms(&self) -> Option<Vec<(i64, usize, Rational)>> {
        let mut out = Vec::new();
        for (k, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let d = b.den_z();
            let nz: Vec<usize> = d.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect();
            if nz.len() != 1 {
                return None;
            }
            let shift = nz[0] as i64;
            let dl = Rational::from_integer(d.lc());
            let n = b.num_z();
            for (j, c) in n.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((j as i64 - shift, k, b.scale() * Rational::from_integer(c.clone()) / &dl));
                }
            }
        }
        Some(out)
    }

    /// Clear denominators: polynomial coefficients in x, content removed.
    pub fn cleared(&self) -> Vec<crate::qx::ZPoly> {
        let mut c = crate::qx::matrix::clear_rational_row(&self.coeffs);
        if c.last().is_some_and(|p| num_traits::Signed::is_negative(&p.lc())) {
            c = c.iter().map(|p| p.neg()).collect();
        }
        c
    }
}

impl DiffOperator {
    /// θ = x·Dx expansion: θ^k = Σ_j S(k, j) x^j Dx^j.
    pub fn from_theta(e: &ThetaExpr) -> DiffOperator {
        let n = e.degree();
        let s2 = stirling2(n);
        let mut out = vec![RatFunc::zero(); n + 1];
        for (k, b) in e.coeffs().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for j in 0..=k {
                if s2[k][j].is_zero() {
                    continue;
                }
                let xj = RatFunc::x().pow(j as i32).unwrap();
                let c = RatFunc::constant(Rational::from_integer(s2[k][j].clone()));
                out[j] = out[j].add(&b.mul(&xj).mul(&c));
            }
        }
        DiffOperator::new(out)
    }

    /// Dx^i = x^(−i) Σ_j s(i, j) θ^j.
    pub fn to_theta(&self) -> ThetaExpr {
        let n = self.order();
        let s1 = stirling1(n);
        let mut out = vec![RatFunc::zero(); n + 1];
        for (i, a) in self.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let xi = RatFunc::x().pow(-(i as i32)).unwrap();
            let base = a.mul(&xi);
            for j in 0..=i {
                if s1[i][j].is_zero() {
                    continue;
                }
                let c = RatFunc::constant(Rational::from_integer(s1[i][j].clone()));
                out[j] = out[j].add(&base.mul(&c));
            }
        }
        ThetaExpr::new(out)
    }
}

impl std::fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = super::format_terms(
            self.coeffs.iter().enumerate().rev().map(|(i, c)| (i, c.to_string())),
            "theta",
        );
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_basics() {
        let t = ThetaExpr::new(vec![RatFunc::zero(), RatFunc::one()]);
        assert_eq!(DiffOperator::from_theta(&t), DiffOperator::parse("x*Dx").unwrap());
        let t2 = ThetaExpr::new(vec![RatFunc::zero(), RatFunc::zero(), RatFunc::one()]);
        assert_eq!(DiffOperator::from_theta(&t2), DiffOperator::parse("x^2*Dx^2 + x*Dx").unwrap());
    }

    #[test]
    fn roundtrip_through_operator() {
        let l = DiffOperator::parse("(x+1)*Dx^3 - 1/x*Dx + 2").unwrap();
        assert_eq!(DiffOperator::from_theta(&l.to_theta()), l);
        let t = DiffOperator::parse("theta^3 - 729*x*(theta+1/3)^3").unwrap().to_theta();
        let terms = t.terms().unwrap();
        assert!(terms.contains(&(0, 3, Rational::one())));
        assert!(terms.contains(&(1, 3, Rational::from_integer((-729).into()))));
    }
}
