//! Normalized rational functions, the coefficient field Q(x).
//!
//! Stored as `scale · num / den` with `num`, `den` primitive integer
//! polynomials of positive leading coefficient and `gcd(num, den) = 1`.
//! The public `numer()/denom()` view is the monic-denominator form.

use super::modular::{inv_mod, mul_mod, reduce_rational};
use super::poly::Poly;
use super::zpoly::ZPoly;
use super::Rational;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::ops;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scale: Rational,
    num: ZPoly,
    den: ZPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { scale: Rational::zero(), num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    pub fn x() -> Self {
        RatFunc { scale: Rational::one(), num: ZPoly::x(), den: ZPoly::one() }
    }

    pub fn constant(a: Rational) -> Self {
        if a.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: a, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_int(a: i64) -> Self {
        RatFunc::constant(Rational::from_integer(a.into()))
    }

    pub fn from_poly(p: &Poly) -> Self {
        let (s, z) = p.to_zpoly();
        if s.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: s, num: z, den: ZPoly::one() }
    }

    pub fn from_zpoly(z: &ZPoly) -> Self {
        Self::from_parts(Rational::one(), z.clone(), ZPoly::one())
    }

    /// `num / den`; errors when `den` is zero.
    pub fn new(num: &Poly, den: &Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (sn, n) = num.to_zpoly();
        let (sd, d) = den.to_zpoly();
        if sn.is_zero() {
            return Ok(RatFunc::zero());
        }
        Ok(Self::from_parts(sn / sd, n, d))
    }

    /// `scale · num / den` for arbitrary integer polynomials, `den ≠ 0`.
    pub fn from_parts(scale: Rational, num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if scale.is_zero() || num.is_zero() {
            return RatFunc::zero();
        }
        let (cn, mut n) = num.primitive_part();
        let (cd, mut d) = den.primitive_part();
        let scale = scale * Rational::new(cn, cd);
        if !d.is_constant() && !n.is_constant() {
            let g = n.gcd(&d);
            if !g.is_one() {
                n = n.div_exact(&g).unwrap();
                d = d.div_exact(&g).unwrap();
            }
        }
        RatFunc { scale, num: n, den: d }
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// Primitive numerator (up to the rational scale).
    pub fn num_z(&self) -> &ZPoly {
        &self.num
    }

    /// Primitive denominator with positive leading coefficient.
    pub fn den_z(&self) -> &ZPoly {
        &self.den
    }

    /// Numerator of the monic-denominator form.
    pub fn numer(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let s = &self.scale / Rational::from_integer(self.den.lc());
        Poly::from_zpoly(&s, &self.num)
    }

    /// Monic denominator.
    pub fn denom(&self) -> Poly {
        Poly::from_zpoly(&Rational::new(BigInt::one(), self.den.lc()), &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.num.is_constant() && self.den.is_constant())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value when constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.scale.clone())
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc { scale: -&self.scale, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn scale_by(&self, a: &Rational) -> Self {
        if a.is_zero() || self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: &self.scale * a, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a1, b1) = (self.scale.numer(), self.scale.denom());
        let (a2, b2) = (o.scale.numer(), o.scale.denom());
        let scale = Rational::new(BigInt::one(), b1 * b2);
        if self.den == o.den {
            let num = self.num.scale(&(a1 * b2)).add(&o.num.scale(&(a2 * b1)));
            if num.is_zero() {
                return RatFunc::zero();
            }
            if self.den.is_one() {
                let (c, n) = num.primitive_part();
                return RatFunc { scale: scale * Rational::from_integer(c), num: n, den: ZPoly::one() };
            }
            return Self::from_parts(scale, num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let e1 = self.den.div_exact(&g).unwrap();
        let e2 = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&e2).scale(&(a1 * b2)).add(&o.num.mul(&e1).scale(&(a2 * b1)));
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (c, mut n) = num.primitive_part();
        let mut den = self.den.mul(&e2);
        if !g.is_one() {
            let h = n.gcd(&g);
            if !h.is_one() {
                n = n.div_exact(&h).unwrap();
                den = den.div_exact(&h).unwrap();
            }
        }
        RatFunc { scale: scale * Rational::from_integer(c), num: n, den }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let scale = &self.scale * &o.scale;
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { scale, num: self.num.mul(&o.num), den: ZPoly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFunc { scale, num: n1.mul(&n2), den: d1.mul(&d2) }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { scale: self.scale.recip(), num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 { RatFunc::one() } else { RatFunc::zero() });
        }
        let e = e as u32;
        Ok(RatFunc {
            scale: num_traits::pow(self.scale.clone(), e as usize),
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    pub fn derivative(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() {
            let d = self.num.derivative();
            if d.is_zero() {
                return RatFunc::zero();
            }
            let (c, n) = d.primitive_part();
            return RatFunc { scale: &self.scale * Rational::from_integer(c), num: n, den: ZPoly::one() };
        }
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        if num.is_zero() {
            return RatFunc::zero();
        }
        Self::from_parts(self.scale.clone(), num, self.den.mul(&self.den))
    }

    /// k-th derivative.
    pub fn derivative_n(&self, k: usize) -> RatFunc {
        let mut r = self.clone();
        for _ in 0..k {
            r = r.derivative();
        }
        r
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let d = eval_z(&self.den, x);
        if d.is_zero() {
            return None;
        }
        Some(&self.scale * eval_z(&self.num, x) / d)
    }

    /// Value at `x` in Z/p, `None` when the denominator or scale is not
    /// invertible there.
    pub fn eval_mod(&self, x: u64, p: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        let s = reduce_rational(&self.scale, p)?;
        let d = self.den.eval_mod(x, p);
        if d == 0 {
            return None;
        }
        Some(mul_mod(mul_mod(s, self.num.eval_mod(x, p), p), inv_mod(d, p), p))
    }

    /// Numerator and denominator as integer polynomials with f = n / d,
    /// d having positive leading coefficient.
    pub fn to_integer_pair(&self) -> (ZPoly, ZPoly) {
        if self.is_zero() {
            return (ZPoly::zero(), ZPoly::one());
        }
        (self.num.scale(self.scale.numer()), self.den.scale(self.scale.denom()))
    }
}

fn eval_z(z: &ZPoly, x: &Rational) -> Rational {
    let mut r = Rational::zero();
    for a in z.coeffs().iter().rev() {
        r = r * x + Rational::from_integer(a.clone());
    }
    r
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.numer());
        }
        let (n, d) = self.to_integer_pair();
        let terms = |z: &ZPoly| z.coeffs().iter().filter(|c| !c.is_zero()).count();
        let ns = zpoly_string(&n);
        let ds = zpoly_string(&d);
        if terms(&n) > 1 {
            write!(f, "({})", ns)?;
        } else {
            f.write_str(&ns)?;
        }
        if terms(&d) == 1 && d.lc().is_one() {
            write!(f, "/{}", ds)
        } else {
            write!(f, "/({})", ds)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

pub(crate) fn zpoly_string(z: &ZPoly) -> String {
    let q: Vec<Rational> = z.coeffs().iter().map(|a| Rational::from_integer(a.clone())).collect();
    let mut s = String::new();
    super::poly::write_poly(&mut s, &q, "x").unwrap();
    s
}

impl ops::Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::add(self, o)
    }
}

impl ops::Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        RatFunc::sub(self, o)
    }
}

impl ops::Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::mul(self, o)
    }
}

impl ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(&p(n), &p(d)).unwrap()
    }

    #[test]
    fn telescoping_sum() {
        let a = rf(&[0, 1], &[1, 1]);
        let b = rf(&[1], &[1, 1]);
        assert_eq!(a.add(&b), RatFunc::one());
    }

    #[test]
    fn gcd_cancellation() {
        let a = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(a, RatFunc::from_poly(&p(&[1, 1])));
        assert_eq!(a.denom(), Poly::one());
    }

    #[test]
    fn inverse_pair() {
        let a = rf(&[0, 2], &[0, 0, 1]);
        let b = RatFunc::from_poly(&p(&[0, 1])).scale_by(&Rational::new(1.into(), 2.into()));
        assert_eq!(a.mul(&b), RatFunc::one());
    }

    #[test]
    fn division_by_zero() {
        assert!(RatFunc::one().div(&RatFunc::zero()).is_err());
        assert!(RatFunc::new(&p(&[1]), &Poly::zero()).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(rf(&[1], &[0, 1]).derivative(), rf(&[-1], &[0, 0, 1]));
        assert_eq!(rf(&[0, 0, 0, 1], &[1]).derivative(), rf(&[0, 0, 3], &[1]));
        assert_eq!(rf(&[0, 1], &[1, -1]).derivative(), rf(&[1], &[1, -2, 1]));
    }

    #[test]
    fn monic_view() {
        let a = rf(&[3], &[4, 2]);
        assert_eq!(a.denom(), p(&[2, 1]));
        assert_eq!(a.numer(), Poly::constant(Rational::new(3.into(), 2.into())));
    }

    #[test]
    fn display_forms() {
        assert_eq!(rf(&[1], &[0, 2]).to_string(), "1/(2*x)");
        assert_eq!(rf(&[1, 1], &[0, 1]).to_string(), "(x + 1)/x");
        assert_eq!(rf(&[-1], &[1, 1]).to_string(), "-1/(x + 1)");
        assert_eq!(RatFunc::constant(Rational::new(1.into(), 2.into())).to_string(), "1/2");
    }
}
