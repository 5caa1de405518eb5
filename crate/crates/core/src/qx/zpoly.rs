//! Dense univariate polynomials over Z, the workhorse behind `Poly` and `RatFunc`.

use super::modular::{add_mod, inv_mod, mul_mod, nth_prime, reduce, sub_mod, Crt};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly{:?}", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly { c: vec![BigInt::one()] }
    }

    pub fn x() -> Self {
        ZPoly { c: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn constant(a: BigInt) -> Self {
        Self::new(vec![a])
    }

    pub fn monomial(a: BigInt, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            });
        }
        ZPoly::new(c)
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        ZPoly::new(c)
    }

    pub fn scale(&self, a: &BigInt) -> ZPoly {
        if a.is_zero() {
            return ZPoly::zero();
        }
        ZPoly { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn shift(&self, k: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn pow(&self, e: u32) -> ZPoly {
        let mut r = ZPoly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    /// x·d/dx, the Euler derivation.
    pub fn theta(&self) -> ZPoly {
        ZPoly::new(self.c.iter().enumerate().map(|(i, a)| a * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut r = BigInt::zero();
        for a in self.c.iter().rev() {
            r = r * x + a;
        }
        r
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = g.gcd(a);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by content and make the leading coefficient positive.
    /// Returns (signed content, primitive part); zero maps to (0, 0).
    pub fn primitive_part(&self) -> (BigInt, ZPoly) {
        if self.is_zero() {
            return (BigInt::zero(), ZPoly::zero());
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return (g, self.clone());
        }
        (g.clone(), ZPoly { c: self.c.iter().map(|x| x / &g).collect() })
    }

    pub fn div_scalar_exact(&self, a: &BigInt) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| x / a).collect() }
    }

    /// Exact quotient self / o over Z, or `None` when o does not divide.
    pub fn div_exact(&self, o: &ZPoly) -> Option<ZPoly> {
        assert!(!o.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.c.len() < o.c.len() {
            return None;
        }
        let lc = o.lc();
        let mut r = self.c.clone();
        let n = o.c.len();
        let mut q = vec![BigInt::zero(); r.len() - n + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + n - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] -= &qk * b;
                }
            }
            q[k] = qk;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(ZPoly::new(q))
    }

    /// Pseudo-remainder: lc(o)^(deg self - deg o + 1)·self mod o.
    pub fn pseudo_rem(&self, o: &ZPoly) -> ZPoly {
        let mut r = self.clone();
        let lc = o.lc();
        let n = o.c.len();
        while !r.is_zero() && r.c.len() >= n {
            let top = r.lc();
            let sh = r.c.len() - n;
            r = r.scale(&lc).sub(&o.scale(&top).shift(sh));
        }
        r
    }

    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.c.iter().map(|a| reduce(a, p)).collect();
        trim(&mut v);
        v
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let mut r = 0u64;
        for a in self.c.iter().rev() {
            r = add_mod(mul_mod(r, x, p), reduce(a, p), p);
        }
        r
    }

    pub fn max_bits(&self) -> u64 {
        self.c.iter().map(|a| a.bits()).max().unwrap_or(0)
    }

    /// Greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return o.primitive_part().1.scale(&o.content());
        }
        if o.is_zero() {
            return self.primitive_part().1.scale(&self.content());
        }
        let cg = self.content().gcd(&o.content());
        let (_, a) = self.primitive_part();
        let (_, b) = o.primitive_part();
        prim_gcd(&a, &b).scale(&cg)
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over Z/p.
pub fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for x in a.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
    }
    a
}

pub fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let n = b.len();
    let inv = inv_mod(*b.last().unwrap(), p);
    while r.len() >= n {
        let f = mul_mod(*r.last().unwrap(), inv, p);
        let sh = r.len() - n;
        for (j, &bj) in b.iter().enumerate() {
            r[sh + j] = sub_mod(r[sh + j], mul_mod(f, bj, p), p);
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub fn mul_mod_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = add_mod(c[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut c);
    c
}

/// gcd of primitive polynomials with positive leading coefficients.
fn prim_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_constant() || b.is_constant() {
        return ZPoly::one();
    }
    if a == b {
        return a.clone();
    }
    let gamma = a.lc().gcd(&b.lc());
    let mut best_deg = usize::MAX;
    let mut crt: Option<Crt> = None;
    let mut primes_used: Vec<u64> = Vec::new();
    let mut last: Option<ZPoly> = None;
    let mut i = 0usize;
    loop {
        let p = nth_prime(i);
        i += 1;
        if reduce(&a.lc(), p) == 0 || reduce(&b.lc(), p) == 0 {
            continue;
        }
        let g = gcd_mod(&a.reduce_mod(p), &b.reduce_mod(p), p);
        let d = g.len() - 1;
        if d == 0 {
            return ZPoly::one();
        }
        if d > best_deg {
            continue;
        }
        let gm = reduce(&gamma, p);
        let img: Vec<u64> = g.iter().map(|&x| mul_mod(x, gm, p)).collect();
        if d < best_deg {
            best_deg = d;
            crt = Some(Crt::new(d + 1));
            primes_used.clear();
            last = None;
        }
        let c = crt.as_mut().unwrap();
        c.add(p, &img);
        primes_used.push(p);
        let half = &c.modulus >> 1u32;
        let cand = ZPoly::new(
            c.values
                .iter()
                .map(|v| if *v > half { v - &c.modulus } else { v.clone() })
                .collect(),
        );
        if last.as_ref() == Some(&cand) {
            let (_, g) = cand.primitive_part();
            if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return g;
            }
        }
        last = Some(cand);
        if primes_used.len() > 400 {
            break;
        }
    }
    prs_gcd(a, b)
}

/// Primitive polynomial remainder sequence; slow but unconditional.
fn prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive_part().1;
    }
    a.primitive_part().1
}
