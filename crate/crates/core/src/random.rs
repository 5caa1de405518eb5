//! Seeded generators for test instances and experiments.
//!
//! Integer coefficients are drawn from [−9, 9].

use crate::diffop::DiffOperator;
use crate::qx::{RatFunc, ZPoly};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int<R: Rng>(r: &mut R) -> i64 {
    r.gen_range(-9..=9)
}

pub fn nonzero_int<R: Rng>(r: &mut R) -> i64 {
    loop {
        let c = small_int(r);
        if c != 0 {
            return c;
        }
    }
}

/// Polynomial of exactly the given degree.
pub fn zpoly<R: Rng>(r: &mut R, degree: usize) -> ZPoly {
    let mut c: Vec<BigInt> = (0..degree).map(|_| BigInt::from(small_int(r))).collect();
    c.push(BigInt::from(nonzero_int(r)));
    ZPoly::new(c)
}

/// Polynomial of degree at most `degree` (possibly zero).
pub fn zpoly_upto<R: Rng>(r: &mut R, degree: usize) -> ZPoly {
    ZPoly::new((0..=degree).map(|_| BigInt::from(small_int(r))).collect())
}

/// Nonzero rational function with numerator and denominator degrees at most
/// the given bounds.
pub fn ratfunc<R: Rng>(r: &mut R, num_deg: usize, den_deg: usize) -> RatFunc {
    loop {
        let n = zpoly_upto(r, num_deg);
        let d = zpoly_upto(r, den_deg);
        if !n.is_zero() && !d.is_zero() {
            return RatFunc::from_zpoly(&n).div(&RatFunc::from_zpoly(&d)).unwrap();
        }
    }
}

/// Polynomial-coefficient operator of exact order with a leading coefficient
/// of exact degree.
pub fn operator<R: Rng>(r: &mut R, order: usize, degree: usize) -> DiffOperator {
    let mut c: Vec<ZPoly> = (0..order).map(|_| zpoly_upto(r, degree)).collect();
    c.push(zpoly(r, degree));
    DiffOperator::from_zpolys(&c)
}
