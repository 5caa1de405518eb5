//! Word-size prime fields, Chinese remaindering and rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Mutex;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse in Z/p for prime p; `a` must be nonzero mod p.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The i-th prime below 2^62, counting downwards. Deterministic.
pub fn nth_prime(i: usize) -> u64 {
    let mut cache = PRIMES.lock().unwrap();
    while cache.len() <= i {
        let mut c = cache.last().copied().unwrap_or((1u64 << 62) + 1) - 2;
        while !is_prime(c) {
            c -= 2;
        }
        cache.push(c);
    }
    cache[i]
}

/// Reduce a big integer into [0, p).
pub fn reduce(a: &BigInt, p: u64) -> u64 {
    let r = (a.magnitude() % p).to_u64().unwrap();
    if a.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Reduce a rational into Z/p; `None` when the denominator vanishes mod p.
pub fn reduce_rational(a: &BigRational, p: u64) -> Option<u64> {
    let d = reduce(a.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(reduce(a.numer(), p), inv_mod(d, p), p))
}

/// Symmetric lift of a residue to (-p/2, p/2].
pub fn symmetric(a: u64, p: u64) -> i128 {
    if a > p / 2 {
        a as i128 - p as i128
    } else {
        a as i128
    }
}

/// Incremental Chinese remaindering of a fixed-length vector of residues.
#[derive(Clone, Debug)]
pub struct Crt {
    pub modulus: BigInt,
    pub values: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt {
            modulus: BigInt::one(),
            values: vec![BigInt::zero(); len],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.modulus.is_one()
    }

    pub fn add(&mut self, p: u64, residues: &[u64]) {
        assert_eq!(residues.len(), self.values.len());
        if self.modulus.is_one() {
            for (v, &r) in self.values.iter_mut().zip(residues) {
                *v = BigInt::from(r);
            }
            self.modulus = BigInt::from(p);
            return;
        }
        let minv = inv_mod(reduce(&self.modulus, p), p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = reduce(v, p);
            let t = mul_mod(sub_mod(r, cur, p), minv, p);
            if t != 0 {
                *v += &self.modulus * t;
            }
        }
        self.modulus *= p;
    }

    pub fn bits(&self) -> u64 {
        self.modulus.bits()
    }
}

/// Wang's rational reconstruction with balanced bounds sqrt(m/2).
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(BigRational::zero());
    }
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Reconstruct a whole vector, sharing a running common denominator so most
/// entries only need a symmetric lift.
pub fn reconstruct_vector(values: &[BigInt], m: &BigInt) -> Option<Vec<BigRational>> {
    let half = m >> 1u32;
    let bound = (m >> 1u32).sqrt();
    let mut den = BigInt::one();
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let scaled = (v * &den).mod_floor(m);
        let lifted = if scaled > half { scaled - m } else { scaled };
        if lifted.abs() <= bound {
            out.push(BigRational::new(lifted, den.clone()));
            continue;
        }
        let q = rational_reconstruct(v, m)?;
        den = den.lcm(q.denom());
        if den > bound {
            return None;
        }
        out.push(q);
    }
    Some(out)
}

/// Reduced row echelon form in place over Z/p; returns pivot columns.
pub fn rref_mod(mat: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let nrows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, piv);
        let inv = inv_mod(mat[r][c], p);
        if inv != 1 {
            for x in mat[r][c..].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
        }
        let (head, tail) = mat.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[c];
            if f != 0 {
                let nf = p - f;
                for j in c..ncols {
                    if prow[j] != 0 {
                        row[j] = add_mod(row[j], mul_mod(nf, prow[j], p), p);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis of a matrix already in RREF with the given pivots:
/// one vector per free column, that column set to 1.
pub fn kernel_from_rref(mat: &[Vec<u64>], pivots: &[usize], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = (p - mat[i][f]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Ordering of rank profiles: larger rank wins, then lexicographically
/// smaller pivot list. Over a good prime the true profile is the best one.
pub fn profile_better(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return a.len() > b.len();
    }
    a < b
}
