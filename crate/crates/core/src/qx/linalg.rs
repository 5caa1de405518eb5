//! Right kernels of matrices over Q.
//!
//! Two routes: fraction-free Bareiss elimination over Z for small systems,
//! and multi-modular elimination with rational reconstruction for large
//! ones. Both return the RREF-normalized basis (one vector per free column,
//! that coordinate 1, other free coordinates 0), so their outputs coincide.

use super::modular::{kernel_from_rref, nth_prime, profile_better, reconstruct_vector, reduce, rref_mod, Crt};
use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Clear a rational row to a primitive integer row.
pub fn clear_row(row: &[Rational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for a in row {
        den = den.lcm(a.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|a| (a * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|a| a / &g).collect()
    }
}

pub fn kernel_q(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let z: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_row(r)).collect();
    kernel_z(&z, ncols)
}

pub fn kernel_z(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<Rational>> {
    let bits = rows.iter().flatten().map(|a| a.bits()).max().unwrap_or(0);
    if rows.len() * ncols <= 144 && bits <= 128 {
        kernel_z_bareiss(rows, ncols)
    } else {
        kernel_z_modular(rows, ncols)
    }
}

/// Fraction-free elimination over Z followed by back-substitution over Q.
pub fn kernel_z_bareiss(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    back_substitute(&a[..r], &pivots, ncols)
}

fn back_substitute(ech: &[Vec<BigInt>], pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); ncols];
        x[f] = Rational::one();
        for (i, &c) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in c + 1..ncols {
                if !ech[i][j].is_zero() && !x[j].is_zero() {
                    s += &x[j] * Rational::from_integer(ech[i][j].clone());
                }
            }
            x[c] = -s / Rational::from_integer(ech[i][c].clone());
        }
        basis.push(x);
    }
    basis
}

pub fn kernel_z_modular(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<Rational>> {
    modular_kernel(
        ncols,
        |p| Some(rows.iter().map(|r| r.iter().map(|a| reduce(a, p)).collect()).collect()),
        |basis| verify_z(rows, basis),
    )
}

/// Exact check that every basis vector is annihilated by the integer rows.
pub fn verify_z(rows: &[Vec<BigInt>], basis: &[Vec<Rational>]) -> bool {
    basis.par_iter().all(|v| {
        let w = clear_row(v);
        rows.iter().all(|r| {
            let mut s = BigInt::zero();
            for (a, b) in r.iter().zip(&w) {
                if !a.is_zero() && !b.is_zero() {
                    s += a * b;
                }
            }
            s.is_zero()
        })
    })
}

/// Multi-modular kernel driver. `image(p)` gives the matrix mod p (or `None`
/// for a prime to skip); `verify` is the exact acceptance test.
pub fn modular_kernel<F, V>(ncols: usize, image: F, verify: V) -> Vec<Vec<Rational>>
where
    F: Fn(u64) -> Option<Vec<Vec<u64>>> + Sync,
    V: Fn(&[Vec<Rational>]) -> bool,
{
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<Vec<usize>> = None;
    let mut crt = Crt::new(0);
    let mut used = 0usize;
    let mut next_try = 1usize;
    let mut i = 0usize;
    loop {
        let primes: Vec<u64> = (i..i + batch).map(nth_prime).collect();
        i += batch;
        let images: Vec<Option<(Vec<usize>, Vec<Vec<u64>>)>> = primes
            .par_iter()
            .map(|&p| {
                let mut m = image(p)?;
                let piv = rref_mod(&mut m, ncols, p);
                let k = kernel_from_rref(&m, &piv, ncols, p);
                Some((piv, k))
            })
            .collect();
        for (p, img) in primes.into_iter().zip(images) {
            let Some((piv, kern)) = img else { continue };
            if kern.is_empty() {
                // Rank mod p never exceeds rank over Q: full column rank is final.
                return Vec::new();
            }
            match &best {
                Some(b) if *b == piv => {}
                Some(b) if !profile_better(&piv, b) => continue,
                _ => {
                    best = Some(piv);
                    crt = Crt::new(kern.len() * ncols);
                    used = 0;
                    next_try = 1;
                }
            }
            let flat: Vec<u64> = kern.into_iter().flatten().collect();
            crt.add(p, &flat);
            used += 1;
            if used >= next_try {
                next_try = used + used.div_ceil(2);
                if let Some(vals) = reconstruct_vector(&crt.values, &crt.modulus) {
                    let basis: Vec<Vec<Rational>> = vals.chunks(ncols).map(|c| c.to_vec()).collect();
                    if verify(&basis) {
                        return basis;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zrow(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn simple_kernel() {
        let m = vec![zrow(&[1, 1])];
        let k = kernel_z_bareiss(&m, 2);
        assert_eq!(k, vec![vec![Rational::from_integer((-1).into()), Rational::one()]]);
        assert_eq!(kernel_z_modular(&m, 2), k);
    }

    #[test]
    fn full_rank_is_empty() {
        let m = vec![zrow(&[1, 0]), zrow(&[0, 1])];
        assert!(kernel_z_bareiss(&m, 2).is_empty());
        assert!(kernel_z_modular(&m, 2).is_empty());
    }

    #[test]
    fn routes_agree_on_rank_deficient() {
        let m = vec![zrow(&[2, 3, 5, 7, 11]), zrow(&[1, -1, 4, 0, 2]), zrow(&[3, 2, 9, 7, 13])];
        let a = kernel_z_bareiss(&m, 5);
        let b = kernel_z_modular(&m, 5);
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);
        assert!(verify_z(&m, &a));
    }

    #[test]
    fn large_entries_need_several_primes() {
        let big: BigInt = BigInt::from(10u32).pow(60u32) + 7;
        let m = vec![
            vec![big.clone(), BigInt::from(3), -&big * 5 + 1],
            vec![BigInt::from(1), big.clone() * 2, BigInt::from(-9)],
        ];
        let a = kernel_z_bareiss(&m, 3);
        let b = kernel_z_modular(&m, 3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
    }
}
