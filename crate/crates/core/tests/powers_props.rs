//! Symmetric and exterior squares against truncated power-series solutions.

use diffop_core::powers::{ext_square, sym_square};
use diffop_core::qx::q;
use diffop_core::random;
use diffop_core::{DiffOperator, Rational, UnivariateSeries};
use num_traits::Zero;
use proptest::prelude::*;

/// Basis of power-series solutions at the ordinary point 0, solved term by
/// term from the polynomial coefficients.
fn series_basis(l: &DiffOperator, terms: usize) -> Vec<Vec<Rational>> {
    let p = l.cleared_coeffs();
    let n = l.order();
    let c = |i: usize, j: usize| -> Rational { Rational::from_integer(p[i].coeff(j)) };
    let ff = |a: usize, i: usize| -> Rational { (0..i).map(|t| q((a - t) as i64)).product() };
    assert!(!c(n, 0).is_zero());
    (0..n)
        .map(|b| {
            let mut y: Vec<Rational> = (0..n).map(|k| if k == b { q(1) } else { q(0) }).collect();
            for m in 0..terms.saturating_sub(n) {
                // coefficient of x^m in L(y), without the y_{m+n} term
                let mut s = q(0);
                for i in 0..=n {
                    for j in 0..p[i].coeffs().len() {
                        if j > m || (i == n && j == 0) {
                            continue;
                        }
                        let a = m - j + i;
                        s += c(i, j) * ff(a, i) * &y[a];
                    }
                }
                y.push(-s / (c(n, 0) * ff(m + n, n)));
            }
            y
        })
        .collect()
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum()).collect()
}

fn deriv(a: &[Rational]) -> Vec<Rational> {
    (1..a.len()).map(|k| &a[k] * q(k as i64)).collect()
}

fn annihilates(l: &DiffOperator, s: Vec<Rational>) -> bool {
    let n = s.len() - l.order();
    let r = l.apply_to_series(&UnivariateSeries::new(s), n).unwrap();
    r.coeffs().iter().all(|c| c.is_zero())
}

fn ordinary_operator(seed: u64, order: usize) -> DiffOperator {
    let mut r = random::rng(seed);
    loop {
        let l = random::operator(&mut r, order, 1);
        if !l.cleared_coeffs()[order].coeff(0).is_zero() {
            return l;
        }
    }
}

const TERMS: usize = 40;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn squares_annihilate_products(seed in any::<u64>(), order in 2usize..=3) {
        let l = ordinary_operator(seed, order);
        let sols = series_basis(&l, TERMS);
        for s in &sols {
            prop_assert!(annihilates(&l, s.clone()));
        }
        let s2 = sym_square(&l).unwrap();
        let e2 = ext_square(&l).unwrap();
        prop_assert_eq!(s2.full_dim, order * (order + 1) / 2);
        prop_assert_eq!(e2.full_dim, order * (order - 1) / 2);
        for i in 0..order {
            for j in i..order {
                prop_assert!(annihilates(&s2.operator, mul(&sols[i], &sols[j])));
                if i < j {
                    let w: Vec<Rational> = mul(&sols[i], &deriv(&sols[j]))
                        .iter()
                        .zip(mul(&deriv(&sols[i]), &sols[j]))
                        .map(|(a, b)| a - b)
                        .collect();
                    prop_assert!(annihilates(&e2.operator, w));
                }
            }
        }
    }
}
