//! Field axioms, the derivation rule and nullspaces over Q(x).

use diffop_core::qx::matrix::{nullspace_bareiss, nullspace_modular, verify_poly_kernel};
use diffop_core::qx::q;
use diffop_core::random;
use diffop_core::{QxMatrix, RatFunc, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn triple(seed: u64) -> (RatFunc, RatFunc, RatFunc) {
    let mut r = random::rng(seed);
    (random::ratfunc(&mut r, 3, 2), random::ratfunc(&mut r, 2, 3), random::ratfunc(&mut r, 2, 2))
}

/// Rank over Q by plain Gaussian elimination.
fn rank_q(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &piv;
                for j in c..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over Q(x) as the largest rank at ten integer points.
fn rank_by_evaluation(m: &QxMatrix) -> usize {
    (0..10i64)
        .filter_map(|k| {
            let x = q(3 * k - 13);
            let rows: Option<Vec<Vec<Rational>>> =
                (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).eval(&x)).collect()).collect();
            rows.map(rank_q)
        })
        .max()
        .unwrap()
}

fn matrix(seed: u64, rows: usize, cols: usize, dependent: bool) -> QxMatrix {
    let mut r = random::rng(seed);
    let mut m: Vec<Vec<RatFunc>> =
        (0..rows).map(|_| (0..cols).map(|_| RatFunc::from_zpoly(&random::zpoly_upto(&mut r, 2))).collect()).collect();
    if dependent && rows >= 3 {
        let (a, b) = (random::ratfunc(&mut r, 1, 1), random::ratfunc(&mut r, 1, 1));
        m[rows - 1] = (0..cols).map(|j| a.mul(&m[0][j]).add(&b.mul(&m[1][j]))).collect();
    }
    QxMatrix::from_rows(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let (a, b, c) = triple(seed);
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.sub(&a), RatFunc::zero());
        prop_assert_eq!(a.div(&a).unwrap(), RatFunc::one());
        prop_assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::one());
    }

    #[test]
    fn derivative_is_a_derivation(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let s = a.add(&b);
        if !s.is_zero() {
            let den = s.denom();
            prop_assert!(den.lc() == q(1));
            prop_assert_eq!(s.numer().gcd(&den).degree(), 0);
        }
        prop_assert_eq!(a.sub(&a).denom(), diffop_core::Poly::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn nullspace_against_rank(seed in any::<u64>(), rows in 1usize..5, extra in 0usize..3, dependent in any::<bool>()) {
        let m = matrix(seed, rows, rows + extra, dependent);
        let basis = m.nullspace();
        for v in &basis {
            prop_assert!(m.mul_vec(v).iter().all(|e| e.is_zero()));
        }
        prop_assert_eq!(rank_by_evaluation(&m) + basis.len(), m.cols());
        let rows = m.cleared_rows();
        let (a, b) = (nullspace_bareiss(&rows, m.cols()), nullspace_modular(&rows, m.cols()));
        prop_assert_eq!(a.len(), b.len());
        prop_assert!(verify_poly_kernel(&rows, &a) && verify_poly_kernel(&rows, &b));
    }
}
