//! Build/extract round trips, adjoint decompositions and the continuant
//! expansion on random towers.

use diffop_core::tower::*;
use diffop_core::{DiffOperator, Error, RatFunc};
use proptest::prelude::*;

const PATTERNS: &[&[usize]] = &[&[1, 1], &[1, 1, 1], &[2, 2], &[2, 2, 2], &[1, 3, 1], &[3, 1, 3], &[2, 4], &[4, 2, 4]];

fn pattern() -> impl Strategy<Value = &'static [usize]> {
    proptest::sample::select(PATTERNS)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn build_extract_round_trip(orders in pattern(), seed in any::<u64>(), rdeg in 0usize..=1) {
        let d = Decomposition::random(orders, 1, rdeg, seed).unwrap();
        let t = build(&d);
        prop_assert_eq!(verify_intertwining_chain(&t), Ok(()));
        prop_assert_eq!(t.top().order(), orders.iter().sum::<usize>());
        let x = t.first_intertwiner().unwrap();
        prop_assert!(check_intertwiner(t.top(), x));
        let (e, tr) = extract(t.top(), x).unwrap();
        prop_assert_eq!(e.units(), d.units());
        prop_assert_eq!(e.r(), d.r());
        prop_assert_eq!(tr, t);
    }

    #[test]
    fn continuant_matches_recursion(orders in pattern(), seed in any::<u64>()) {
        let d = Decomposition::random(orders, 1, 1, seed).unwrap();
        prop_assert_eq!(expand_operator(&d), build(&d).top().clone());
    }

    #[test]
    fn adjoint_decomposition_twice(orders in pattern(), seed in any::<u64>()) {
        let d = Decomposition::random(orders, 1, 1, seed).unwrap();
        let a = adjoint_decomposition(&d).unwrap();
        prop_assert_eq!(a.operator(), d.operator().adjoint());
        let aa = adjoint_decomposition(&a).unwrap();
        prop_assert_eq!(aa.operator(), d.operator());
    }

    #[test]
    fn extraction_keeps_parity(orders in pattern(), seed in any::<u64>()) {
        let d = Decomposition::random(orders, 1, 1, seed).unwrap();
        let t = build(&d);
        let (e, _) = extract(t.top(), &t.first_intertwiner().unwrap().scale(&diffop_core::qx::q(-2))).unwrap();
        let o = e.orders();
        prop_assert!(o.iter().all(|k| k % 2 == o[0] % 2));
        prop_assert_eq!(e.operator(), t.top().clone());
    }
}

#[test]
fn fibonacci_term_counts() {
    let counts: Vec<usize> = (0..=7).map(|n| expand_terms(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 3, 5, 8, 13, 21]);
}

#[test]
fn mixed_parity_rejected() {
    let units = vec![DiffOperator::d(), DiffOperator::d_pow(2)];
    assert!(matches!(Decomposition::new(units, RatFunc::one()), Err(Error::MixedParity(_))));
}

#[test]
fn identity_suite_small() {
    let report = verify_identities(6, 99);
    assert!(report.passed(), "{:?}", report.failures);
}
