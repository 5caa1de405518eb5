//! Self-adjoint constructors, symmetrization and right normalization.

use diffop_core::qx::qq;
use diffop_core::random;
use diffop_core::selfadjoint::*;
use diffop_core::{DiffOperator, RatFunc};
use proptest::prelude::*;

fn pair(seed: u64) -> (RatFunc, RatFunc) {
    let mut r = random::rng(seed);
    (random::ratfunc(&mut r, 2, 1), random::ratfunc(&mut r, 2, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn constructors_are_self_adjoint(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        prop_assert!(make_order1(&a).unwrap().is_self_adjoint());
        prop_assert!(make_order2(&a, &b).unwrap().is_self_adjoint());
        prop_assert!(make_order3(&a, &b).unwrap().is_self_adjoint());
    }

    #[test]
    fn constructors_agree_with_symmetrize(seed in any::<u64>()) {
        let (a, c) = pair(seed);
        let d = DiffOperator::d;
        prop_assert_eq!(symmetrize(&d().lmul_fn(&a)), make_order1(&a).unwrap());
        let p2 = DiffOperator::d_pow(2).lmul_fn(&a).add(&DiffOperator::function(c.clone()));
        let a0 = c.add(&a.derivative_n(2).scale_by(&qq(1, 2)));
        prop_assert_eq!(symmetrize(&p2), make_order2(&a, &a0).unwrap());
        let p3 = DiffOperator::d_pow(3).lmul_fn(&a).add(&d().lmul_fn(&c));
        let a1 = c.add(&a.derivative_n(2).scale_by(&qq(3, 2)));
        prop_assert_eq!(symmetrize(&p3), make_order3(&a, &a1).unwrap());
    }

    #[test]
    fn symmetrize_idempotent(seed in any::<u64>(), order in 1usize..=6) {
        let mut r = random::rng(seed);
        let p = random::operator(&mut r, order, 2);
        let s = symmetrize(&p);
        prop_assert_eq!(s.order(), order);
        prop_assert!(s.is_self_adjoint());
        prop_assert_eq!(symmetrize(&s), s);
    }

    #[test]
    fn random_generation(seed in any::<u64>(), order in 1usize..=7) {
        let u = random_self_adjoint(order, 2, seed).unwrap();
        prop_assert!(u.is_self_adjoint());
        prop_assert_eq!(u.order(), order);
        prop_assert_eq!(u.lc().numer().degree(), 2);
    }

    #[test]
    fn right_normalization_round_trip(seed in any::<u64>(), order in 1usize..=4) {
        let u = random_self_adjoint(order, 1, seed).unwrap();
        let mut r = random::rng(seed ^ 0xabc);
        let f = random::ratfunc(&mut r, 1, 1);
        let uf = u.rmul_fn(&f);
        let g = right_normalize_self_adjoint(&uf).unwrap().expect("normalizer");
        let v = uf.rmul_fn(&g);
        prop_assert!(v.is_self_adjoint());
        prop_assert!(v.same_up_to_constant(&u));
    }
}
