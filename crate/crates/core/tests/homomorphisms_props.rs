//! Intertwiner search soundness and completeness on built towers, and the
//! solution-transform identity.

use diffop_core::homomorphisms::*;
use diffop_core::qx::linalg::kernel_q;
use diffop_core::random;
use diffop_core::tower::{build, Decomposition};
use diffop_core::{DiffOperator, Poly, RatFunc, Rational};
use proptest::prelude::*;

/// Common denominator of the coefficients of x.
fn denominator(x: &DiffOperator) -> Poly {
    x.coeffs().iter().fold(Poly::one(), |d, c| {
        let e = c.denom();
        let g = d.gcd(&e);
        d.mul(&e).div_rem(&g).0.monic()
    })
}

/// True when x lies in the Q-span of basis.
fn in_span(basis: &[DiffOperator], x: &DiffOperator, den: &Poly) -> bool {
    let dr = RatFunc::from_poly(den);
    let mut all = basis.to_vec();
    all.push(x.clone());
    let ord = all.iter().map(|o| o.order()).max().unwrap();
    let deg = all.iter().flat_map(|o| o.coeffs()).map(|c| c.mul(&dr).numer().degree().max(0) as usize).max().unwrap();
    let rows: Vec<Vec<Rational>> = (0..=ord)
        .flat_map(|i| {
            let all = &all;
            let dr = &dr;
            (0..=deg).map(move |k| all.iter().map(|o| o.coeff(i).mul(dr).numer().coeff(k)).collect())
        })
        .collect();
    kernel_q(&rows, all.len()).iter().any(|v| !num_traits::Zero::is_zero(v.last().unwrap()))
}

fn orders() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=2, 2usize..=4).prop_map(|(o, n)| vec![o; n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn built_intertwiner_is_found(orders in orders(), seed in any::<u64>()) {
        let d = Decomposition::random(&orders, 1, 1, seed).unwrap();
        let t = build(&d);
        let l = t.top();
        let x = t.first_intertwiner().unwrap();
        let den = denominator(x);
        let deg = x.coeffs().iter().map(|c| c.mul(&RatFunc::from_poly(&den)).numer().degree().max(0) as usize).max().unwrap();
        let bounds = AnsatzBounds { order: x.order(), numerator_degree: deg, denominator: Some(den.clone()) };
        let found = intertwiner_search(l, &bounds).unwrap();
        for y in &found {
            prop_assert!(check_intertwiner(l, y));
        }
        prop_assert!(in_span(&found, x, &den));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn transform_identity(seed in any::<u64>(), order in 1usize..=3, shift in 1usize..=2) {
        let mut r = random::rng(seed);
        let l = random::operator(&mut r, order, 1);
        let t = DiffOperator::d_pow(shift).add(&DiffOperator::function(random::ratfunc(&mut r, 1, 0)));
        match transform_solutions(&l, &t) {
            Ok((lt, cof)) => {
                prop_assert_eq!(lt.mul(&t), cof.mul(&l));
                prop_assert!(lt.order() <= l.order());
            }
            Err(diffop_core::Error::Degenerate(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn default_search_is_sound(seed in any::<u64>()) {
        let d = Decomposition::random(&[1, 1, 1], 1, 0, seed).unwrap();
        let l = build(&d).top().clone();
        let found = intertwiner_search(&l, &AnsatzBounds::new(2, 4)).unwrap();
        prop_assert!(found.iter().any(|x| x.order() == 2));
        for y in &found {
            prop_assert!(check_intertwiner(&l, y));
        }
    }
}
