//! Diagonal methods against each other, integrality, and guessing on
//! series with known annihilators.

use diffop_core::diagonal::*;
use diffop_core::fixtures;
use diffop_core::random;
use diffop_core::{RatFunc, UnivariateSeries};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

const MONOMIALS: [&str; 6] = ["x", "y", "z", "x*y", "y*z^2", "x^2*z^2"];

fn six_monomial(seed: u64) -> TrivariateRational {
    let mut r = random::rng(seed);
    let c0: i64 = r.gen_range(1..=5);
    let mut s = format!("{}/({}", r.gen_range(1..=5), c0);
    for m in MONOMIALS {
        s += &format!(" + ({})*{}", random::small_int(&mut r), m);
    }
    s.push(')');
    TrivariateRational::parse(&s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn methods_agree(seed in any::<u64>()) {
        let r = six_monomial(seed);
        prop_assert_eq!(diag_series_expand(&r, 10).unwrap(), diag_series_multinomial(&r, 10).unwrap());
    }

    #[test]
    fn guess_recovers_rational_annihilator(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let f = loop {
            let f = random::ratfunc(&mut r, 2, 2);
            if !f.den_z().coeff(0).is_zero() {
                break f;
            }
        };
        let n = required_terms(1, 4, 20) + 5;
        let s = UnivariateSeries::from_ratfunc(&f, n).unwrap();
        let l = guess_operator(&s, 1, 4).unwrap().expect("first-order annihilator");
        let check = l.apply_to_series(&s, n - l.order()).unwrap();
        prop_assert!(check.coeffs().iter().all(|c| c.is_zero()));
        prop_assert!(l.apply(&f).is_zero());
        let c = l.cleared_coeffs();
        prop_assert!(c.last().unwrap().lc().is_positive());
        let content = c.iter().flat_map(|p| p.coeffs().iter()).fold(BigInt::zero(), |g, a| num_integer::Integer::gcd(&g, a));
        prop_assert!(content.is_one());
    }
}

#[test]
fn diagonal_is_integral() {
    let f = fixtures::load("generic").unwrap();
    let s = diag_series_expand(f.trivariate().unwrap(), 30).unwrap();
    assert!(s.is_integral());
    assert_eq!(s.coeffs()[1], RatFunc::from_int(616).as_constant().unwrap());
}

#[test]
fn insufficient_terms() {
    let s = UnivariateSeries::new(vec![num_rational::BigRational::one(); 10]);
    assert!(matches!(guess_operator(&s, 2, 2), Err(diffop_core::Error::InsufficientTerms { .. })));
}
