//! Self-adjoint operators: explicit low-order shapes, symmetrization,
//! random generation and right normalization.

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::qx::{qq, RatFunc};
use crate::random;
use crate::ratsol::{rational_solutions, RatSolBounds};

fn nonzero(a: &RatFunc, name: &str) -> Result<()> {
    if a.is_zero() {
        return Err(Error::InvalidInput(format!("{} must be nonzero", name)));
    }
    Ok(())
}

/// a1·D + a1′/2
pub fn make_order1(a1: &RatFunc) -> Result<DiffOperator> {
    nonzero(a1, "a1")?;
    Ok(DiffOperator::new(vec![a1.derivative().scale_by(&qq(1, 2)), a1.clone()]))
}

/// a2·D² + a2′·D + a0
pub fn make_order2(a2: &RatFunc, a0: &RatFunc) -> Result<DiffOperator> {
    nonzero(a2, "a2")?;
    Ok(DiffOperator::new(vec![a0.clone(), a2.derivative(), a2.clone()]))
}

/// a3·D³ + (3/2)a3′·D² + a1·D + a1′/2 − a3‴/4
pub fn make_order3(a3: &RatFunc, a1: &RatFunc) -> Result<DiffOperator> {
    nonzero(a3, "a3")?;
    let c0 = a1.derivative().scale_by(&qq(1, 2)).sub(&a3.derivative_n(3).scale_by(&qq(1, 4)));
    Ok(DiffOperator::new(vec![c0, a1.clone(), a3.derivative().scale_by(&qq(3, 2)), a3.clone()]))
}

/// (P + adjoint(P))/2
pub fn symmetrize(p: &DiffOperator) -> DiffOperator {
    p.add(&p.adjoint()).scale(&qq(1, 2))
}

/// Symmetrized random operator with polynomial coefficients; the leading
/// coefficient has exactly `coeff_degree`.
pub fn random_self_adjoint(order: usize, coeff_degree: usize, seed: u64) -> Result<DiffOperator> {
    if order == 0 {
        return Err(Error::InvalidInput("order must be at least 1".into()));
    }
    let mut r = random::rng(seed);
    Ok(symmetrize(&random::operator(&mut r, order, coeff_degree)))
}

/// Some f with L·f self-adjoint, or None.
///
/// The top two coefficients force f = a_n·h with h′/h = −(2/n)·a_{n−1}/a_n;
/// h is found among rational solutions of D − h′/h and the result checked.
pub fn right_normalize_self_adjoint(l: &DiffOperator) -> Result<Option<RatFunc>> {
    let n = l.order();
    if l.is_zero() || n == 0 {
        return Err(Error::InvalidInput("order must be at least 1".into()));
    }
    let an = l.lc();
    let g = l.coeff(n - 1).div(&an)?.scale_by(&qq(-2, n as i64));
    let first = DiffOperator::new(vec![g.neg(), RatFunc::one()]);
    let sols = rational_solutions(&first, &RatSolBounds::default())?;
    let Some(h) = sols.basis.first() else {
        return Ok(None);
    };
    let f = an.mul(h);
    let f = f.scale_by(&f.scale().recip());
    if l.rmul_fn(&f).is_self_adjoint() {
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> DiffOperator {
        DiffOperator::parse(s).unwrap()
    }

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn low_order_shapes() {
        assert_eq!(make_order1(&rf("1")).unwrap(), op("Dx"));
        assert_eq!(make_order1(&rf("x")).unwrap(), op("x*Dx + 1/2"));
        assert!(make_order1(&rf("1/(1-x)")).unwrap().is_self_adjoint());
        assert!(make_order1(&RatFunc::zero()).is_err());
        assert_eq!(make_order2(&rf("1"), &rf("x")).unwrap(), op("Dx^2 + x"));
        assert!(make_order2(&rf("x^2+1"), &RatFunc::zero()).unwrap().is_self_adjoint());
        assert!(make_order2(&rf("x"), &rf("1/x")).unwrap().is_self_adjoint());
        assert_eq!(make_order3(&rf("1"), &RatFunc::zero()).unwrap(), op("Dx^3"));
        assert_eq!(make_order3(&rf("1"), &rf("x")).unwrap(), op("Dx^3 + x*Dx + 1/2"));
        assert!(make_order3(&rf("x"), &rf("1")).unwrap().is_self_adjoint());
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(symmetrize(&op("x*Dx")), op("x*Dx + 1/2"));
        let s = symmetrize(&op("Dx^4 + x*Dx"));
        assert!(s.is_self_adjoint());
        assert_eq!(s.order(), 4);
        let u = op("x*Dx + 1/2");
        assert_eq!(symmetrize(&u), u);
    }

    #[test]
    fn random_generation() {
        let a = random_self_adjoint(1, 2, 7).unwrap();
        assert_eq!(a, random_self_adjoint(1, 2, 7).unwrap());
        assert!(a.is_self_adjoint());
        assert_eq!(a.lc().numer().degree(), 2);
        for (o, d, s) in [(2, 1, 1), (4, 2, 3)] {
            let u = random_self_adjoint(o, d, s).unwrap();
            assert!(u.is_self_adjoint());
            assert_eq!(u.order(), o);
            assert_eq!(u.lc().numer().degree(), d as isize);
        }
    }

    #[test]
    fn normalize_examples() {
        let l = op("x*Dx + 1/2").mul(&op("x^2"));
        let f = right_normalize_self_adjoint(&l).unwrap().unwrap();
        assert!(l.rmul_fn(&f).is_self_adjoint());
        assert!(f.mul(&rf("x^2")).is_constant());
        let f = right_normalize_self_adjoint(&op("Dx^2")).unwrap().unwrap();
        assert!(f.is_constant());
    }

    #[test]
    fn normalize_rejects() {
        // top two coefficients admit f = 1, but the operator is not self-adjoint
        let l = op("Dx^3 + x");
        assert!(!l.is_self_adjoint());
        assert_eq!(right_normalize_self_adjoint(&l).unwrap(), None);
        // h′/h = −x has no rational solution
        let l = op("Dx^2 + x*Dx");
        assert_eq!(right_normalize_self_adjoint(&l).unwrap(), None);
    }

    #[test]
    fn normalize_roundtrip() {
        for seed in 0..6u64 {
            let u = random_self_adjoint(1 + (seed as usize % 3), 2, seed).unwrap();
            let mut r = random::rng(100 + seed);
            let f = random::ratfunc(&mut r, 2, 2);
            let l = u.rmul_fn(&f);
            let g = right_normalize_self_adjoint(&l).unwrap().unwrap();
            let v = l.rmul_fn(&g);
            assert!(v.is_self_adjoint());
            assert!(v.same_up_to_constant(&u));
        }
    }

    /// The cascade through the a_{q−6} term is exactly self-adjoint for
    /// q ≤ 6; at q = 7 only the omitted constant term differs.
    #[test]
    fn cascade_matches_symmetrize() {
        let mut r = random::rng(42);
        for qo in 1..=7usize {
            let a = |k: usize, r: &mut random::DetRng| -> RatFunc {
                if k == 0 {
                    RatFunc::from_zpoly(&random::zpoly(r, 3))
                } else {
                    RatFunc::from_zpoly(&random::zpoly_upto(r, 3))
                }
            };
            let aq = a(0, &mut r);
            let aq2 = a(1, &mut r);
            let aq4 = a(2, &mut r);
            let aq6 = a(3, &mut r);
            let qf = qo as i64;
            let mut c = vec![RatFunc::zero(); qo + 1];
            let mut set = |k: i64, v: RatFunc| {
                if k >= 0 {
                    c[k as usize] = v;
                }
            };
            set(qf, aq.clone());
            set(qf - 1, aq.derivative().scale_by(&qq(qf, 2)));
            set(qf - 2, aq2.clone());
            set(
                qf - 3,
                aq2.derivative()
                    .sub(&aq.derivative_n(3).scale_by(&qq(qf * (qf - 1), 12)))
                    .scale_by(&qq(qf - 2, 2)),
            );
            set(qf - 4, aq4.clone());
            set(
                qf - 5,
                aq4.derivative()
                    .sub(&aq2.derivative_n(3).scale_by(&qq((qf - 2) * (qf - 3), 12)))
                    .add(&aq.derivative_n(5).scale_by(&qq(qf * (qf - 1) * (qf - 2) * (qf - 3), 120)))
                    .scale_by(&qq(qf - 4, 2)),
            );
            set(qf - 6, aq6.clone());
            let t = DiffOperator::new(c);
            let diff = t.sub(&symmetrize(&t));
            if qo <= 6 {
                assert!(diff.is_zero(), "q = {}", qo);
            } else {
                assert!(!diff.is_zero() && diff.order() == qo - 7);
            }
        }
    }
}
