//! Benchmark inputs shared by the criterion targets.

use diffop_core::random;
use diffop_core::tower::{build, Decomposition};
use diffop_core::DiffOperator;

/// Random operator with polynomial coefficients of the given degree.
pub fn operator(order: usize, degree: usize, seed: u64) -> DiffOperator {
    random::operator(&mut random::rng(seed), order, degree)
}

/// Top operator of a random tower and its first intertwiner.
pub fn tower(orders: &[usize], seed: u64) -> (DiffOperator, DiffOperator) {
    let t = build(&Decomposition::random(orders, 1, 0, seed).expect("valid orders"));
    let x = t.first_intertwiner().expect("at least two units").clone();
    (t.top().clone(), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use diffop_core::tower::check_intertwiner;

    #[test]
    fn inputs() {
        assert_eq!(operator(3, 2, 0).order(), 3);
        let (l, x) = tower(&[1, 1, 1], 0);
        assert_eq!((l.order(), x.order()), (3, 2));
        assert!(check_intertwiner(&l, &x));
    }
}
