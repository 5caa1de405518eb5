//! Intertwiners X with adjoint(X)·L = adjoint(L)·X by bounded linear
//! ansatz, and equivalent operators through solution transforms.

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::powers::{form_annihilator, sym_power};
use crate::qx::linalg::kernel_q;
use crate::qx::{Poly, RatFunc, Rational, ZPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub use crate::tower::check_intertwiner;

/// Search space X = Σ_{i ≤ order} (p_i/den)·Dx^i with deg p_i ≤ numerator_degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzBounds {
    pub order: usize,
    pub numerator_degree: usize,
    /// None escalates through h^k, k = 0..=3, with h the numerator times
    /// the denominator of lc(L), stopping once an intertwiner of the full
    /// target order appears.
    pub denominator: Option<Poly>,
}

impl AnsatzBounds {
    pub fn new(order: usize, numerator_degree: usize) -> Self {
        AnsatzBounds { order, numerator_degree, denominator: None }
    }
}

/// Basis of intertwiners within the bounds; empty means none found there.
pub fn intertwiner_search(l: &DiffOperator, bounds: &AnsatzBounds) -> Result<Vec<DiffOperator>> {
    if l.is_zero() {
        return Err(Error::InvalidInput("operator must be nonzero".into()));
    }
    if let Some(d) = &bounds.denominator {
        let den = RatFunc::from_poly(d);
        return search_with_denominator(l, bounds.order, bounds.numerator_degree, &den);
    }
    let lc = l.lc();
    let head = RatFunc::from_zpoly(&lc.num_z().mul(lc.den_z()));
    let mut d = RatFunc::one();
    let mut best = Vec::new();
    for _ in 0..=3 {
        let found = search_with_denominator(l, bounds.order, bounds.numerator_degree, &d)?;
        if found.iter().any(|x| x.order() == bounds.order) {
            return Ok(found);
        }
        if found.len() > best.len() {
            best = found;
        }
        d = d.mul(&head);
    }
    Ok(best)
}

/// Intertwiners of the exact shape Σ_{i ≤ order} (p_i/den)·Dx^i.
pub fn search_with_denominator(
    l: &DiffOperator,
    order: usize,
    numerator_degree: usize,
    den: &RatFunc,
) -> Result<Vec<DiffOperator>> {
    if den.is_zero() {
        return Err(Error::InvalidInput("ansatz denominator must be nonzero".into()));
    }
    let inv = den.inv()?;
    let unknowns: Vec<(usize, usize)> =
        (0..=order).flat_map(|i| (0..=numerator_degree).map(move |k| (i, k))).collect();
    // The image of (x^k/den)·Dx^i is
    //   ±(−1)^i Σ_l C(i,l)·(k)_l·x^(k−l)·Dx^(i−l)·A  −  Σ_l (k)_l·x^(k−l)·B_l·Dx^i
    // with A = (1/den)·L, B = adjoint(L)·(1/den) and B_l = (1/l!)·∂^l B / ∂Dx^l.
    let mut a_pows = vec![l.lmul_fn(&inv)];
    for m in 1..=order {
        let next = a_pows[m - 1].d_mul();
        a_pows.push(next);
    }
    let b = l.adjoint().rmul_fn(&inv);
    let b_parts: Vec<DiffOperator> = (0..=b.order())
        .map(|m| {
            let c: Vec<RatFunc> = (m..=b.order())
                .map(|j| b.coeff(j).scale_by(&Rational::from_integer(binomial(j, m))))
                .collect();
            DiffOperator::new(c)
        })
        .collect();
    let mut common = ZPoly::one();
    for f in a_pows.iter().chain(&b_parts).flat_map(|e| e.coeffs()) {
        if !f.is_zero() {
            let g = common.gcd(f.den_z());
            common = common.mul(&f.den_z().div_exact(&g).unwrap());
        }
    }
    let common = RatFunc::from_zpoly(&common);
    let numerators = |e: &DiffOperator| -> Vec<Poly> { e.coeffs().iter().map(|f| f.mul(&common).numer()).collect() };
    let a_num: Vec<Vec<Poly>> = a_pows.iter().map(numerators).collect();
    let b_num: Vec<Vec<Poly>> = b_parts.iter().map(numerators).collect();
    let outer_sign = order % 2 == 1;
    let ncols = unknowns.len();
    let mut rows: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    let mut add = |col: usize, j: usize, shift: usize, p: &Poly, f: &Rational| {
        for (t, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                rows.entry((j, t + shift)).or_insert_with(|| vec![Rational::zero(); ncols])[col] += c * f;
            }
        }
    };
    for (col, &(i, k)) in unknowns.iter().enumerate() {
        let left_sign = if outer_sign ^ (i % 2 == 1) { -1 } else { 1 };
        for lz in 0..=i.min(k) {
            let f = Rational::from_integer(binomial(i, lz) * falling(k, lz) * left_sign);
            for (j, p) in a_num[i - lz].iter().enumerate() {
                add(col, j, k - lz, p, &f);
            }
        }
        for (lz, parts) in b_num.iter().enumerate().take(k + 1) {
            let f = Rational::from_integer(-falling(k, lz));
            for (j, p) in parts.iter().enumerate() {
                add(col, j + i, k - lz, p, &f);
            }
        }
    }
    let rows: Vec<Vec<Rational>> = rows.into_values().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
    let kernel = kernel_q(&rows, unknowns.len());
    let mut out = Vec::new();
    for v in kernel {
        let mut coeffs = vec![Poly::zero(); order + 1];
        for (&(i, k), c) in unknowns.iter().zip(&v) {
            if !c.is_zero() {
                let mut m = vec![Rational::zero(); k + 1];
                m[k] = c.clone();
                coeffs[i] = coeffs[i].add(&Poly::new(m));
            }
        }
        let x = DiffOperator::new(coeffs.iter().map(|p| RatFunc::from_poly(p).mul(&inv)).collect());
        if !x.is_zero() && check_intertwiner(l, &x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

/// k·(k−1)·…·(k−l+1).
fn falling(k: usize, l: usize) -> BigInt {
    (0..l).map(|j| BigInt::from(k - j)).product()
}

/// (Ltilde, cofactor) with Ltilde·T = cofactor·L and Ltilde the minimal
/// annihilator of T(y) over the solutions y of L.
pub fn transform_solutions(l: &DiffOperator, t: &DiffOperator) -> Result<(DiffOperator, DiffOperator)> {
    if l.is_zero() || l.order() == 0 {
        return Err(Error::InvalidInput("operator order must be positive".into()));
    }
    if t.is_zero() {
        return Err(Error::InvalidInput("transform must be nonzero".into()));
    }
    let (_, rem) = t.right_divide(l)?;
    if rem.is_zero() {
        return Err(Error::Degenerate("transform vanishes modulo the operator".into()));
    }
    let n = l.order();
    let form: Vec<RatFunc> = (0..n).map(|i| rem.coeff(i)).collect();
    let ltilde = form_annihilator(l, &form)?;
    let (cofactor, r) = ltilde.mul(t).right_divide(l)?;
    if !r.is_zero() {
        return Err(Error::RelationFailed("Ltilde·T is not a left multiple of L".into()));
    }
    Ok((ltilde, cofactor))
}

/// Operator equivalent to the m-th symmetric power of an order-2 operator,
/// obtained by transforming its solutions with Dx^shift.
pub fn sym_power_equivalent(l2: &DiffOperator, m: usize, shift: usize) -> Result<DiffOperator> {
    if l2.order() != 2 {
        return Err(Error::InvalidInput("expected an order-2 operator".into()));
    }
    if m < 2 {
        return Err(Error::InvalidInput("power must be at least 2".into()));
    }
    let s = sym_power(l2, m)?.operator;
    Ok(transform_solutions(&s, &DiffOperator::d_pow(shift))?.0)
}
