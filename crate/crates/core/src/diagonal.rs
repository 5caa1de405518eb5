//! Diagonals of trivariate rational functions and operator guessing from
//! series.
//!
//! Two diagonal routes: a sliced expansion of N/D as a power series, and a
//! multinomial sum for R = 1/(1 − P) with P supported on the monomials
//! x, y, z, x·y, y·z², x²·z².

use crate::diffop::{DiffOperator, ThetaExpr};
use crate::error::{Error, Result};
use crate::expr::{self, Algebra};
use crate::qx::linalg::{clear_row, kernel_q};
use crate::qx::{RatFunc, Rational, ZPoly};
use crate::series::UnivariateSeries;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

pub type Exponent = (u32, u32, u32);

/// Integer polynomial in x, y, z.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn constant(c: BigInt) -> Self {
        TriPoly::monomial((0, 0, 0), c)
    }

    pub fn monomial(e: Exponent, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TriPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(*e).or_default();
            *v += c;
            if v.is_zero() {
                terms.remove(e);
            }
        }
        TriPoly { terms }
    }

    pub fn neg(&self) -> Self {
        TriPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = TriPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                out = out.add(&TriPoly::monomial((a.0 + b.0, a.1 + b.1, a.2 + b.2), c * d));
            }
        }
        out
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b, c), k) in &self.terms {
            let mut mono = Vec::new();
            for (v, e) in [("x", a), ("y", b), ("z", c)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{}^{}", v, e)),
                }
            }
            let neg = k.is_negative();
            let abs = k.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", abs, mono.join("*"))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{}", body)?,
                (true, false) => write!(f, "{}", body)?,
                (false, true) => write!(f, " - {}", body)?,
                (false, false) => write!(f, " + {}", body)?,
            }
            first = false;
        }
        Ok(())
    }
}

/// N(x,y,z)/D(x,y,z) with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivariateRational {
    pub numerator: TriPoly,
    pub denominator: TriPoly,
}

impl Algebra for TrivariateRational {
    fn from_int(n: &BigInt) -> Result<Self> {
        Ok(TrivariateRational { numerator: TriPoly::constant(n.clone()), denominator: TriPoly::constant(BigInt::one()) })
    }

    fn var(name: &str) -> Result<Self> {
        let e = match name {
            "x" => (1, 0, 0),
            "y" => (0, 1, 0),
            "z" => (0, 0, 1),
            _ => return Err(Error::Parse(format!("unknown symbol '{}'", name))),
        };
        Ok(TrivariateRational { numerator: TriPoly::monomial(e, BigInt::one()), denominator: TriPoly::constant(BigInt::one()) })
    }

    fn add(&self, o: &Self) -> Result<Self> {
        if self.denominator == o.denominator {
            return Ok(TrivariateRational { numerator: self.numerator.add(&o.numerator), denominator: self.denominator.clone() });
        }
        Ok(TrivariateRational {
            numerator: self.numerator.mul(&o.denominator).add(&o.numerator.mul(&self.denominator)),
            denominator: self.denominator.mul(&o.denominator),
        })
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg()?)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(TrivariateRational {
            numerator: self.numerator.mul(&o.numerator),
            denominator: self.denominator.mul(&o.denominator),
        })
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if o.numerator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TrivariateRational {
            numerator: self.numerator.mul(&o.denominator),
            denominator: self.denominator.mul(&o.numerator),
        })
    }

    fn neg(&self) -> Result<Self> {
        Ok(TrivariateRational { numerator: self.numerator.neg(), denominator: self.denominator.clone() })
    }
}

impl TrivariateRational {
    pub fn new(numerator: TriPoly, denominator: TriPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TrivariateRational { numerator, denominator }.normalized())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let r = expr::parse(s)?.eval::<TrivariateRational>()?;
        Ok(r.normalized())
    }

    /// Common integer content removed, positive constant term of D when nonzero.
    fn normalized(self) -> Self {
        let g = self.numerator.content().gcd(&self.denominator.content());
        let mut g = if g.is_zero() { BigInt::one() } else { g };
        if self.denominator.coeff((0, 0, 0)).is_negative() {
            g = -g;
        }
        let div = |p: &TriPoly| TriPoly { terms: p.terms.iter().map(|(e, c)| (*e, c / &g)).collect() };
        TrivariateRational { numerator: div(&self.numerator), denominator: div(&self.denominator) }
    }

    pub fn is_expandable(&self) -> bool {
        !self.denominator.coeff((0, 0, 0)).is_zero()
    }
}

impl fmt::Display for TrivariateRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.numerator, self.denominator)
    }
}

/// c_M = [x^M y^M z^M] N/D for M < n.
///
/// With d0 the constant term of D, g_abc = d0^(a+b+c+1)·f_abc satisfies an
/// integer recurrence, swept one x-slice at a time.
pub fn diag_series_expand(r: &TrivariateRational, n: usize) -> Result<UnivariateSeries> {
    if !r.is_expandable() {
        return Err(Error::NotExpandable);
    }
    if n == 0 {
        return Ok(UnivariateSeries::new(Vec::new()));
    }
    let d0 = r.denominator.coeff((0, 0, 0));
    let mut pw = vec![BigInt::one()];
    for _ in 0..3 * n + 1 {
        let next = pw.last().unwrap() * &d0;
        pw.push(next);
    }
    let steps: Vec<(Exponent, BigInt)> = r
        .denominator
        .terms()
        .iter()
        .filter(|(e, _)| **e != (0, 0, 0))
        .map(|(e, c)| (*e, c * &pw[(e.0 + e.1 + e.2 - 1) as usize]))
        .collect();
    let dx = steps.iter().map(|(e, _)| e.0 as usize).max().unwrap_or(0);
    let idx = |b: usize, c: usize| b * n + c;
    let mut window: VecDeque<Vec<BigInt>> = VecDeque::new();
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let mut slice = vec![BigInt::zero(); n * n];
        for b in 0..n {
            for c in 0..n {
                let s = a + b + c;
                let mut acc = r.numerator.coeff((a as u32, b as u32, c as u32));
                if !acc.is_zero() {
                    acc *= &pw[s];
                }
                for ((i, j, k), w) in &steps {
                    let (i, j, k) = (*i as usize, *j as usize, *k as usize);
                    if i > a || j > b || k > c {
                        continue;
                    }
                    let prev = if i == 0 { &slice[idx(b - j, c - k)] } else { &window[window.len() - i][idx(b - j, c - k)] };
                    if !prev.is_zero() {
                        acc -= w * prev;
                    }
                }
                slice[idx(b, c)] = acc;
            }
        }
        out.push(Rational::new(slice[idx(a, a)].clone(), pw[3 * a + 1].clone()));
        window.push_back(slice);
        if window.len() > dx {
            window.pop_front();
        }
    }
    Ok(UnivariateSeries::new(out))
}

const TEMPLATE: [Exponent; 6] = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 2), (2, 0, 2)];

/// (scale, c1..c6) with R = scale/(1 − Σ c_i·m_i) over the six template monomials.
pub fn match_template(r: &TrivariateRational) -> Result<(Rational, [Rational; 6])> {
    let num = &r.numerator;
    if num.terms().len() != 1 || num.terms().keys().next() != Some(&(0, 0, 0)) {
        return Err(Error::TemplateMismatch("numerator must be a nonzero constant".into()));
    }
    let d0 = r.denominator.coeff((0, 0, 0));
    if d0.is_zero() {
        return Err(Error::TemplateMismatch("denominator needs a nonzero constant term".into()));
    }
    for e in r.denominator.terms().keys() {
        if *e != (0, 0, 0) && !TEMPLATE.contains(e) {
            return Err(Error::TemplateMismatch(format!("monomial x^{} y^{} z^{} outside the template", e.0, e.1, e.2)));
        }
    }
    let d0q = Rational::from_integer(d0.clone());
    let c = TEMPLATE.map(|e| -Rational::from_integer(r.denominator.coeff(e)) / &d0q);
    Ok((Rational::from_integer(num.coeff((0, 0, 0))) / d0q, c))
}

/// Diagonal of R = scale/(1 − P) by summing multinomial coefficients.
///
/// For the diagonal term x^M y^M z^M with N = m1 + … + m6 the exponent
/// constraints leave N, m1, m5 free:
/// m2 = 3m1 + 4M − 5m5 − 2N, m3 = 2N − 2m1 + 2m5 − 3M,
/// m4 = 2N − 3m1 − 3M + 4m5, m6 = 2M − N + m1 − 2m5.
pub fn diag_series_multinomial(r: &TrivariateRational, n: usize) -> Result<UnivariateSeries> {
    let (scale, c) = match_template(r)?;
    let top = 3 * n;
    let mut fact = vec![BigInt::one()];
    for i in 1..=top {
        let next = fact.last().unwrap() * BigInt::from(i);
        fact.push(next);
    }
    let powers: Vec<Vec<Rational>> = c
        .iter()
        .map(|ci| {
            let mut v = vec![Rational::one()];
            for _ in 0..top {
                let next = v.last().unwrap() * ci;
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for mm in 0..n as i64 {
        let mut sum = Rational::zero();
        for nn in 0..=3 * mm {
            for m1 in 0..=mm {
                for m5 in 0..=mm {
                    let m2 = 3 * m1 + 4 * mm - 5 * m5 - 2 * nn;
                    let m3 = 2 * nn - 2 * m1 + 2 * m5 - 3 * mm;
                    let m4 = 2 * nn - 3 * m1 - 3 * mm + 4 * m5;
                    let m6 = 2 * mm - nn + m1 - 2 * m5;
                    let m = [m1, m2, m3, m4, m5, m6];
                    if m.iter().any(|&v| v < 0) {
                        continue;
                    }
                    let mut den = BigInt::one();
                    let mut term = Rational::one();
                    for (i, &mi) in m.iter().enumerate() {
                        den *= &fact[mi as usize];
                        if mi > 0 {
                            term *= &powers[i][mi as usize];
                        }
                    }
                    if term.is_zero() {
                        continue;
                    }
                    sum += term * Rational::new(fact[nn as usize].clone(), den);
                }
            }
        }
        out.push(sum * &scale);
    }
    Ok(UnivariateSeries::new(out))
}

pub const DEFAULT_MARGIN: usize = 20;

/// Terms needed for the θ-form ansatz plus `margin` held-out checks.
pub fn required_terms(order: usize, degree: usize, margin: usize) -> usize {
    (order + 1) * (degree + 1) + margin
}

pub fn guess_operator(s: &UnivariateSeries, order: usize, degree: usize) -> Result<Option<DiffOperator>> {
    guess_operator_with_margin(s, order, degree, DEFAULT_MARGIN)
}

/// Operator Σ_{i ≤ order} q_i(x)·θ^i with deg q_i ≤ degree annihilating s,
/// solved on all but the last `margin` coefficients and checked on the rest.
///
/// The result is returned in Dx-form with polynomial coefficients, their
/// common polynomial factor and integer content removed, and a positive
/// leading coefficient.
pub fn guess_operator_with_margin(
    s: &UnivariateSeries,
    order: usize,
    degree: usize,
    margin: usize,
) -> Result<Option<DiffOperator>> {
    let n = s.len();
    let need = required_terms(order, degree, margin);
    if n < need {
        return Err(Error::InsufficientTerms { required: need, available: n });
    }
    let solve = n - margin;
    let unknowns: Vec<(usize, usize)> = (0..=order).flat_map(|i| (0..=degree).map(move |k| (i, k))).collect();
    let coeffs = s.coeffs();
    // [x^t] x^k θ^i s = (t − k)^i s_(t−k)
    let row = |t: usize| -> Vec<Rational> {
        unknowns
            .iter()
            .map(|&(i, k)| {
                if t < k || coeffs[t - k].is_zero() {
                    return Rational::zero();
                }
                &coeffs[t - k] * Rational::from_integer(BigInt::from(t - k).pow(i as u32))
            })
            .collect()
    };
    let rows: Vec<Vec<Rational>> = (0..solve).map(row).collect();
    let kernel = kernel_q(&rows, unknowns.len());
    for v in kernel {
        let w = clear_row(&v);
        let mut polys = vec![vec![BigInt::zero(); degree + 1]; order + 1];
        for (&(i, k), c) in unknowns.iter().zip(&w) {
            polys[i][k] = c.clone();
        }
        let theta = ThetaExpr::new(polys.into_iter().map(|c| RatFunc::from_zpoly(&ZPoly::new(c))).collect());
        let op = normalize(&DiffOperator::from_theta(&theta));
        if op.is_zero() {
            continue;
        }
        let check = op.apply_to_series(s, n - op.order())?;
        if check.coeffs().iter().all(|c| c.is_zero()) {
            return Ok(Some(op));
        }
    }
    Ok(None)
}

/// Polynomial coefficients without common factor, positive leading coefficient.
fn normalize(l: &DiffOperator) -> DiffOperator {
    if l.is_zero() {
        return l.clone();
    }
    let c = l.cleared_coeffs();
    let g = c.iter().filter(|p| !p.is_zero()).fold(ZPoly::zero(), |g, p| if g.is_zero() { p.primitive_part().1 } else { g.gcd(p) });
    let mut c: Vec<ZPoly> = c.iter().map(|p| p.div_exact(&g).unwrap()).collect();
    if c.last().unwrap().lc().is_negative() {
        c = c.iter().map(|p| p.neg()).collect();
    }
    DiffOperator::from_zpolys(&c)
}

/// Integer coefficient-wise cube of the (1 − 9x)^(−1/3) series, the
/// hypergeometric 3F2([1/3,1/3,1/3],[1,1]; 3^6 x) expansion.
pub fn hadamard_cube_series(n: usize) -> UnivariateSeries {
    // (1−9x)^(−1/3) = Σ (1/3)_k/k! 9^k x^k
    let mut c = Vec::with_capacity(n);
    let mut a = Rational::one();
    for k in 0..n {
        c.push(a.clone());
        a = a * Rational::new(BigInt::from(3 * k + 1) * 9, BigInt::from(3 * (k + 1)));
    }
    let s = UnivariateSeries::new(c);
    s.hadamard(&s).hadamard(&s)
}
