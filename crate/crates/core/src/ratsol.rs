//! Rational solutions of L(y) = 0.
//!
//! The denominator comes from negative integer exponents at the singular
//! points. Singular points are grouped into squarefree pieces of the
//! leading coefficient on which every coefficient has constant valuation,
//! so points that are not rational are covered too. The numerator degree
//! comes from the exponents at infinity. A linear ansatz then gives all
//! solutions within those bounds.

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::qx::linalg::{kernel_q, kernel_z};
use crate::qx::modular::{inv_mod, mul_mod, nth_prime, reconstruct_vector, reduce, reduce_rational, Crt};
use crate::qx::zpoly::{gcd_mod, rem_mod, ZPoly};
use crate::qx::{Poly, RatFunc, Rational};
use crate::series::UnivariateSeries;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest exponent magnitude searched exhaustively before a search is
/// declared incomplete.
const SEARCH_CAP: i64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

/// Local exponent data. At a finite point the roots are exponents `s` of
/// `(x − a)^s`; at infinity they are growth exponents `e` of `x^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicialData {
    pub point: Point,
    /// Indicial polynomial in s, monomial basis.
    pub polynomial: Poly,
    pub integer_roots: Vec<BigInt>,
    /// False when the root search had to be capped.
    pub complete: bool,
}

/// Optional caller-supplied bounds.
#[derive(Clone, Debug, Default)]
pub struct RatSolBounds {
    pub numerator_degree: Option<usize>,
    pub denominator: Option<Poly>,
}

#[derive(Clone, Debug)]
pub struct RatSolResult {
    pub basis: Vec<RatFunc>,
    pub denominator: Poly,
    pub numerator_degree: Option<usize>,
    /// True when the bounds came from the caller or a capped search, so an
    /// empty basis is not a proof of nonexistence.
    pub bounded_search: bool,
}

/// Signed Stirling numbers of the first kind: s^(falling i) = Σ_j s1[i][j] s^j.
fn stirling1(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = &s[i - 1][k - 1] - BigInt::from(i - 1) * &s[i - 1][k];
        }
    }
    s
}

/// Σ c_i s^(falling i) in the monomial basis.
fn falling_to_monomial(c: &[(usize, Rational)]) -> Poly {
    let n = c.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let s1 = stirling1(n);
    let mut out = vec![Rational::zero(); n + 1];
    for (i, ci) in c {
        for j in 0..=*i {
            if !s1[*i][j].is_zero() {
                out[j] += ci * Rational::from_integer(s1[*i][j].clone());
            }
        }
    }
    Poly::new(out)
}

/// Integer roots of a rational polynomial, with a completeness flag.
pub fn integer_roots(p: &Poly) -> (Vec<BigInt>, bool) {
    if p.is_zero() {
        return (Vec::new(), false);
    }
    let z = p.primitive();
    let k0 = z.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if k0 > 0 {
        roots.push(BigInt::zero());
    }
    let z = ZPoly::new(z.coeffs()[k0..].to_vec());
    if z.degree() < 1 {
        return (roots, true);
    }
    let c0 = z.coeff(0).abs();
    let lc = z.lc().abs();
    let cauchy: BigInt = z.coeffs().iter().map(|c| (c.abs() / &lc) + 1u32).max().unwrap() + 1u32;
    let bound = cauchy.min(fujiwara_bound(&z));
    let mut complete = true;
    let candidates: Vec<BigInt> = if bound <= BigInt::from(SEARCH_CAP) {
        let b = bound.to_i64().unwrap();
        (1..=b).map(BigInt::from).filter(|r| c0.is_multiple_of(r)).collect()
    } else if c0 <= BigInt::from(1_000_000_000_000i64) {
        let c = c0.to_i64().unwrap();
        let mut d = Vec::new();
        let mut i = 1i64;
        while i * i <= c {
            if c % i == 0 {
                d.push(BigInt::from(i));
                if i != c / i {
                    d.push(BigInt::from(c / i));
                }
            }
            i += 1;
        }
        d
    } else {
        complete = false;
        (1..=SEARCH_CAP).map(BigInt::from).filter(|r| c0.is_multiple_of(r)).collect()
    };
    let p0 = nth_prime(0);
    for r in candidates {
        for cand in [r.clone(), -r] {
            if z.eval_mod(reduce(&cand, p0), p0) == 0 && z.eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    (roots, complete)
}

/// 2·max_k |a_(n−k)/a_n|^(1/k), rounded up through bit lengths.
fn fujiwara_bound(z: &ZPoly) -> BigInt {
    let n = z.degree() as usize;
    let lc_bits = z.lc().bits() as i64 - 1;
    let mut e = i64::MIN;
    for k in 1..=n {
        let a = z.coeff(n - k);
        if a.is_zero() {
            continue;
        }
        let num = a.bits() as i64 - lc_bits;
        e = e.max((num + k as i64 - 1).div_euclid(k as i64));
    }
    if e == i64::MIN {
        return BigInt::one();
    }
    BigInt::one() << (e + 1).max(0) as usize
}

/// Cleared polynomial coefficients a_0..a_n of L.
fn poly_coeffs(l: &DiffOperator) -> Vec<ZPoly> {
    l.cleared_coeffs()
}

pub fn indicial_at(l: &DiffOperator, point: &Point) -> Result<IndicialData> {
    if l.is_zero() {
        return Err(Error::InvalidInput("zero operator".into()));
    }
    let a = poly_coeffs(l);
    let terms: Vec<(usize, Rational)> = match point {
        Point::Infinity => {
            let m = a.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| c.degree() - i as isize).max().unwrap();
            a.iter()
                .enumerate()
                .filter(|(i, c)| !c.is_zero() && c.degree() - *i as isize == m)
                .map(|(i, c)| (i, Rational::from_integer(c.lc())))
                .collect()
        }
        Point::Finite(x0) => {
            let shifted: Vec<Poly> = a.iter().map(|c| taylor_shift(c, x0)).collect();
            let val = |p: &Poly| p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
            let m = shifted.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| val(c) as isize - i as isize).min().unwrap();
            shifted
                .iter()
                .enumerate()
                .filter(|(i, c)| !c.is_zero() && val(c) as isize - *i as isize == m)
                .map(|(i, c)| (i, c.coeff(val(c))))
                .collect()
        }
    };
    let polynomial = falling_to_monomial(&terms);
    let (integer_roots, complete) = integer_roots(&polynomial);
    Ok(IndicialData { point: point.clone(), polynomial, integer_roots, complete })
}

/// p(x0 + t) as a polynomial in t.
fn taylor_shift(p: &ZPoly, x0: &Rational) -> Poly {
    let mut out = Poly::zero();
    let t = Poly::new(vec![x0.clone(), Rational::one()]);
    for c in p.coeffs().iter().rev() {
        out = out.mul(&t).add(&Poly::constant(Rational::from_integer(c.clone())));
    }
    out
}

/// Squarefree piece of the leading coefficient with the valuation of every
/// coefficient at its roots (`None` for a zero coefficient).
struct Piece {
    h: ZPoly,
    val: Vec<Option<usize>>,
}

fn split_by(h: &ZPoly, c: &ZPoly) -> Vec<(ZPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = h.clone();
    let mut cc = c.clone();
    let mut k = 0;
    loop {
        let g = rest.gcd(&cc).primitive_part().1;
        let piece = rest.div_exact(&g).unwrap();
        if piece.degree() >= 1 {
            out.push((piece, k));
        }
        if g.degree() < 1 {
            break;
        }
        cc = cc.primitive_part().1.div_exact(&g).unwrap();
        rest = g;
        k += 1;
    }
    out
}

fn pieces(a: &[ZPoly]) -> Vec<Piece> {
    let lead = a.last().unwrap();
    let g = lead.gcd(&lead.derivative());
    let rad = lead.primitive_part().1.div_exact(&g.primitive_part().1).unwrap();
    if rad.degree() < 1 {
        return Vec::new();
    }
    let mut out = vec![Piece { h: rad, val: Vec::new() }];
    for c in a {
        let mut next = Vec::new();
        for p in out {
            if c.is_zero() {
                let mut val = p.val.clone();
                val.push(None);
                next.push(Piece { h: p.h, val });
                continue;
            }
            for (h, k) in split_by(&p.h, c) {
                let mut val = p.val.clone();
                val.push(Some(k));
                next.push(Piece { h, val });
            }
        }
        out = next;
    }
    out
}

fn poly_rem(a: &Poly, h: &Poly) -> Poly {
    a.div_rem(h).1
}

/// Inverse of a modulo h over Q, from the linear system Σ u_k·(x^k·a mod h) = 1.
fn poly_inv_mod(a: &Poly, h: &Poly) -> Option<Poly> {
    let d = h.degree().max(0) as usize;
    if d == 0 {
        return None;
    }
    let x = Poly::x();
    let mut cols = vec![poly_rem(a, h)];
    for k in 1..d {
        let next = poly_rem(&cols[k - 1].mul(&x), h);
        cols.push(next);
    }
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|j| {
            let mut r: Vec<Rational> = cols.iter().map(|c| c.coeff(j)).collect();
            r.push(if j == 0 { -Rational::one() } else { Rational::zero() });
            r
        })
        .collect();
    let kernel = kernel_q(&rows, d + 1);
    let v = kernel.iter().find(|v| !v[d].is_zero())?;
    let scale = v[d].recip();
    Some(Poly::new(v[..d].iter().map(|c| c * &scale).collect()))
}

/// Pieces up to this degree use the norm polynomial instead of a root bound.
const NORM_MAX_DEGREE: isize = 8;

/// Determinant of the matrix with entries from a square array, over Q.
fn det_q(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &piv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// N(s) = Π_α Σ_j e_j(α) s^j over the roots α of h, up to a constant:
/// det(Σ_j s^j·M_j) with M_j multiplication by e_j modulo h, interpolated.
fn norm_polynomial(e: &[Poly], h: &Poly) -> Poly {
    let d = h.degree() as usize;
    let x = Poly::x();
    let mats: Vec<Vec<Poly>> = e
        .iter()
        .map(|ej| {
            let mut cols = vec![poly_rem(ej, h)];
            for k in 1..d {
                let next = poly_rem(&cols[k - 1].mul(&x), h);
                cols.push(next);
            }
            cols
        })
        .collect();
    let n = (e.len() - 1) * d;
    let points: Vec<Rational> = (0..=n as i64).map(|t| Rational::from_integer(t.into())).collect();
    let values: Vec<Rational> = points
        .iter()
        .map(|s| {
            let mut a = vec![vec![Rational::zero(); d]; d];
            let mut pw = Rational::one();
            for cols in &mats {
                for (k, col) in cols.iter().enumerate() {
                    for (row, c) in col.coeffs().iter().enumerate() {
                        a[row][k] += c * &pw;
                    }
                }
                pw *= s;
            }
            det_q(a)
        })
        .collect();
    interpolate(&points, &values)
}

/// Newton interpolation over Q.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut c = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&xs[i] - &xs[i - k]);
        }
    }
    let mut p = Poly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::new(vec![-xs[i].clone(), Rational::one()])).add(&Poly::constant(c[i].clone()));
    }
    p
}

/// Rationals k_j with e_j ≡ k_j·e_top (mod h), when they exist: detected
/// modulo primes, reconstructed, and verified exactly over Z.
fn constant_ratios(e: &[ZPoly], h: &ZPoly) -> Option<Vec<Rational>> {
    let top = e.len() - 1;
    let mut crt = Crt::new(top + 1);
    let mut last: Option<Vec<Rational>> = None;
    for i in 0..40 {
        let p = nth_prime(i);
        let hm = h.reduce_mod(p);
        if hm.len() != h.len() {
            continue;
        }
        let rt = rem_mod(&e[top].reduce_mod(p), &hm, p);
        let Some(pivot) = rt.iter().position(|&c| c != 0) else { continue };
        let inv = inv_mod(rt[pivot], p);
        let mut ks = Vec::with_capacity(top + 1);
        for ej in e {
            let rj = rem_mod(&ej.reduce_mod(p), &hm, p);
            let k = mul_mod(rj.get(pivot).copied().unwrap_or(0), inv, p);
            let proportional = (0..rt.len().max(rj.len()))
                .all(|t| rj.get(t).copied().unwrap_or(0) == mul_mod(k, rt.get(t).copied().unwrap_or(0), p));
            if !proportional {
                return None;
            }
            ks.push(k);
        }
        crt.add(p, &ks);
        let Some(k) = reconstruct_vector(&crt.values, &crt.modulus) else { continue };
        if last.as_ref() == Some(&k) {
            let den = k.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
            let exact = e.iter().zip(&k).all(|(ej, kj)| {
                let num = (kj * Rational::from_integer(den.clone())).to_integer();
                divisible(&ej.scale(&den).sub(&e[top].scale(&num)), h)
            });
            return exact.then_some(k);
        }
        last = Some(k);
    }
    None
}

/// h | f over Q, by pseudo-division with content removal.
fn divisible(f: &ZPoly, h: &ZPoly) -> bool {
    if f.is_zero() {
        return true;
    }
    let mut r = f.primitive_part().1;
    let lc = h.lc();
    let n = h.len();
    while !r.is_zero() && r.len() >= n {
        let t = r.lc();
        let sh = r.len() - n;
        r = r.scale(&lc).sub(&h.scale(&t).shift(sh)).primitive_part().1;
    }
    r.is_zero()
}

/// Most negative integer exponent over the roots of a piece, or 0.
/// Second component false when the search was capped.
fn min_negative_exponent(a: &[ZPoly], piece: &Piece) -> (i64, bool) {
    let hz = &piece.h;
    let h = Poly::from_zpoly(&Rational::one(), hz);
    let m = piece.val.iter().enumerate().filter_map(|(i, v)| v.map(|v| v as isize - i as isize)).min().unwrap();
    let lowest: Vec<usize> = piece
        .val
        .iter()
        .enumerate()
        .filter(|(i, v)| v.is_some_and(|v| v as isize - *i as isize == m))
        .map(|(i, _)| i)
        .collect();
    // c·s(s−1)…(s−i+1) has no negative roots
    if lowest.len() == 1 {
        return (0, true);
    }
    // c_i = a_i/h^v·h′^v at the roots of h; e_j(x) = Σ_i c_i(x) s1(i, j)
    let hzp = hz.derivative();
    let top = *lowest.last().unwrap();
    let s1 = stirling1(top);
    let mut ez = vec![ZPoly::zero(); top + 1];
    for &i in &lowest {
        let v = piece.val[i].unwrap();
        let mut c = a[i].clone();
        for _ in 0..v {
            c = c.div_exact(hz).unwrap().mul(&hzp);
        }
        for j in 0..=i {
            if !s1[i][j].is_zero() {
                ez[j] = ez[j].add(&c.scale(&s1[i][j]));
            }
        }
    }
    if let Some(k) = constant_ratios(&ez, hz) {
        let (roots, complete) = integer_roots(&Poly::new(k));
        let best = roots.iter().filter(|r| r.is_negative()).min().and_then(|r| r.to_i64()).unwrap_or(0);
        return (best, complete);
    }
    let e: Vec<Poly> = ez.iter().map(|p| poly_rem(&Poly::from_zpoly(&Rational::one(), p), &h)).collect();
    if h.degree() <= NORM_MAX_DEGREE {
        let (roots, complete) = integer_roots(&norm_polynomial(&e, &h));
        let best = roots.iter().filter(|r| r.is_negative()).min().and_then(|r| r.to_i64()).unwrap_or(0);
        return (best, complete);
    }
    let bound = root_bound(&e, &h);
    let (limit, complete) = match bound {
        Some(b) if b <= SEARCH_CAP as f64 => (b.ceil() as i64, true),
        _ => (SEARCH_CAP, false),
    };
    let p = nth_prime(0);
    let hm = hz.reduce_mod(p);
    let red: Option<Vec<Vec<u64>>> = e
        .iter()
        .map(|ej| ej.coeffs().iter().map(|c| reduce_rational(c, p)).collect::<Option<Vec<u64>>>())
        .collect();
    let mut best = 0i64;
    for s in 1..=limit {
        let sv = -s;
        let hit = match &red {
            Some(red) => {
                let sm = reduce(&BigInt::from(sv), p);
                let mut acc: Vec<u64> = vec![0; h.degree().max(1) as usize];
                let mut pw = 1u64;
                for ej in red {
                    for (k, &c) in ej.iter().enumerate() {
                        acc[k] = (acc[k] + mul_mod(c, pw, p)) % p;
                    }
                    pw = mul_mod(pw, sm, p);
                }
                gcd_mod(&acc, &hm, p).len() > 1
            }
            None => true,
        };
        if hit {
            let sr = Rational::from_integer(sv.into());
            let mut val = Poly::zero();
            let mut pw = Rational::one();
            for ej in &e {
                val = val.add(&ej.scale(&pw));
                pw *= &sr;
            }
            if val.is_zero() || h.gcd(&val).degree() >= 1 {
                best = sv;
            }
        }
    }
    (best, complete)
}

/// Cauchy bound on |s| over all roots α of h, with f64 outward rounding.
fn root_bound(e: &[Poly], h: &Poly) -> Option<f64> {
    let top = e.len() - 1;
    let inv = poly_inv_mod(&e[top], h)?;
    let hl = h.lc();
    let rad = 1.0
        + h.coeffs()
            .iter()
            .take(h.coeffs().len() - 1)
            .map(|c| (c / &hl).abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for ej in &e[..top] {
        let r = poly_rem(&ej.mul(&inv), h);
        let mut s = 0.0;
        for (k, c) in r.coeffs().iter().enumerate() {
            s += c.abs().to_f64().unwrap_or(f64::INFINITY) * rad.powi(k as i32);
        }
        worst = worst.max(s);
    }
    let b = (1.0 + worst) * 1.001 + 1.0;
    b.is_finite().then_some(b)
}

/// Basis of the rational solutions within automatic or supplied bounds.
pub fn rational_solutions(l: &DiffOperator, bounds: &RatSolBounds) -> Result<RatSolResult> {
    if l.is_zero() {
        return Err(Error::InvalidInput("zero operator".into()));
    }
    let a = poly_coeffs(l);
    let mut bounded = bounds.denominator.is_some() || bounds.numerator_degree.is_some();
    let den = match &bounds.denominator {
        Some(d) => d.primitive(),
        None => {
            let mut q = ZPoly::one();
            for piece in pieces(&a) {
                let (e, complete) = min_negative_exponent(&a, &piece);
                bounded |= !complete;
                if e < 0 {
                    q = q.mul(&piece.h.pow((-e) as u32));
                }
            }
            q
        }
    };
    let ndeg: Option<usize> = match bounds.numerator_degree {
        Some(d) => Some(d),
        None => {
            let ind = indicial_at(l, &Point::Infinity)?;
            bounded |= !ind.complete;
            let emax = ind.integer_roots.iter().max().cloned();
            emax.and_then(|e| {
                let d = e + BigInt::from(den.degree());
                if d.is_negative() {
                    None
                } else {
                    d.to_usize()
                }
            })
        }
    };
    let denominator = Poly::from_zpoly(&Rational::one(), &den).monic();
    let Some(nd) = ndeg else {
        return Ok(RatSolResult { basis: Vec::new(), denominator, numerator_degree: None, bounded_search: bounded });
    };
    // L ∘ (1/Q) with polynomial coefficients b_i; L(x^k/Q) ∝ Σ b_i k^(falling i) x^(k−i)
    let lt = l.rmul_fn(&RatFunc::from_zpoly(&den).inv()?).cleared_coeffs();
    let maxdeg = lt.iter().map(|b| b.degree()).max().unwrap_or(0).max(0) as usize;
    let nrows = nd + maxdeg + 1;
    let mut rows = vec![vec![BigInt::zero(); nd + 1]; nrows];
    for k in 0..=nd {
        for (i, b) in lt.iter().enumerate() {
            if i > k || b.is_zero() {
                continue;
            }
            let mut ff = BigInt::one();
            for t in 0..i {
                ff *= BigInt::from(k - t);
            }
            if ff.is_zero() {
                continue;
            }
            for (j, c) in b.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    rows[j + k - i][k] += c * &ff;
                }
            }
        }
    }
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let kernel = kernel_z(&rows, nd + 1);
    let basis: Vec<RatFunc> = kernel
        .iter()
        .map(|v| {
            let f = RatFunc::from_parts(Rational::one(), ZPoly::new(crate::qx::linalg::clear_row(v)), den.clone());
            f.scale_by(&f.scale().recip())
        })
        .collect();
    debug_assert!(basis.iter().all(|f| l.apply(f).is_zero()));
    Ok(RatSolResult { basis, denominator, numerator_degree: Some(nd), bounded_search: bounded })
}

/// Coefficient-wise product, truncated to the shorter series.
pub fn hadamard_product(s: &UnivariateSeries, t: &UnivariateSeries) -> UnivariateSeries {
    s.hadamard(t)
}
