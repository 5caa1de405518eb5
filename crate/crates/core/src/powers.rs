//! Companion systems, symmetric and exterior powers, cyclic vectors and
//! Kolchin reduced forms.
//!
//! Everything runs through one engine: a derivation δ (d/dx or θ = x·d/dx)
//! acting on coordinate vectors over Q(x) through a sparse polynomial matrix
//! over a common denominator. Iterating δ on a seed until the first linear
//! dependence gives the minimal operator of the seed. Vectors are kept as
//! u_j/den^j with u_j polynomial, so
//! u_{j+1} = den·δu_j − j·δ(den)·u_j + action(u_j).

use crate::diffop::{DiffOperator, ThetaExpr};
use crate::error::{Error, Result};
use crate::qx::matrix::{clear_rational_row, ratrec_mod};
use crate::qx::modular::{add_mod, inv_mod, mul_mod, nth_prime, reconstruct_vector, rref_mod, sub_mod, Crt};
use crate::qx::zpoly::mul_mod_poly;
use crate::qx::{Poly, QxMatrix, RatFunc, ZPoly};
use crate::random;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub const DEFAULT_DIMENSION_CAP: usize = 36;

/// First-order system Y′ = A·Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionSystem {
    pub a: QxMatrix,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerResult {
    /// Cleared polynomial-coefficient form.
    pub operator: DiffOperator,
    pub full_dim: usize,
    pub drop: bool,
}

/// A = rows/den, row a lists (b, entry) with δY_a = Σ_b entry·Y_b/den.
#[derive(Clone, Debug)]
struct BaseSystem {
    n: usize,
    rows: Vec<Vec<(usize, ZPoly)>>,
    den: ZPoly,
    theta: bool,
}

impl BaseSystem {
    /// Companion system of Σ c_i δ^i with polynomial coefficients.
    fn from_coeffs(c: &[ZPoly], theta: bool) -> Self {
        let n = c.len() - 1;
        let den = c[n].clone();
        let mut rows: Vec<Vec<(usize, ZPoly)>> = (0..n.saturating_sub(1)).map(|a| vec![(a + 1, den.clone())]).collect();
        rows.push(c[..n].iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(b, p)| (b, p.neg())).collect());
        BaseSystem { n, rows, den, theta }
    }

    /// D-form or θ-form, whichever has smaller coefficient degrees.
    fn from_operator(l: &DiffOperator) -> Self {
        let d = l.cleared_coeffs();
        let t = l.to_theta().cleared();
        let maxdeg = |c: &[ZPoly]| c.iter().map(|p| p.degree()).max().unwrap_or(0);
        if t.len() == d.len() && maxdeg(&t) < maxdeg(&d) {
            BaseSystem::from_coeffs(&t, true)
        } else {
            BaseSystem::from_coeffs(&d, false)
        }
    }

    fn from_operator_d(l: &DiffOperator) -> Self {
        BaseSystem::from_coeffs(&l.cleared_coeffs(), false)
    }

    fn from_matrix(a: &QxMatrix) -> Self {
        let n = a.rows();
        let all: Vec<&RatFunc> = (0..n).flat_map(|i| a.row(i).iter()).collect();
        let mut den = ZPoly::one();
        for f in &all {
            den = lcm_z(&den, f.den_z());
        }
        let den_rf = RatFunc::from_zpoly(&den);
        let scaled: Vec<Vec<(ZPoly, ZPoly)>> =
            (0..n).map(|i| a.row(i).iter().map(|f| f.mul(&den_rf).to_integer_pair()).collect()).collect();
        let mut l = BigInt::one();
        for (_, d) in scaled.iter().flatten() {
            l = l.lcm(&d.lc());
        }
        let rows = scaled
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, (num, _))| !num.is_zero())
                    .map(|(j, (num, d))| (j, num.scale(&(&l / d.lc()))))
                    .collect()
            })
            .collect();
        BaseSystem { n, rows, den: den.scale(&l), theta: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Symmetric,
    Exterior,
}

struct Module {
    dim: usize,
    /// action[s] = [(t, c)]: coordinate s feeds coordinate t with weight c/den.
    action: Vec<Vec<(usize, ZPoly)>>,
    den: ZPoly,
    theta: bool,
}

fn tuples(n: usize, m: usize, kind: Kind) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, start: usize, strict: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            rec(n, m, if strict { a + 1 } else { a }, strict, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 0, kind == Kind::Exterior, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

fn power_dim(n: usize, m: usize, kind: Kind) -> usize {
    match kind {
        Kind::Symmetric => binomial(n + m - 1, m),
        Kind::Exterior => binomial(n, m),
    }
}

fn power_module(base: &BaseSystem, m: usize, kind: Kind) -> Module {
    let basis = tuples(base.n, m, kind);
    let index: HashMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut action = Vec::with_capacity(basis.len());
    for beta in &basis {
        let mut acc: HashMap<usize, ZPoly> = HashMap::new();
        for i in 0..m {
            for (b, c) in &base.rows[beta[i]] {
                let mut g = beta.clone();
                g[i] = *b;
                let mut sign = true;
                match kind {
                    Kind::Symmetric => g.sort_unstable(),
                    Kind::Exterior => {
                        if beta.iter().enumerate().any(|(j, &a)| j != i && a == *b) {
                            continue;
                        }
                        // bubble into place counting transpositions
                        let mut k = i;
                        while k > 0 && g[k - 1] > g[k] {
                            g.swap(k - 1, k);
                            sign = !sign;
                            k -= 1;
                        }
                        while k + 1 < m && g[k] > g[k + 1] {
                            g.swap(k, k + 1);
                            sign = !sign;
                            k += 1;
                        }
                    }
                }
                let t = index[&g];
                let term = if sign { c.clone() } else { c.neg() };
                let e = acc.entry(t).or_insert_with(ZPoly::zero);
                *e = e.add(&term);
            }
        }
        let mut row: Vec<(usize, ZPoly)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        row.sort_by_key(|(t, _)| *t);
        action.push(row);
    }
    Module { dim: basis.len(), action, den: base.den.clone(), theta: base.theta }
}

fn delta_z(f: &ZPoly, theta: bool) -> ZPoly {
    let d = f.derivative();
    if theta {
        d.shift(1)
    } else {
        d
    }
}

fn step_exact(m: &Module, u: &[ZPoly], j: usize) -> Vec<ZPoly> {
    let dden = delta_z(&m.den, m.theta).scale(&BigInt::from(j));
    let mut out: Vec<ZPoly> = u.iter().map(|f| m.den.mul(&delta_z(f, m.theta)).sub(&dden.mul(f))).collect();
    for (s, row) in m.action.iter().enumerate() {
        if u[s].is_zero() {
            continue;
        }
        for (t, c) in row {
            out[*t] = out[*t].add(&c.mul(&u[s]));
        }
    }
    out
}

type PolyP = Vec<u64>;

fn trim(v: &mut PolyP) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn add_p(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut c: PolyP = (0..n).map(|i| add_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p)).collect();
    trim(&mut c);
    c
}

fn scale_p(a: &[u64], s: u64, p: u64) -> PolyP {
    let mut c: PolyP = a.iter().map(|&x| mul_mod(x, s, p)).collect();
    trim(&mut c);
    c
}

fn delta_p(f: &[u64], theta: bool, p: u64) -> PolyP {
    let mut c: PolyP = if theta {
        f.iter().enumerate().map(|(i, &a)| mul_mod(a, i as u64 % p, p)).collect()
    } else {
        f.iter().enumerate().skip(1).map(|(i, &a)| mul_mod(a, i as u64 % p, p)).collect()
    };
    trim(&mut c);
    c
}

fn eval_p(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u64, |acc, &a| add_mod(mul_mod(acc, x, p), a, p))
}

struct ModuleP {
    p: u64,
    action: Vec<Vec<(usize, PolyP)>>,
    den: PolyP,
    dden: PolyP,
    theta: bool,
}

impl ModuleP {
    fn new(m: &Module, p: u64) -> Option<Self> {
        let den = m.den.reduce_mod(p);
        if den.len() != m.den.len() {
            return None;
        }
        let action = m.action.iter().map(|r| r.iter().map(|(t, c)| (*t, c.reduce_mod(p))).collect()).collect();
        let dden = delta_p(&den, m.theta, p);
        Some(ModuleP { p, action, den, dden, theta: m.theta })
    }

    fn step(&self, u: &[PolyP], j: usize) -> Vec<PolyP> {
        let p = self.p;
        let dj = scale_p(&self.dden, (j as u64) % p, p);
        let mut out: Vec<PolyP> = u
            .iter()
            .map(|f| {
                let a = mul_mod_poly(&self.den, &delta_p(f, self.theta, p), p);
                let b = mul_mod_poly(&dj, f, p);
                let mut c = add_p(&a, &scale_p(&b, p - 1, p), p);
                trim(&mut c);
                c
            })
            .collect();
        for (s, row) in self.action.iter().enumerate() {
            if u[s].is_empty() {
                continue;
            }
            for (t, c) in row {
                out[*t] = add_p(&out[*t], &mul_mod_poly(c, &u[s], p), p);
            }
        }
        out
    }
}

/// Incremental row echelon form over F_p.
struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Inserts v; false when v lies in the span.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, r) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (a, &b) in v.iter_mut().zip(r) {
                    *a = sub_mod(*a, mul_mod(f, b, p), p);
                }
            }
        }
        let Some(piv) = v.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = inv_mod(v[piv], p);
        for a in v.iter_mut() {
            *a = mul_mod(*a, inv, p);
        }
        self.rows.push((piv, v));
        true
    }
}

/// Detection state at one prime and one evaluation point.
struct Probe {
    mp: ModuleP,
    x: u64,
    us: Vec<Vec<PolyP>>,
    ech: Echelon,
}

impl Probe {
    fn eval(&self, u: &[PolyP]) -> Vec<u64> {
        u.iter().map(|f| eval_p(f, self.x, self.mp.p)).collect()
    }

    fn rebuild(&mut self, rng: &mut ChaCha8Rng) {
        self.x = rng.gen_range(1..self.mp.p);
        self.ech = Echelon::new(self.mp.p);
        let vals: Vec<Vec<u64>> = self.us.iter().map(|u| self.eval(u)).collect();
        for v in vals {
            self.ech.insert(v);
        }
    }
}

/// Index k of the first dependence u_k ∈ span(u_0..u_{k−1}).
fn dependence_order(m: &Module, seed: &[ZPoly]) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d1f_f0b5);
    let mut probes: Vec<Probe> = Vec::new();
    let mut idx = 0;
    while probes.len() < 2 {
        let p = nth_prime(idx);
        idx += 1;
        let Some(mp) = ModuleP::new(m, p) else { continue };
        let u0: Vec<PolyP> = seed.iter().map(|f| f.reduce_mod(p)).collect();
        if u0.iter().all(|f| f.is_empty()) {
            continue;
        }
        let x = rng.gen_range(1..p);
        probes.push(Probe { mp, x, us: vec![u0], ech: Echelon::new(p) });
    }
    for pr in probes.iter_mut() {
        let v = pr.eval(&pr.us[0]);
        if !pr.ech.insert(v) {
            pr.rebuild(&mut rng);
        }
    }
    let mut j = 0;
    loop {
        if j + 1 > m.dim {
            return m.dim;
        }
        for pr in probes.iter_mut() {
            let next = pr.mp.step(&pr.us[j], j);
            pr.us.push(next);
        }
        j += 1;
        loop {
            let indep: Vec<bool> = probes
                .iter_mut()
                .map(|pr| {
                    let v = pr.eval(&pr.us[j]);
                    pr.ech.insert(v)
                })
                .collect();
            if indep.iter().all(|&b| !b) {
                return j;
            }
            if indep.iter().all(|&b| b) {
                break;
            }
            // a point understated the rank: move it and retest
            for (pr, &ok) in probes.iter_mut().zip(&indep) {
                if !ok {
                    pr.us.truncate(j + 1);
                    let last = pr.us.pop().unwrap();
                    pr.rebuild(&mut rng);
                    pr.us.push(last);
                } else {
                    // undo the insertion so both probes retest u_j
                    pr.ech.rows.pop();
                }
            }
        }
    }
}

type Entry = Option<(Vec<u64>, Vec<u64>)>;

/// c_0..c_{k−1} of Σ c_j u_j + u_k = 0 over F_p(x), as (numerator, monic
/// denominator) pairs. `npts` is updated to the number of points that was
/// needed.
fn relation_mod_p(us: &[Vec<PolyP>], k: usize, p: u64, rng: &mut ChaCha8Rng, npts: &mut usize) -> Option<Vec<Entry>> {
    let d = us[0].len();
    let mut xs: Vec<u64> = Vec::new();
    let mut vals: Vec<Vec<u64>> = Vec::new();
    let mut misses = 0;
    let hold = 2usize;
    loop {
        while xs.len() < *npts + hold {
            let x = rng.gen_range(1..p);
            if xs.contains(&x) {
                continue;
            }
            let mut mat: Vec<Vec<u64>> = (0..d).map(|i| us.iter().map(|u| eval_p(&u[i], x, p)).collect()).collect();
            let piv = rref_mod(&mut mat, k + 1, p);
            if piv.len() != k || piv.iter().enumerate().any(|(i, &c)| c != i) {
                misses += 1;
                if misses > 64 + xs.len() {
                    return None;
                }
                continue;
            }
            xs.push(x);
            vals.push((0..k).map(|j| if mat[j][k] == 0 { 0 } else { p - mat[j][k] }).collect());
        }
        let n = xs.len() - hold;
        let mut out = Vec::with_capacity(k);
        let mut ok = true;
        for j in 0..k {
            let ys: Vec<u64> = vals.iter().map(|v| v[j]).collect();
            if ys.iter().all(|&y| y == 0) {
                out.push(None);
                continue;
            }
            match ratrec_mod(&xs[..n], &ys[..n], p) {
                Some((num, den)) => {
                    let fits = (n..xs.len()).all(|i| {
                        let dv = eval_p(&den, xs[i], p);
                        dv != 0 && mul_mod(ys[i], dv, p) == eval_p(&num, xs[i], p)
                    });
                    if !fits {
                        ok = false;
                        break;
                    }
                    out.push(Some((num, den)));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(out);
        }
        *npts *= 2;
    }
}

type Shape = Vec<Option<(usize, usize)>>;

fn lcm_z(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let g = a.gcd(b).primitive_part().1;
    a.primitive_part().1.mul(&b.primitive_part().1.div_exact(&g).unwrap())
}

/// Integer polynomial coefficients from rational c_0..c_{k−1} and c_k = 1.
fn integer_coefficients(c: &[RatFunc]) -> Vec<ZPoly> {
    let mut den = ZPoly::one();
    for f in c {
        den = lcm_z(&den, f.den_z());
    }
    let den_rf = RatFunc::from_zpoly(&den);
    let scaled: Vec<RatFunc> = c.iter().map(|f| f.mul(&den_rf)).collect();
    clear_rational_row(&scaled)
}

/// Σ a_j u_j = 0 exactly.
fn verify_relation(m: &Module, seed: &[ZPoly], a: &[ZPoly]) -> bool {
    let k = a.len() - 1;
    let mut us = vec![seed.to_vec()];
    for j in 0..k {
        let next = step_exact(m, &us[j], j);
        us.push(next);
    }
    (0..m.dim).all(|i| {
        let mut s = ZPoly::zero();
        for j in 0..=k {
            if !a[j].is_zero() && !us[j][i].is_zero() {
                s = s.add(&a[j].mul(&us[j][i]));
            }
        }
        s.is_zero()
    })
}

/// Operator coefficients from a relation among the u_j = den^j·δ^j(seed).
fn operator_coefficients(m: &Module, a: &[ZPoly]) -> Vec<ZPoly> {
    let mut pw = ZPoly::one();
    let mut out = Vec::with_capacity(a.len());
    for c in a {
        out.push(c.mul(&pw));
        pw = pw.mul(&m.den);
    }
    let g = out.iter().fold(BigInt::zero(), |g, p| g.gcd(&p.content()));
    out.into_iter().map(|p| p.div_scalar_exact(&g)).collect()
}

/// Polynomial coefficients a_0..a_k of the minimal δ-operator of the seed.
fn minimal_relation(m: &Module, seed: &[ZPoly]) -> Result<Vec<ZPoly>> {
    if seed.iter().all(|f| f.is_zero()) {
        return Err(Error::Degenerate("zero seed vector".into()));
    }
    let k = dependence_order(m, seed);
    if k == 0 {
        return Err(Error::Degenerate("zero seed vector".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut npts = 8usize;
    let mut shape: Option<Shape> = None;
    let mut crt = Crt::new(0);
    let mut used = 0usize;
    let mut next_try = 1usize;
    let mut idx = 2usize;
    let mut failures = 0usize;
    loop {
        if idx > 4000 {
            return Err(Error::RelationFailed("no stable reconstruction".into()));
        }
        let p = nth_prime(idx);
        idx += 1;
        let Some(mp) = ModuleP::new(m, p) else { continue };
        let mut us: Vec<Vec<PolyP>> = vec![seed.iter().map(|f| f.reduce_mod(p)).collect()];
        for j in 0..k {
            let next = mp.step(&us[j], j);
            us.push(next);
        }
        let Some(entries) = relation_mod_p(&us, k, p, &mut rng, &mut npts) else {
            failures += 1;
            if failures > 20 {
                return Err(Error::Degenerate("no usable evaluation points".into()));
            }
            continue;
        };
        let this: Shape = entries.iter().map(|e| e.as_ref().map(|(n, d)| (n.len() - 1, d.len() - 1))).collect();
        let total = |s: &Shape| s.iter().map(|e| e.map_or(0, |(a, b)| a + b + 2)).sum::<usize>();
        match &shape {
            Some(s) if *s == this => {}
            Some(s) if total(&this) <= total(s) => continue,
            _ => {
                crt = Crt::new(total(&this));
                shape = Some(this.clone());
                used = 0;
                next_try = 1;
            }
        }
        let flat: Vec<u64> = entries.into_iter().flatten().flat_map(|(n, d)| n.into_iter().chain(d)).collect();
        crt.add(p, &flat);
        used += 1;
        if used < next_try {
            continue;
        }
        next_try = used + used.div_ceil(3).max(1);
        let Some(vals) = reconstruct_vector(&crt.values, &crt.modulus) else { continue };
        let mut pos = 0;
        let mut c = Vec::with_capacity(k + 1);
        for e in shape.as_ref().unwrap() {
            match e {
                None => c.push(RatFunc::zero()),
                Some((dn, dd)) => {
                    let num = Poly::new(vals[pos..pos + dn + 1].to_vec());
                    pos += dn + 1;
                    let den = Poly::new(vals[pos..pos + dd + 1].to_vec());
                    pos += dd + 1;
                    match RatFunc::new(&num, &den) {
                        Ok(f) => c.push(f),
                        Err(_) => break,
                    }
                }
            }
        }
        if c.len() != k {
            continue;
        }
        c.push(RatFunc::one());
        let a = integer_coefficients(&c);
        let ok = verify_relation(m, seed, &a);
        if ok {
            return Ok(operator_coefficients(m, &a));
        }
    }
}

fn relation_to_operator(a: &[ZPoly], theta: bool) -> DiffOperator {
    if theta {
        let e = ThetaExpr::new(a.iter().map(RatFunc::from_zpoly).collect());
        DiffOperator::from_theta(&e)
    } else {
        DiffOperator::from_zpolys(a)
    }
}

fn power(l: &DiffOperator, m: usize, kind: Kind, cap: usize) -> Result<PowerResult> {
    let n = l.order();
    if l.is_zero() || n == 0 {
        return Err(Error::InvalidInput("operator order must be positive".into()));
    }
    if m == 0 || (kind == Kind::Exterior && m > n) {
        return Err(Error::InvalidInput(format!("invalid power {} for order {}", m, n)));
    }
    let full_dim = power_dim(n, m, kind);
    if full_dim > cap {
        return Err(Error::DimensionCap { dim: full_dim, cap });
    }
    let base = BaseSystem::from_operator(l);
    let module = power_module(&base, m, kind);
    let seed_tuple: Vec<usize> = match kind {
        Kind::Symmetric => vec![0; m],
        Kind::Exterior => (0..m).collect(),
    };
    let basis = tuples(n, m, kind);
    let pos = basis.iter().position(|t| *t == seed_tuple).unwrap();
    let mut seed = vec![ZPoly::zero(); module.dim];
    seed[pos] = ZPoly::one();
    let a = minimal_relation(&module, &seed)?;
    let mut op = relation_to_operator(&a, base.theta);
    if base.theta && kind == Kind::Exterior {
        let s = m * (m - 1) / 2;
        op = op.rmul_fn(&RatFunc::from_zpoly(&ZPoly::monomial(BigInt::one(), s)));
    }
    let operator = op.cleared();
    let drop = operator.order() < full_dim;
    Ok(PowerResult { operator, full_dim, drop })
}

pub fn sym_power_capped(l: &DiffOperator, m: usize, cap: usize) -> Result<PowerResult> {
    power(l, m, Kind::Symmetric, cap)
}

pub fn ext_power_capped(l: &DiffOperator, m: usize, cap: usize) -> Result<PowerResult> {
    power(l, m, Kind::Exterior, cap)
}

pub fn sym_power(l: &DiffOperator, m: usize) -> Result<PowerResult> {
    sym_power_capped(l, m, DEFAULT_DIMENSION_CAP)
}

pub fn ext_power(l: &DiffOperator, m: usize) -> Result<PowerResult> {
    ext_power_capped(l, m, DEFAULT_DIMENSION_CAP)
}

pub fn sym_square(l: &DiffOperator) -> Result<PowerResult> {
    if l.order() < 2 {
        return Err(Error::InvalidInput("symmetric square needs order at least 2".into()));
    }
    sym_power(l, 2)
}

pub fn ext_square(l: &DiffOperator) -> Result<PowerResult> {
    if l.order() < 2 {
        return Err(Error::InvalidInput("exterior square needs order at least 2".into()));
    }
    ext_power(l, 2)
}

pub fn companion(l: &DiffOperator) -> Result<CompanionSystem> {
    let n = l.order();
    if l.is_zero() || n == 0 {
        return Err(Error::InvalidInput("operator order must be positive".into()));
    }
    let mut a = QxMatrix::zeros(n, n);
    for i in 0..n - 1 {
        a.set(i, i + 1, RatFunc::one());
    }
    let lc = l.lc();
    for j in 0..n {
        a.set(n - 1, j, l.coeff(j).div(&lc)?.neg());
    }
    Ok(CompanionSystem { a, note: format!("companion of an order-{} operator", n) })
}

fn seed_from_form(c: &[RatFunc]) -> (Vec<ZPoly>, RatFunc) {
    let mut den = ZPoly::one();
    for f in c {
        den = lcm_z(&den, f.den_z());
    }
    let den_rf = RatFunc::from_zpoly(&den);
    let scaled: Vec<RatFunc> = c.iter().map(|f| f.mul(&den_rf)).collect();
    let cleared = clear_rational_row(&scaled);
    // cleared = λ·den·c for a rational λ; only the direction matters
    (cleared, den_rf)
}

/// Minimal operator annihilating c·Y for the solutions of Y′ = A·Y.
pub fn cyclic_operator(s: &CompanionSystem, c: &[RatFunc]) -> Result<DiffOperator> {
    let n = s.a.rows();
    if c.len() != n || s.a.cols() != n {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    if c.iter().all(|f| f.is_zero()) {
        return Err(Error::InvalidInput("linear form must be nonzero".into()));
    }
    // the form transforms by c ↦ c′ + c·A, i.e. coordinate i feeds j with A[i][j]
    let base = BaseSystem::from_matrix(&s.a);
    let module = power_module(&base, 1, Kind::Symmetric);
    let (seed, den) = seed_from_form(c);
    let a = minimal_relation(&module, &seed)?;
    Ok(relation_to_operator(&a, false).rmul_fn(&den).cleared())
}

/// Minimal operator annihilating Σ c_i·y^(i) over the solutions y of L.
pub fn form_annihilator(l: &DiffOperator, c: &[RatFunc]) -> Result<DiffOperator> {
    let n = l.order();
    if c.len() != n {
        return Err(Error::InvalidInput("form length must equal the operator order".into()));
    }
    if c.iter().all(|f| f.is_zero()) {
        return Err(Error::Degenerate("form vanishes modulo the operator".into()));
    }
    let base = BaseSystem::from_operator_d(l);
    let module = power_module(&base, 1, Kind::Symmetric);
    let (seed, den) = seed_from_form(c);
    let a = minimal_relation(&module, &seed)?;
    Ok(relation_to_operator(&a, false).rmul_fn(&den).cleared())
}

/// J = [[0, I], [−I, 0]] of size 2p.
pub fn symplectic_form(p: usize) -> QxMatrix {
    let mut j = QxMatrix::zeros(2 * p, 2 * p);
    for i in 0..p {
        j.set(i, p + i, RatFunc::one());
        j.set(p + i, i, RatFunc::from_int(-1));
    }
    j
}

pub fn is_antisymmetric(a: &QxMatrix) -> bool {
    a.transpose() == a.neg()
}

/// (J·A)ᵀ·J + J·(J·A) = 0 for the matrix B = J·A given.
pub fn is_infinitesimally_symplectic(b: &QxMatrix) -> bool {
    let j = symplectic_form(b.rows() / 2);
    b.rows() % 2 == 0 && b.transpose().mul(&j).add(&j.mul(b)).is_zero()
}

fn random_entry<R: Rng>(r: &mut R, degree: usize) -> RatFunc {
    RatFunc::from_zpoly(&random::zpoly(r, degree))
}

/// Antisymmetric q×q matrix with random polynomial entries.
pub fn kolchin_orthogonal_system(q: usize, degree: usize, seed: u64) -> Result<CompanionSystem> {
    if q < 2 {
        return Err(Error::InvalidInput("q must be at least 2".into()));
    }
    let mut r = random::rng(seed);
    let mut a = QxMatrix::zeros(q, q);
    for i in 0..q {
        for j in i + 1..q {
            let e = random_entry(&mut r, degree);
            a.set(j, i, e.neg());
            a.set(i, j, e);
        }
    }
    Ok(CompanionSystem { a, note: format!("antisymmetric {}x{}, degree {}, seed {}", q, q, degree, seed) })
}

/// J·A with A symmetric 2p×2p with random polynomial entries.
pub fn kolchin_symplectic_system(p: usize, degree: usize, seed: u64) -> Result<CompanionSystem> {
    if p < 1 {
        return Err(Error::InvalidInput("p must be at least 1".into()));
    }
    let mut r = random::rng(seed);
    let n = 2 * p;
    let mut a = QxMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let e = random_entry(&mut r, degree);
            a.set(j, i, e.clone());
            a.set(i, j, e);
        }
    }
    Ok(symplectic_from(&a, format!("J*A, A symmetric {}x{}, degree {}, seed {}", n, n, degree, seed)))
}

/// J·A for a given symmetric A.
pub fn symplectic_from(a: &QxMatrix, note: String) -> CompanionSystem {
    CompanionSystem { a: symplectic_form(a.rows() / 2).mul(a), note }
}

/// Unit vector linear form (1, 0, …, 0).
pub fn first_coordinate(n: usize) -> Vec<RatFunc> {
    (0..n).map(|i| if i == 0 { RatFunc::one() } else { RatFunc::zero() }).collect()
}
