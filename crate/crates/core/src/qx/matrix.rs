//! Matrices over Q(x) and their right kernels.

use super::modular::{
    add_mod, inv_mod, kernel_from_rref, mul_mod, nth_prime, profile_better, rational_reconstruct, rref_mod,
    sub_mod, Crt,
};
use super::ratfunc::RatFunc;
use super::zpoly::{gcd_mod, mul_mod_poly, trim, ZPoly};
use super::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QxMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl QxMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QxMatrix { rows, cols, data: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QxMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QxMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QxMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = RatFunc::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        s = s.add(&a.mul(b));
                    }
                }
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = RatFunc::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s.add(&a.mul(b));
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Rows with denominators cleared: every entry an integer polynomial.
    pub fn cleared_rows(&self) -> Vec<Vec<ZPoly>> {
        (0..self.rows).map(|i| clear_rational_row(self.row(i))).collect()
    }

    /// Right kernel basis, RREF-normalized: one vector per free column with
    /// that coordinate 1 and the other free coordinates 0.
    pub fn nullspace(&self) -> Vec<Vec<RatFunc>> {
        let rows = self.cleared_rows();
        let deg = rows.iter().flatten().map(|p| p.degree()).max().unwrap_or(0);
        if self.rows * self.cols <= 64 && deg <= 12 {
            nullspace_bareiss(&rows, self.cols)
        } else {
            nullspace_modular(&rows, self.cols)
        }
    }
}

impl fmt::Debug for QxMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|a| a.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Multiply a row of rational functions by the lcm of its denominators and
/// remove the integer content.
pub fn clear_rational_row(row: &[RatFunc]) -> Vec<ZPoly> {
    let mut l = ZPoly::one();
    let mut den_scale = BigInt::one();
    for a in row.iter().filter(|a| !a.is_zero()) {
        if !a.den_z().is_constant() {
            let g = l.gcd(a.den_z());
            l = l.mul(&a.den_z().div_exact(&g).unwrap());
        }
        den_scale = num_integer::Integer::lcm(&den_scale, a.scale().denom());
    }
    let out: Vec<ZPoly> = row
        .iter()
        .map(|a| {
            if a.is_zero() {
                return ZPoly::zero();
            }
            let q = l.div_exact(a.den_z()).unwrap();
            let s = a.scale() * Rational::from_integer(den_scale.clone());
            q.mul(a.num_z()).scale(&s.to_integer())
        })
        .collect();
    let g = out.iter().fold(BigInt::zero(), |g, p| num_integer::Integer::gcd(&g, &p.content()));
    if g.is_zero() || g.is_one() {
        out
    } else {
        out.into_iter().map(|p| p.div_scalar_exact(&g)).collect()
    }
}

/// Fraction-free elimination over Z[x], back-substitution over Q(x).
pub fn nullspace_bareiss(rows: &[Vec<ZPoly>], ncols: usize) -> Vec<Vec<RatFunc>> {
    let mut a = rows.to_vec();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = ZPoly::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = ZPoly::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![RatFunc::zero(); ncols];
        x[f] = RatFunc::one();
        for (i, &c) in pivots.iter().enumerate().rev() {
            let mut s = RatFunc::zero();
            for j in c + 1..ncols {
                if !a[i][j].is_zero() && !x[j].is_zero() {
                    s = s.add(&x[j].mul(&RatFunc::from_zpoly(&a[i][j])));
                }
            }
            x[c] = s.neg().div(&RatFunc::from_zpoly(&a[i][c])).unwrap();
        }
        basis.push(x);
    }
    basis
}

/// Exact check that `M·v = 0` for integer polynomial rows.
pub fn verify_poly_kernel(rows: &[Vec<ZPoly>], basis: &[Vec<RatFunc>]) -> bool {
    basis.par_iter().all(|v| {
        let w = clear_rational_row(v);
        rows.iter().all(|r| {
            let mut s = ZPoly::zero();
            for (a, b) in r.iter().zip(&w) {
                if !a.is_zero() && !b.is_zero() {
                    s = s.add(&a.mul(b));
                }
            }
            s.is_zero()
        })
    })
}

/// Shape of one prime's reconstruction: per entry (numerator degree,
/// denominator degree), zero entries as None.
type Shape = Vec<Option<(usize, usize)>>;

/// Evaluation/interpolation kernel with rational function reconstruction
/// per prime, Chinese remaindering across primes and exact verification.
pub fn nullspace_modular(rows: &[Vec<ZPoly>], ncols: usize) -> Vec<Vec<RatFunc>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut best: Option<Vec<usize>> = None;
    let mut shape: Option<Shape> = None;
    let mut crt = Crt::new(0);
    let mut used = 0usize;
    let mut next_try = 1usize;
    let mut prime_idx = 0usize;
    loop {
        let p = nth_prime(prime_idx);
        prime_idx += 1;
        let red: Vec<Vec<Vec<u64>>> = rows.iter().map(|r| r.iter().map(|a| a.reduce_mod(p)).collect()).collect();
        let seed: u64 = rng.gen();
        let Some(img) = kernel_image_mod_p(&red, ncols, p, seed, &mut best) else {
            continue;
        };
        let (profile_changed, entries) = img;
        if profile_changed {
            shape = None;
        }
        if entries.is_empty() {
            return Vec::new();
        }
        let this_shape: Shape = entries.iter().map(|e| e.as_ref().map(|(n, d)| (n.len() - 1, d.len() - 1))).collect();
        match &shape {
            Some(s) if *s == this_shape => {}
            Some(s) if !shape_dominates(&this_shape, s) => continue,
            _ => {
                shape = Some(this_shape.clone());
                let len: usize = this_shape.iter().map(|e| e.map_or(0, |(a, b)| a + b + 2)).sum();
                crt = Crt::new(len);
                used = 0;
                next_try = 1;
            }
        }
        let mut flat = Vec::new();
        for (n, d) in entries.into_iter().flatten() {
            flat.extend(n);
            flat.extend(d);
        }
        crt.add(p, &flat);
        used += 1;
        if used < next_try {
            continue;
        }
        next_try = used + used.div_ceil(2);
        let sh = shape.as_ref().unwrap();
        if let Some(basis) = assemble(&crt, sh, best.as_ref().unwrap(), ncols) {
            if verify_poly_kernel(rows, &basis) {
                return basis;
            }
        }
    }
}

fn shape_dominates(a: &Shape, b: &Shape) -> bool {
    let total = |s: &Shape| s.iter().map(|e| e.map_or(0, |(x, y)| x + y + 1)).sum::<usize>();
    total(a) > total(b)
}

fn assemble(crt: &Crt, shape: &Shape, pivots: &[usize], ncols: usize) -> Option<Vec<Vec<RatFunc>>> {
    let mut is_pivot = vec![false; ncols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    let mut pos = 0usize;
    let mut basis = Vec::new();
    let mut it = shape.iter();
    for &f in &free {
        let mut v = vec![RatFunc::zero(); ncols];
        v[f] = RatFunc::one();
        for &c in pivots {
            let e = it.next().unwrap();
            if let Some((dn, dd)) = *e {
                let mut num = Vec::with_capacity(dn + 1);
                for k in 0..=dn {
                    num.push(rational_reconstruct(&crt.values[pos + k], &crt.modulus)?);
                }
                pos += dn + 1;
                let mut den = Vec::with_capacity(dd + 1);
                for k in 0..=dd {
                    den.push(rational_reconstruct(&crt.values[pos + k], &crt.modulus)?);
                }
                pos += dd + 1;
                let n = super::poly::Poly::new(num);
                let d = super::poly::Poly::new(den);
                if d.is_zero() || n.is_zero() {
                    return None;
                }
                v[c] = RatFunc::new(&n, &d).ok()?;
            }
        }
        basis.push(v);
    }
    Some(basis)
}

type Entry = Option<(Vec<u64>, Vec<u64>)>;

/// Kernel of the matrix over F_p(x): pivot-coordinate entries as
/// (numerator, monic denominator) pairs, in basis-major order.
/// Returns (profile changed, entries); `None` when this prime is unusable.
fn kernel_image_mod_p(
    red: &[Vec<Vec<u64>>],
    ncols: usize,
    p: u64,
    seed: u64,
    best: &mut Option<Vec<usize>>,
) -> Option<(bool, Vec<Entry>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut changed = false;
    let eval = |x: u64| -> Vec<Vec<u64>> {
        red.iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        let mut s = 0u64;
                        for &a in c.iter().rev() {
                            s = add_mod(mul_mod(s, x, p), a, p);
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let mut xs: Vec<u64> = Vec::new();
    let mut vals: Vec<Vec<u64>> = Vec::new();
    let mut target = 8usize;
    let mut misses = 0usize;
    loop {
        while xs.len() < target {
            let x = rng.gen_range(1..p);
            let mut m = eval(x);
            let piv = rref_mod(&mut m, ncols, p);
            match best {
                Some(b) if *b == piv => {}
                Some(b) if !profile_better(&piv, b) => {
                    misses += 1;
                    if misses > 4 * target + 16 {
                        return None;
                    }
                    continue;
                }
                _ => {
                    if best.is_some() {
                        changed = true;
                    }
                    *best = Some(piv.clone());
                    xs.clear();
                    vals.clear();
                }
            }
            let k = kernel_from_rref(&m, &piv, ncols, p);
            if k.is_empty() {
                return Some((changed, Vec::new()));
            }
            let piv_entries: Vec<u64> = k.iter().flat_map(|v| piv.iter().map(move |&c| v[c])).collect();
            xs.push(x);
            vals.push(piv_entries);
        }
        let nent = vals[0].len();
        let mut out: Vec<Entry> = Vec::with_capacity(nent);
        let mut ok = true;
        for e in 0..nent {
            let ys: Vec<u64> = vals.iter().map(|v| v[e]).collect();
            if ys.iter().all(|&y| y == 0) {
                out.push(None);
                continue;
            }
            match ratrec_mod(&xs, &ys, p) {
                Some(r) => out.push(Some(r)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some((changed, out));
        }
        target *= 2;
    }
}

/// Newton interpolation over F_p; returns coefficients lowest first.
pub fn interpolate_mod(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    let mut inv = vec![0u64; n];
    for j in 1..n {
        for i in j..n {
            inv[i] = sub_mod(xs[i], xs[i - j], p);
        }
        batch_invert(&mut inv[j..n], p);
        for i in (j..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1], p);
            dd[i] = mul_mod(num, inv[i], p);
        }
    }
    let mut poly = vec![0u64; 1];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] = add_mod(next[k + 1], c, p);
            next[k] = sub_mod(next[k], mul_mod(c, xs[i], p), p);
        }
        next[0] = add_mod(next[0], dd[i], p);
        poly = next;
    }
    trim(&mut poly);
    poly
}

/// In-place inversion of nonzero residues with a single modular inverse.
pub fn batch_invert(v: &mut [u64], p: u64) {
    if v.is_empty() {
        return;
    }
    let mut prefix = Vec::with_capacity(v.len());
    let mut acc = 1u64;
    for &a in v.iter() {
        prefix.push(acc);
        acc = mul_mod(acc, a, p);
    }
    let mut inv = inv_mod(acc, p);
    for i in (0..v.len()).rev() {
        let a = v[i];
        v[i] = mul_mod(inv, prefix[i], p);
        inv = mul_mod(inv, a, p);
    }
}

/// Rational function reconstruction from point values with a redundancy
/// margin: accepts only when the quotient following the chosen remainder
/// has degree at least 3, i.e. two or more spare points agree.
pub fn ratrec_mod(xs: &[u64], ys: &[u64], p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let f = interpolate_mod(xs, ys, p);
    let mut m = vec![1u64];
    for &x in xs {
        m = mul_mod_poly(&m, &[p - x % p, 1], p);
    }
    let (mut r0, mut r1) = (m, f);
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    let mut best: Option<(usize, Vec<u64>, Vec<u64>)> = None;
    while !r1.is_empty() {
        let (q, r) = divrem_mod(&r0, &r1, p);
        let qdeg = q.len() - 1;
        if best.as_ref().is_none_or(|b| qdeg > b.0) {
            best = Some((qdeg, r1.clone(), t1.clone()));
        }
        let t = sub_poly(&t0, &mul_mod_poly(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (qdeg, num, den) = best?;
    if qdeg < 3 || den.is_empty() {
        return None;
    }
    if gcd_mod(&num, &den, p).len() != 1 {
        return None;
    }
    let inv = inv_mod(*den.last().unwrap(), p);
    let num: Vec<u64> = num.iter().map(|&a| mul_mod(a, inv, p)).collect();
    let den: Vec<u64> = den.iter().map(|&a| mul_mod(a, inv, p)).collect();
    Some((num, den))
}

fn divrem_mod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let n = b.len();
    if r.len() < n {
        return (vec![0], r);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - n + 1];
    while r.len() >= n {
        let f = mul_mod(*r.last().unwrap(), inv, p);
        let sh = r.len() - n;
        q[sh] = f;
        for (j, &bj) in b.iter().enumerate() {
            r[sh + j] = sub_mod(r[sh + j], mul_mod(f, bj, p), p);
        }
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut c: Vec<u64> = (0..n)
        .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
        .collect();
    trim(&mut c);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qx::Poly;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(&Poly::from_i64(n), &Poly::from_i64(d)).unwrap()
    }

    #[test]
    fn identity_has_empty_kernel() {
        assert!(QxMatrix::identity(2).nullspace().is_empty());
    }

    #[test]
    fn x_x_kernel() {
        let m = QxMatrix::from_rows(vec![vec![RatFunc::x(), RatFunc::x()]]);
        assert_eq!(m.nullspace(), vec![vec![RatFunc::from_int(-1), RatFunc::one()]]);
    }

    #[test]
    fn ratrec_recovers() {
        let p = nth_prime(0);
        // (x + 2) / (x^2 + 3)
        let xs: Vec<u64> = (1..12).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| mul_mod((x + 2) % p, inv_mod((x * x + 3) % p, p), p))
            .collect();
        let (n, d) = ratrec_mod(&xs, &ys, p).unwrap();
        assert_eq!(n, vec![2, 1]);
        assert_eq!(d, vec![3, 0, 1]);
    }

    #[test]
    fn routes_agree() {
        let m = QxMatrix::from_rows(vec![
            vec![rf(&[1, 1], &[1]), rf(&[0, 1], &[1, 0, 1]), rf(&[3], &[1]), rf(&[1, 0, 0, 2], &[1])],
            vec![rf(&[2], &[1, -1]), rf(&[0, 0, 1], &[1]), rf(&[-1, 1], &[1]), rf(&[5], &[1])],
        ]);
        let rows = m.cleared_rows();
        let a = nullspace_bareiss(&rows, 4);
        let b = nullspace_modular(&rows, 4);
        assert_eq!(a.len(), 2);
        assert_eq!(a, b);
        for v in &a {
            assert!(m.mul_vec(v).iter().all(|e| e.is_zero()));
        }
    }
}
