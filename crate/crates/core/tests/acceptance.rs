//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the report stays in order. Exits
//! nonzero if any criterion fails.

use diffop_core::diagonal::{
    diag_series_expand, diag_series_multinomial, guess_operator, guess_operator_with_margin, hadamard_cube_series,
};
use diffop_core::fixtures;
use diffop_core::homomorphisms::{intertwiner_search, transform_solutions, AnsatzBounds};
use diffop_core::powers::{
    cyclic_operator, ext_square, first_coordinate, kolchin_orthogonal_system, kolchin_symplectic_system, sym_power,
    sym_square,
};
use diffop_core::qx::linalg::kernel_q;
use diffop_core::random;
use diffop_core::ratsol::{rational_solutions, RatSolBounds};
use diffop_core::tower::{build, expand_operator, expand_terms, extract, verify_identities, Decomposition};
use diffop_core::{DiffOperator, Error, RatFunc, Rational, UnivariateSeries};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < budget, || format!("{} took {:.1?}, budget {:?}", what, e, budget))
}

fn e(err: Error) -> String {
    err.to_string()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn generic_diagonal(n: usize) -> Result<UnivariateSeries, String> {
    let r = fixtures::load("generic").map_err(e)?;
    diag_series_expand(r.trivariate().unwrap(), n).map_err(e)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let f = fixtures::load("generic").map_err(e)?;
    let r = f.trivariate().unwrap();
    let a = diag_series_expand(r, 12).map_err(e)?;
    let b = diag_series_multinomial(r, 12).map_err(e)?;
    let want: Vec<Rational> = [1i64, 616, 947175, 1812651820].iter().map(|&n| int(n)).collect();
    ensure(a.coeffs()[..4] == want[..], || format!("expand gave {:?}", &a.coeffs()[..4]))?;
    ensure(b.coeffs()[..4] == want[..], || format!("multinomial gave {:?}", &b.coeffs()[..4]))?;
    ensure(a == b, || "methods disagree within 12 terms".into())?;
    within(t, Duration::from_secs(60), "both diagonals")?;
    Ok(format!("1, 616, 947175, 1812651820; 12 terms agree; {:.1?}", t.elapsed()))
}

/// [x^t] Σ p_i(x)·Dx^i s, computed term by term.
fn coefficient_of(l: &DiffOperator, s: &[Rational], t: usize) -> Rational {
    let mut acc = Rational::zero();
    for (i, p) in l.cleared_coeffs().iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() || k > t {
                continue;
            }
            let m = t - k + i;
            let falling: BigInt = (0..i).map(|j| BigInt::from(m - j)).product();
            acc += &s[m] * Rational::from_integer(c * falling);
        }
    }
    acc
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let n = 260;
    let margin = 20;
    let s = generic_diagonal(n)?;
    let l = guess_operator(&s, 9, 22).map_err(e)?.ok_or("no operator of order 9, degree 22")?;
    ensure(!l.is_zero() && l.order() <= 9, || format!("bad operator of order {}", l.order()))?;
    let deg = l.cleared_coeffs().iter().map(|p| p.degree()).max().unwrap();
    // held-out coefficients: the solve used indices below n − margin
    let c = s.coeffs();
    for idx in n - margin..n - l.order() {
        ensure(coefficient_of(&l, c, idx).is_zero(), || format!("held-out coefficient {} nonzero", idx))?;
    }
    within(t, Duration::from_secs(600), "expansion and guessing")?;
    Ok(format!("{} terms; order {}, Dx-form degree {}; held-out terms vanish; {:.1?}", n, l.order(), deg, t.elapsed()))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let f = fixtures::load("E2").map_err(e)?;
    let p = sym_square(f.operator().unwrap()).map_err(e)?;
    ensure(p.operator.order() == 27 && p.drop && p.full_dim == 28, || {
        format!("order {}, drop {}, full dimension {}", p.operator.order(), p.drop, p.full_dim)
    })?;
    within(t, Duration::from_secs(1800), "symmetric square")?;
    Ok(format!("order 27 of 28, drop; {:.1?}", t.elapsed()))
}

fn criterion_4() -> Outcome {
    let counts: Vec<usize> = (0..8).map(|n| expand_terms(n).len()).collect();
    ensure(counts == [1, 1, 2, 3, 5, 8, 13, 21], || format!("counts {:?}", counts))?;
    for n in 1..8usize {
        let order = if n % 2 == 0 { 2 } else { 1 };
        let dec = Decomposition::random(&vec![order; n], 1, 1, 40 + n as u64).map_err(e)?;
        ensure(expand_operator(&dec) == *build(&dec).top(), || format!("expansion differs from recursion at N = {}", n))?;
    }
    Ok("counts 1,1,2,3,5,8,13,21; sums equal recursion for N = 1..7".into())
}

fn criterion_5() -> Outcome {
    let rep = verify_identities(50, 2024);
    ensure(rep.passed(), || format!("failures: {:?}", rep.failures))?;
    Ok(format!("{} instances, {} exact checks", rep.instances, rep.checks))
}

fn criterion_6() -> Outcome {
    let patterns: [&[usize]; 8] = [&[1, 1], &[1, 1, 1], &[1, 1, 1, 1, 1], &[2, 2], &[2, 2, 2], &[1, 3, 1], &[2, 4], &[4, 2, 4]];
    for (i, pat) in patterns.iter().enumerate() {
        let dec = Decomposition::random(pat, 1, 1, 600 + i as u64).map_err(e)?;
        let trace = build(&dec);
        let x = trace.first_intertwiner().ok_or("no intertwiner")?;
        let (got, tr) = extract(trace.top(), x).map_err(e)?;
        ensure(got.units() == dec.units() && got.r() == dec.r(), || format!("roundtrip differs for {:?}", pat))?;
        ensure(tr.quotient_self_adjoint.iter().all(|&b| b), || format!("quotient not self-adjoint for {:?}", pat))?;
    }
    let mixed = Decomposition::new(
        vec![DiffOperator::parse("Dx").unwrap(), DiffOperator::parse("Dx^2 + x").unwrap()],
        RatFunc::one(),
    );
    ensure(matches!(mixed, Err(Error::MixedParity(_))), || "mixed parity accepted".into())?;
    Ok("8 patterns round-trip exactly; mixed parity rejected".into())
}

/// 1/lc(unit) is annihilated by op and lies in the Q-span of sol.
fn spans_inverse_lc(op: &DiffOperator, sol: &[RatFunc], unit: &DiffOperator) -> bool {
    let target = unit.lc().inv().unwrap();
    if !op.apply(&target).is_zero() || sol.iter().any(|s| !op.apply(s).is_zero()) {
        return false;
    }
    let mut all = sol.to_vec();
    all.push(target);
    let den = all.iter().fold(diffop_core::Poly::one(), |d, c| {
        let e = c.denom();
        d.mul(&e).div_rem(&d.gcd(&e)).0
    });
    let polys: Vec<_> = all.iter().map(|c| c.mul(&RatFunc::from_poly(&den)).numer()).collect();
    let deg = polys.iter().map(|p| p.degree().max(0) as usize).max().unwrap();
    let rows: Vec<Vec<Rational>> = (0..=deg).map(|k| polys.iter().map(|p| p.coeff(k)).collect()).collect();
    kernel_q(&rows, all.len()).iter().any(|v| !v.last().unwrap().is_zero())
}

fn criterion_7() -> Outcome {
    let seeds: Vec<u64> = (0..20).collect();
    let failures: Vec<String> = seeds
        .par_iter()
        .flat_map_iter(|&s| {
            let mut bad = Vec::new();
            let mut check = |name: &str, orders: &[usize], test: &dyn Fn(&Decomposition) -> Result<bool, Error>| {
                let ok = Decomposition::random(orders, 1, 0, 7000 + s).and_then(|d| test(&d));
                if !matches!(ok, Ok(true)) {
                    bad.push(format!("{} seed {}: {:?}", name, s, ok));
                }
            };
            check("sym² of {1,1,1}", &[1, 1, 1], &|d| {
                let op = sym_square(&d.operator())?.operator;
                let b = rational_solutions(&op, &RatSolBounds::default())?;
                Ok(spans_inverse_lc(&op, &b.basis, &d.units()[0]))
            });
            check("ext² of {2,2}", &[2, 2], &|d| {
                let op = ext_square(&d.operator())?.operator;
                let b = rational_solutions(&op, &RatSolBounds::default())?;
                Ok(spans_inverse_lc(&op, &b.basis, &d.units()[0]))
            });
            check("sym² drop with U1 of order 3", &[3, 1], &|d| Ok(sym_square(&d.operator())?.drop));
            check("ext² drop with U1 of order 4", &[4, 2], &|d| Ok(ext_square(&d.operator())?.drop));
            bad
        })
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("20 instances each: 1/lc(U1) among rational solutions of sym² and ext², drops for orders 3 and 4".into())
}

/// a2·(Dx² − W′/W·Dx) + a0 with random a2, a0 and W.
fn order_two(seed: u64) -> (DiffOperator, RatFunc) {
    let mut rng = random::rng(seed);
    let a2 = RatFunc::from_zpoly(&random::zpoly(&mut rng, 2));
    let a0 = RatFunc::from_zpoly(&random::zpoly(&mut rng, 1));
    let w = random::ratfunc(&mut rng, 1, 1);
    let a1 = a2.mul(&w.derivative()).div(&w).unwrap().neg();
    (DiffOperator::new(vec![a0, a1, a2]), w)
}

// Numerator degree bounds for the order-2 intertwiners (lc degrees 40 and 72).
const C8_L3_DEG: usize = 120;
const C8_L4_DEG: usize = 80;

fn criterion_8_instance(seed: u64) -> Result<(), String> {
    let (l2, w) = order_two(800 + seed);
    let s2 = sym_power(&l2, 2).map_err(e)?.operator;
    let (l3, _) = transform_solutions(&s2, &DiffOperator::d()).map_err(e)?;
    ensure(l3.order() == 3, || format!("seed {}: order {}", seed, l3.order()))?;
    let found = intertwiner_search(&l3, &AnsatzBounds::new(2, C8_L3_DEG)).map_err(e)?;
    let x = found.iter().find(|x| x.order() == 2).ok_or_else(|| format!("seed {}: no order-2 intertwiner", seed))?;
    let (dec, _) = extract(&l3, x).map_err(e)?;
    ensure(dec.orders() == [1, 1, 1], || format!("seed {}: orders {:?}", seed, dec.orders()))?;
    let sols = rational_solutions(&sym_square(&l3).map_err(e)?.operator, &RatSolBounds::default()).map_err(e)?;
    let w2 = w.mul(&w);
    ensure(sols.basis.len() == 1 && sols.basis[0].div(&w2).unwrap().is_constant(), || {
        format!("seed {}: sym² solutions {:?}, expected W² = {}", seed, sols.basis, w2)
    })?;

    let s3 = sym_power(&l2, 3).map_err(e)?.operator;
    let (l4, _) = transform_solutions(&s3, &DiffOperator::d()).map_err(e)?;
    let found = intertwiner_search(&l4, &AnsatzBounds::new(2, C8_L4_DEG)).map_err(e)?;
    let x = found.iter().find(|x| x.order() == 2).ok_or_else(|| format!("seed {}: no order-2 intertwiner of L4", seed))?;
    let (dec, _) = extract(&l4, x).map_err(e)?;
    ensure(dec.orders() == [2, 2], || format!("seed {}: even case orders {:?}", seed, dec.orders()))
}

fn criterion_8() -> Outcome {
    let failures: Vec<String> = (0..5u64).into_par_iter().filter_map(|s| criterion_8_instance(s).err()).collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("5 instances: {1,1,1} with sym² solution W², even case (M·N + 1)·r".into())
}

fn criterion_9() -> Outcome {
    let cases: Vec<(bool, usize, u64)> = [(false, 4), (false, 5), (true, 2), (true, 3)]
        .iter()
        .flat_map(|&(sym, q)| (0..5u64).map(move |s| (sym, q, s)))
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&(sym, q, seed)| {
            let run = || -> Result<(), String> {
                let s = if sym { kolchin_symplectic_system(q, 1, seed) } else { kolchin_orthogonal_system(q, 1, seed) }
                    .map_err(e)?;
                let n = s.a.rows();
                let l = cyclic_operator(&s, &first_coordinate(n)).map_err(e)?;
                ensure(l.order() == n, || format!("cyclic operator of order {}", l.order()))?;
                let (order, unit) = if sym { (n - 2, 2) } else { (n - 1, 1) };
                let deg = if n <= 4 { 10 } else { 16 };
                let found = intertwiner_search(&l, &AnsatzBounds::new(order, deg)).map_err(e)?;
                let x = found.iter().find(|x| x.order() == order).ok_or("no intertwiner within bounds")?;
                let (dec, _) = extract(&l, x).map_err(e)?;
                ensure(dec.orders().iter().all(|&o| o == unit), || format!("orders {:?}", dec.orders()))
            };
            run().err().map(|m| format!("{} n={} seed {}: {}", if sym { "Sp" } else { "SO" }, if sym { 2 * q } else { q }, seed, m))
        })
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("SO(4), SO(5): all order-1 units; Sp(4), Sp(6): all order-2 units; 5 seeds each".into())
}

fn criterion_10() -> Outcome {
    let s = hadamard_cube_series(40);
    let l = guess_operator_with_margin(&s, 3, 1, 20).map_err(e)?.ok_or("no order-3 operator")?;
    let f = fixtures::load("hyp3f2").map_err(e)?;
    let reference = f.operator().unwrap();
    ensure(l.same_up_to_function(reference), || format!("guessed {} differs from the theta-form operator", l))?;
    for order in 0..=2 {
        let found = intertwiner_search(&l, &AnsatzBounds::new(order, 20)).map_err(e)?;
        ensure(found.is_empty(), || format!("unexpected intertwiner of order {}", order))?;
    }
    let sq = sym_square(&l).map_err(e)?.operator;
    let bounds = RatSolBounds { numerator_degree: Some(20), denominator: None };
    let sols = rational_solutions(&sq, &bounds).map_err(e)?;
    ensure(sols.basis.is_empty(), || format!("unexpected rational solution {:?}", sols.basis))?;
    Ok("guessed operator matches the theta form; no intertwiner of order 0..2; sym² has no rational solution".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("diagonal coefficients", criterion_1),
        ("guessing order 9, degree 22", criterion_2),
        ("E2 symmetric square drop", criterion_3),
        ("Fibonacci expansion", criterion_4),
        ("identity suite", criterion_5),
        ("tower roundtrip", criterion_6),
        ("rational-solution laws", criterion_7),
        ("symmetric-power constructions", criterion_8),
        ("reduced-form systems", criterion_9),
        ("hypergeometric negative control", criterion_10),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({}) [{:.1?}]", id, name, detail, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {}: {} [{:.1?}]", id, name, msg, t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
