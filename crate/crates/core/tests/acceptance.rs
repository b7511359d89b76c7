//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the report is always printed; exits nonzero on any failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use hecke_gram::gram::{compute_gram, gram_stats, intertwines, palindromic_exponent, proportional};
use hecke_gram::hecke::{benson_curtis_subsets, bruteforce_p0, enumerate_group, rep_matrices, specialized_schreier_tree, GROUP_CAP};
use hecke_gram::integer_linear::{int_exponent, int_inverse, int_nullspace_rank1, padic_decompose, IntMatrix, LinearError, Membership, PRIME_SCHEDULE};
use hecke_gram::poly::IntPoly;
use hecke_gram::poly_matrix::PolyMatrix;
use hecke_gram::poly_recovery::{degree_graphs, detect_degree, detect_degree_incremental, lift_samples, EvalSample, RecoveryPolicy};
use hecke_gram::polyring_linear::{poly_inverse, poly_matmul_lifted, LiftConfig, ProductMask};
use hecke_gram::rational_recovery::{recover_rational, Residue};

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn criterion_1() -> Outcome {
    let b = load_matrix("e6_10s_btilde.mat");
    let golden = load_matrix("e6_10s_bhat.mat");
    let inv = poly_inverse(&b, &LiftConfig::default()).map_err(|e| e.to_string())?;
    ensure(inv.c.is_one(), || format!("denominator {}", inv.c.to_text()))?;
    ensure(inv.b == golden || inv.b.neg() == golden, || "inverse differs from the golden matrix".into())?;
    Ok("denominator 1, inverse equals the golden matrix".into())
}

fn criterion_2() -> Outcome {
    let bhat = load_matrix("e6_10s_bhat.mat");
    let bdual = load_matrix("e6_10s_btilde_dual.mat");
    let golden = load_matrix("e6_10s_gram.mat");
    let q = poly_matmul_lifted(&bhat, &bdual, ProductMask::Full, |_, _, _| true, &LiftConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(q == bhat.mul(&bdual), || "lifted product differs from direct product".into())?;
    let p = q.neg();
    ensure(p == golden, || "-Q differs from the golden Gram matrix".into())?;
    ensure(p.is_symmetric(), || "not symmetric".into())?;
    ensure(palindromic_exponent(p.entries()) == Some(6), || "entries not 6-palindromic".into())?;
    let s = gram_stats(&p);
    ensure(s.max_degree == 6 && s.max_abs_coeff == BigInt::from(3), || format!("deg {} absval {}", s.max_degree, s.max_abs_coeff))?;
    ensure(p.map(|f| IntPoly::constant(f.coeff(0))) == PolyMatrix::identity(10), || "P(0) is not the identity".into())?;
    let row = s.csv_row("10_s");
    ensure(row == "10_s,6,3,y,", || format!("stats row {row}"))?;
    Ok(format!("P = -Q matches, stats {row}"))
}

fn degree_samples() -> Vec<EvalSample> {
    read_data("degree_samples.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            EvalSample::new(t[0].parse::<BigInt>().unwrap(), BigRational::from_integer(t[1].parse().unwrap()))
        })
        .collect()
}

fn places(ps: &[i64]) -> Vec<BigInt> {
    ps.iter().map(|&p| BigInt::from(p)).collect()
}

fn criterion_3() -> Outcome {
    let samples = degree_samples();
    ensure(samples.len() == 13, || format!("{} samples", samples.len()))?;
    let g = degree_graphs(&samples).map_err(|e| e.to_string())?;
    ensure(g.components.len() == 34, || format!("{} distinct slopes", g.components.len()))?;
    let big: Vec<i64> = g.components.iter().filter(|(_, cs)| cs.iter().any(|c| c.members.len() >= 3)).map(|(&d, _)| d).collect();
    ensure(big.len() == 7, || format!("graphs with a component of size >= 3: {big:?}"))?;
    let complete = |d: i64| -> Vec<Vec<BigInt>> {
        g.components[&d].iter().filter(|c| c.complete && c.members.len() >= 3).map(|c| g.places_of(&c.members)).collect()
    };
    ensure(complete(7) == vec![places(&[47, 61, 79])], || format!("Gamma_7 {:?}", complete(7)))?;
    let mut c13: Vec<Vec<BigInt>> = g.components[&13].iter().map(|c| g.places_of(&c.members)).collect();
    c13.sort();
    let b1 = places(&[37, 43, 47, 53, 67, 73]);
    let b2 = places(&[31, 41, 61, 71]);
    let b3 = places(&[29, 59, 79]);
    let mut want = vec![b1.clone(), b2.clone(), b3.clone()];
    want.sort();
    ensure(c13 == want && g.components[&13].iter().all(|c| c.complete), || format!("Gamma_13 {c13:?}"))?;
    let with_complete: Vec<i64> = big.iter().copied().filter(|&d| !complete(d).is_empty()).collect();
    ensure(with_complete == vec![7, 13], || format!("complete components in {with_complete:?}"))?;

    let policy = RecoveryPolicy::default();
    let det = detect_degree(&samples, &policy).map_err(|e| e.to_string())?;
    let coeffs: Vec<BigRational> = [1, 4, 8, 11, 12, 12, 12, 12, 12, 12, 11, 8, 4, 1].iter().map(|&c| q(c)).collect();
    ensure(det.degree == 13 && det.places == b1, || format!("degree {} on {:?}", det.degree, det.places))?;
    ensure(det.poly.coeffs() == coeffs.as_slice(), || "coefficients differ".into())?;

    let on = |ps: &[BigInt]| -> Vec<EvalSample> { samples.iter().filter(|s| ps.contains(&s.place)).cloned().collect() };
    ensure(lift_samples(&on(&places(&[47, 61, 79])), 13, None).is_err(), || "Gamma_7 component lifted".into())?;
    for (ps, den) in [(&b2, 5), (&b3, 25)] {
        let f = lift_samples(&on(ps), 13, None).map_err(|e| e.to_string())?;
        let scaled: Vec<BigRational> = coeffs.iter().map(|c| c / q(den)).collect();
        ensure(f.coeffs() == scaled.as_slice(), || format!("{ps:?} does not give f/{den}"))?;
    }

    let (k, inc) = detect_degree_incremental(&samples, &policy).map_err(|e| e.to_string())?;
    ensure(k == 6 && inc.places == places(&[37, 43, 47]), || format!("incremental k = {k} on {:?}", inc.places))?;
    ensure(inc.poly.coeffs() == coeffs.as_slice(), || "incremental coefficients differ".into())?;
    Ok("34 slopes, Gamma_7 and Gamma_13 components as expected, d = 13, k = 6 on {37,43,47}".into())
}

fn criterion_4() -> Outcome {
    if !data_path("e6_10s.wgraph").exists() {
        return Ok("SKIPPED: W-graph data file for 10_s not present".into());
    }
    let g = load_wgraph("e6_10s.wgraph");
    let subsets = benson_curtis_subsets(&g);
    ensure(subsets.len() == 22, || format!("{} Benson-Curtis subsets", subsets.len()))?;
    let j = vec![0, 1, 2, 4, 5];
    ensure(subsets.iter().any(|(s, _)| *s == j), || "{1,2,3,5,6} missing".into())?;
    let t = specialized_schreier_tree(&g, &j, 1).map_err(|e| e.to_string())?;
    let want = [(0, 0), (1, 4), (2, 2), (2, 3), (2, 5), (3, 3), (3, 5), (4, 5), (6, 5), (9, 4)];
    ensure(t.tree.entries() == want, || format!("tree {:?}", t.tree.entries()))?;
    ensure(t.lengths == vec![0, 1, 2, 2, 2, 3, 3, 3, 4, 5], || format!("lengths {:?}", t.lengths))?;
    Ok("tree and lengths as expected, 22 subsets".into())
}

fn oracle_rational(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..10_000 {
        let b = rng.gen_range(2..=10_000i64);
        let a = if rng.gen_bool(0.5) {
            rng.gen_range(0..b)
        } else {
            // plant a short fraction
            let x = rng.gen_range(1..=((b as f64).sqrt() as i64).max(1));
            let y = rng.gen_range(-x..=x);
            let inv = (1..b).find(|k| (x * k) % b == 1);
            match inv {
                Some(inv) => (y * inv).rem_euclid(b),
                None => rng.gen_range(0..b),
            }
        };
        let got = recover_rational(&Residue::new(a, b)).map(|(y, x)| (i64::try_from(y).unwrap(), i64::try_from(x).unwrap()));
        let want = recover_oracle(a, b);
        ensure(got == want, || format!("{a} mod {b}: got {got:?}, oracle {want:?}"))?;
    }
    Ok(())
}

fn oracle_integer(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for case in 0..500 {
        let n = rng.gen_range(1..=20);
        let a = random_int_matrix(rng, n, n, if case % 3 == 0 { 2 } else { 9 });
        // inverse and exponent against rational Gauss, Bareiss and Smith form
        let det = det_bareiss(&a);
        match (int_inverse(&a), rational_inverse(&a)) {
            (Ok((b, c)), Some(inv)) => {
                ensure(!det.is_zero(), || format!("case {case}: inverse of a singular matrix"))?;
                for i in 0..n {
                    for j in 0..n {
                        ensure(BigRational::new(b.get(i, j).clone(), c.clone()) == inv[i][j], || format!("case {case}: inverse entry ({i},{j})"))?;
                    }
                }
                let smith = smith_invariants(&a);
                ensure(smith[n - 1] == c, || format!("case {case}: exponent {c}, Smith {}", smith[n - 1]))?;
                ensure(int_exponent(&a).ok() == Some(c.clone()), || format!("case {case}: int_exponent"))?;
                let prod: BigInt = smith.iter().product();
                ensure(prod == det.abs(), || format!("case {case}: Smith product vs Bareiss"))?;
            }
            (Err(LinearError::Singular), None) => ensure(det.is_zero(), || format!("case {case}: Bareiss nonzero"))?,
            (got, want) => return Err(format!("case {case}: int_inverse {:?} vs oracle {}", got.map(|_| ()), want.is_some())),
        }

        // rank-one row kernel
        let m = rng.gen_range(2..=n.max(2));
        let cols = rng.gen_range(m - 1..=20);
        let top = random_int_matrix(rng, m - 1, cols, 9);
        let coef: Vec<i64> = (0..m - 1).map(|_| rng.gen_range(-3..=3)).collect();
        let mut rows: Vec<Vec<BigInt>> = top.row_vecs();
        let last: Vec<BigInt> = (0..cols).map(|j| (0..m - 1).map(|i| top.get(i, j) * coef[i]).sum()).collect();
        let pos = rng.gen_range(0..m);
        rows.insert(pos, last);
        let k = IntMatrix::from_rows(&rows);
        let ker = left_kernel(&k);
        match (int_nullspace_rank1(&k), ker.len()) {
            (Ok(v), 1) => ensure(v == primitive_integer(&ker[0]), || format!("case {case}: kernel vector"))?,
            (Err(LinearError::KernelTooLarge), d) if d > 1 => {}
            (got, d) => return Err(format!("case {case}: nullspace {got:?} vs oracle dimension {d}")),
        }

        // membership in the pure closure
        let r = rng.gen_range(1..=n);
        let c = rng.gen_range(r..=20);
        let base = random_int_matrix(rng, r, c, 9);
        let v: Vec<BigInt> = if rng.gen_bool(0.7) {
            let w: Vec<i64> = (0..r).map(|_| rng.gen_range(-5..=5)).collect();
            let s: Vec<BigInt> = (0..c).map(|j| (0..r).map(|i| base.get(i, j) * w[i]).sum()).collect();
            let g = s.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            if g.is_zero() { s } else { s.iter().map(|x| x / &g).collect() }
        } else {
            (0..c).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect()
        };
        let want = solve_left(&base, &v);
        let mut got = None;
        for &p in &PRIME_SCHEDULE {
            match padic_decompose(&base, &v, p) {
                Err(LinearError::BadPrime(_)) => continue,
                other => {
                    got = Some(other);
                    break;
                }
            }
        }
        let independent = left_kernel(&base).is_empty();
        match (got, want) {
            (None, _) => ensure(!independent, || format!("case {case}: every prime bad for independent rows"))?,
            (Some(Ok(Membership::InClosure(d))), Some(x)) => {
                let ok = d.numerators.iter().zip(&x).all(|(a, x)| BigRational::new(a.clone(), d.denominator.clone()) == *x);
                ensure(ok, || format!("case {case}: decomposition differs"))?;
            }
            (Some(Ok(Membership::NotInClosure)), None) => {}
            (Some(got), want) => {
                if independent {
                    return Err(format!("case {case}: decompose {:?} vs oracle {}", got.map(|_| ()), want.is_some()));
                }
            }
        }
    }
    Ok(())
}

fn oracle_products(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let cfg = LiftConfig::default();
    for case in 0..200 {
        let (r, k, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = random_poly_matrix(rng, r, k, 6, 9);
        let b = random_poly_matrix(rng, k, c, 6, 9);
        let got = poly_matmul_lifted(&a, &b, ProductMask::Full, |_, _, _| true, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        ensure(got == a.mul(&b), || format!("case {case}: lifted product differs"))?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    oracle_rational(&mut rng).map_err(|e| format!("rational recovery: {e}"))?;
    oracle_integer(&mut rng).map_err(|e| format!("integer linear algebra: {e}"))?;
    oracle_products(&mut rng).map_err(|e| format!("lifted products: {e}"))?;
    Ok("10^4 recoveries, 500 integer matrices, 200 lifted products agree".into())
}

fn criterion_6() -> Outcome {
    let cfg = LiftConfig::default();
    let mut report = Vec::new();
    for (w, c) in [("a1", "a1"), ("a2", "a2"), ("a3", "a3"), ("b2", "b2"), ("e6", "e6")] {
        let g = load_wgraph(&format!("{w}_reflection.wgraph"));
        let cox = load_coxeter(&format!("{c}.coxeter"));
        let run = compute_gram(&g, &cox, None, &cfg).map_err(|e| format!("{w}: {e}"))?;
        let p = &run.p;
        let gens = rep_matrices(&g).map_err(|e| e.to_string())?;
        ensure(intertwines(&gens, p).is_ok(), || format!("{w}: intertwining"))?;
        ensure(p.is_symmetric(), || format!("{w}: symmetric"))?;
        ensure(p.content().is_one(), || format!("{w}: primitive"))?;
        let m = palindromic_exponent(p.entries());
        ensure(m.is_some_and(|m| m % 2 == 0), || format!("{w}: palindromic exponent {m:?}"))?;
        match enumerate_group(&cox, 24) {
            Ok(words) => {
                let p0 = bruteforce_p0(&g, &cox, GROUP_CAP).map_err(|e| e.to_string())?;
                ensure(proportional(p, &p0), || format!("{w}: not proportional to the group sum"))?;
                report.push(format!("{w}(|W|={})", words.len()));
            }
            Err(_) => report.push(w.to_string()),
        }
    }
    Ok(format!("all invariants hold: {}", report.join(" ")))
}

fn criterion_7() -> Outcome {
    let g = load_wgraph("e6_reflection.wgraph");
    let cox = load_coxeter("e6.coxeter");
    let run = compute_gram(&g, &cox, None, &LiftConfig::default()).map_err(|e| e.to_string())?;
    let row = gram_stats(&run.p).csv_row("6_p");
    ensure(row == "6_p,2,1,y,", || format!("stats row {row}"))?;
    Ok(format!("stats {row}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("inverse of the golden basis", criterion_1, Duration::from_secs(2)),
        ("lifted product and Gram matrix of 10_s", criterion_2, Duration::from_secs(5)),
        ("degree detection example", criterion_3, Duration::from_secs(1)),
        ("Schreier tree of 10_s", criterion_4, Duration::from_secs(5)),
        ("oracle equivalence suite", criterion_5, Duration::from_secs(120)),
        ("end-to-end invariants on fixtures", criterion_6, Duration::from_secs(60)),
        ("E6 reflection statistics", criterion_7, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let (ok, detail) = match out {
            Ok(d) if dt <= budget => (true, d),
            Ok(d) => (false, format!("{d}; took {dt:.2?}, budget {budget:?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("criterion {}: {} [{name}] {detail} ({dt:.2?})", k + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
