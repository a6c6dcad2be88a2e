//! Acceptance checks, one line per criterion.

use lmono::characters::RealPrimitiveCharacter;
use lmono::lfunction::LFunction;
use lmono::logderiv::{
    f_deriv_independent, f_deriv_series, f_deriv_zerosum, f_prime_formula, NormalizedContext, ZeroSource,
};
use lmono::monotonicity::{
    compare_fingerprints, compute_constants, construct_offline_pair, dist_sqrt2_multiple, fingerprint, l_of_s,
    scan_sign_changes, siegel_stability,
};
use lmono::special::{hurwitz_zeta_any, log_gamma};
use lmono::zeros::{count_check, lowest_zero, scan_zeros, SyntheticZeroSet, ZeroList};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

const DUAL_TOL: f64 = 1e-6;
const DUAL_RUNTIME: Duration = Duration::from_secs(60);
const FORMULA_TOL: f64 = 1e-6;
const LOWEST_ZERO_TOL: f64 = 1e-6;
const C_BRUTE_TOL: f64 = 1e-2;
const SCAN_RUNTIME: Duration = Duration::from_secs(300);
const IDENTITY_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;

fn lfun(d: i64) -> LFunction {
    LFunction::new(RealPrimitiveCharacter::new(d).unwrap()).unwrap()
}

fn verified(d: i64, t: f64, step: f64) -> (LFunction, ZeroList) {
    let l = lfun(d);
    let mut zl = scan_zeros(&l, t, step).unwrap();
    let report = count_check(&l, &mut zl).unwrap();
    assert!(report.pass, "count check failed for d={d}: {report:?}");
    (l, zl)
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dual_representation() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_at = (0, 0.0, 0);
    for d in [-3, -4] {
        let (l, zl) = verified(d, 100.0, 0.02);
        let src = ZeroSource::from_list(&l, &zl).unwrap();
        for s in [1.5, 2.0, 3.0, 5.0] {
            for k in 1..=8u32 {
                let zero_side = if k == 1 {
                    f_prime_formula(&l, s, &zl).map_err(|e| e.to_string())?
                } else {
                    f_deriv_zerosum(&src, s, k).map_err(|e| e.to_string())?
                };
                let free_side = f_deriv_independent(&l, s, k, 1e-7).map_err(|e| e.to_string())?;
                let diff = (zero_side.value - free_side.value).abs();
                if diff > worst {
                    worst = diff;
                    worst_at = (d, s, k);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= DUAL_TOL && elapsed < DUAL_RUNTIME,
        format!("max |Dirichlet-side − zero-sum| = {worst:.2e} at (d,s,k)={worst_at:?}; {elapsed:.1?}"),
    )
}

fn explicit_formula() -> Outcome {
    let (l, zl) = verified(-4, 100.0, 0.02);
    let f = f_prime_formula(&l, 2.0, &zl).map_err(|e| e.to_string())?;
    let s = f_deriv_series(l.character(), 2.0, 1, 5e-7).map_err(|e| e.to_string())?;
    let diff = (f.value - s.value).abs();
    check(
        diff <= FORMULA_TOL,
        format!("F'(2) formula {:.12} vs series {:.12} (N={}), diff {diff:.2e}", f.value, s.value, s.terms),
    )
}

fn zero_scanner() -> Outcome {
    let l = lfun(-4);
    let mut coarse = scan_zeros(&l, 50.0, 1e-2).map_err(|e| e.to_string())?;
    let fine = scan_zeros(&l, 50.0, 1e-3).map_err(|e| e.to_string())?;
    let report = count_check(&l, &mut coarse).map_err(|e| e.to_string())?;
    let g_coarse = lowest_zero(&coarse).map_err(|e| e.to_string())?;
    let g_fine = lowest_zero(&fine).map_err(|e| e.to_string())?;
    check(
        report.pass && report.found == coarse.len() && (g_coarse - g_fine).abs() <= LOWEST_ZERO_TOL,
        format!(
            "{} zeros, argument principle {:.4}; lowest {g_coarse:.9} vs {g_fine:.9}",
            report.found, report.expected
        ),
    )
}

fn constants() -> Outcome {
    let (l, zl) = verified(-4, 50.0, 0.02);
    let c = compute_constants(&ZeroSource::from_list(&l, &zl).unwrap()).map_err(|e| e.to_string())?;
    check(
        (c.c_brute - c.c_chi).abs() <= C_BRUTE_TOL && c.big_c_chi == c.c_chi.max(c.b_chi),
        format!(
            "c={:.4} brute={:.3} b={:.4} C={:.4} D={:.4}",
            c.c_chi, c.c_brute, c.b_chi, c.big_c_chi, c.big_d_chi
        ),
    )
}

fn density() -> Outcome {
    let start = Instant::now();
    let (l, zl) = verified(-4, 100.0, 0.02);
    let src = ZeroSource::from_list(&l, &zl).unwrap();
    let (a, b) = (40.0, 40.2);
    let ta = NormalizedContext::new(&src, a).unwrap().theta_s();
    let tb = NormalizedContext::new(&src, b).unwrap().theta_s();
    let onset = (2.0 * PI / (ta - tb)).ceil() as u32;
    let report = scan_sign_changes(&src, a, b, 3 * onset).map_err(|e| e.to_string())?;
    let mut certified = 0;
    for c in &report.crossings {
        let lo = NormalizedContext::new(&src, c.s_star - c.h).unwrap().eval(c.k).unwrap();
        let hi = NormalizedContext::new(&src, c.s_star + c.h).unwrap().eval(c.k).unwrap();
        if lo.g.abs() > lo.f_bound && hi.g.abs() > hi.f_bound && lo.g * hi.g < 0.0 && c.s_star > a && c.s_star < b {
            certified += 1;
        }
    }
    let mut ks: Vec<u32> = report.crossings.iter().map(|c| c.k).collect();
    ks.dedup();
    let elapsed = start.elapsed();
    check(
        certified == report.crossings.len() && ks.len() >= 10 && elapsed < SCAN_RUNTIME,
        format!(
            "K*={onset}, k_max={}: {} certified crossings over {} distinct k; {elapsed:.1?}",
            3 * onset,
            certified,
            ks.len()
        ),
    )
}

fn injectivity() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, s1, s2) in [(-4, 200.0, 210.0), (-3, 260.0, 270.0)] {
        let (l, zl) = verified(d, 100.0, 0.02);
        let src = ZeroSource::from_list(&l, &zl).unwrap();
        let big_c = compute_constants(&src).unwrap().big_c_chi;
        let r = compare_fingerprints(&src, s1, s2, 100_000, 0.0).map_err(|e| e.to_string())?;
        ok &= r.first_separating_k.is_some() && s1 > big_c;
        parts.push(format!("d={d} C={big_c:.1} ({s1},{s2}) → k={:?}", r.first_separating_k));
    }
    check(ok, parts.join("; "))
}

fn siegel() -> Outcome {
    let (_, zl) = verified(-4, 100.0, 0.02);
    let set = SyntheticZeroSet::critical(&zl.ordinates, Some(0.99)).unwrap();
    let r = siegel_stability(&ZeroSource::synthetic(&set), &[2.0, 3.0, 5.0], 1, 500).map_err(|e| e.to_string())?;
    check(
        r.stable && r.m <= r.analytic_bound,
        format!("M={} analytic bound={} stable={}", r.m, r.analytic_bound, r.stable),
    )
}

fn offline_pair() -> Outcome {
    let p = construct_offline_pair(Complex64::new(0.5, 6.0), Complex64::new(0.75, 9.0), 1e-3)
        .map_err(|e| e.to_string())?;
    let four_b = 4 * p.b_int.unsigned_abs();
    let dioph = (p.n + 1..=p.n + 1000).all(|k| dist_sqrt2_multiple(four_b * k as u64) > p.c_ab / k as f64);
    check(
        p.s_prime != p.s_dblprime && p.window.first_separating_k.is_none() && dioph && p.diophantine_ok,
        format!(
            "a={} b={} φ={:.6} s'={:.6} s''={:.6} N={}: window ({}, {}] {} agreeing definite, no separation",
            p.a,
            p.b_int,
            p.phi,
            p.s_prime,
            p.s_dblprime,
            p.n,
            p.n,
            p.n + 1000,
            p.window.agreeing_definite
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    let chars: Vec<_> = [-3, -4, -7, -8, 5, 8, 12, 13]
        .iter()
        .map(|&d| RealPrimitiveCharacter::new(d).unwrap())
        .collect();
    for _ in 0..1_000_000 {
        let chi = &chars[rng.gen_range(0..chars.len())];
        let (m, n) = (rng.gen_range(1..1_000_000u64), rng.gen_range(1..1_000_000u64));
        if chi.value(m * n) != chi.value(m) * chi.value(n) || chi.value(m + chi.modulus()) != chi.value(m) {
            return Err(format!("character identity fails for d={} m={m} n={n}", chi.discriminant()));
        }
    }
    let mut worst_identity: f64 = 0.0;
    for _ in 0..300 {
        let s = Complex64::new(rng.gen_range(0.05..4.0), rng.gen_range(-40.0..40.0));
        let a: f64 = rng.gen_range(0.05..3.0);
        let eps = 1e-11 * a.powf(-s.re).max(1.0) * (s.im.abs() / 10.0).max(1.0);
        let lhs = hurwitz_zeta_any(s, a, eps).unwrap().value - hurwitz_zeta_any(s, a + 1.0, eps).unwrap().value;
        let rhs = (-s * a.ln()).exp();
        worst_identity = worst_identity.max((lhs - rhs).norm() / rhs.norm().max(1.0));

        let z = Complex64::new(rng.gen_range(0.05..30.0), rng.gen_range(-50.0..50.0));
        let lg = |w: Complex64| log_gamma(w).unwrap();
        let d = lg(z) + lg(z + 0.5) - ((1.0 - 2.0 * z) * LN_2 + 0.5 * PI.ln() + lg(2.0 * z));
        let im = d.im - 2.0 * PI * (d.im / (2.0 * PI)).round();
        worst_identity = worst_identity.max(Complex64::new(d.re, im).norm() / (1.0 + lg(z).norm()));
    }
    let (l, z50) = verified(-4, 50.0, 0.02);
    let (_, z100) = verified(-4, 100.0, 0.02);
    let low = ZeroSource::from_list(&l, &z50).unwrap();
    let high = ZeroSource::from_list(&l, &z100).unwrap();
    for _ in 0..1000 {
        let (s, t) = (rng.gen_range(0.51..80.0), rng.gen_range(0.51..80.0));
        if (l_of_s(&high, s).unwrap() - l_of_s(&high, t).unwrap()).abs() > (s - t).abs() + 1e-12 {
            return Err(format!("l(s) not 1-Lipschitz at ({s}, {t})"));
        }
    }
    let mut flips = 0;
    for s in [40.0, 120.0, 200.0] {
        let a = fingerprint(&low, s, 2, 5000, 0.0).unwrap();
        let b = fingerprint(&high, s, 2, 5000, 0.0).unwrap();
        flips += a
            .entries
            .iter()
            .zip(&b.entries)
            .filter(|(x, y)| x.trit.is_definite() && y.trit.is_definite() && x.trit != y.trit)
            .count();
    }
    check(
        worst_identity <= IDENTITY_TOL && flips == 0,
        format!("10⁶ character triples; identity residual {worst_identity:.1e}; 1000 Lipschitz pairs; {flips} definite flips under T doubling"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 dual-representation agreement", dual_representation),
        ("2 explicit formula for F'", explicit_formula),
        ("3 zero scanner", zero_scanner),
        ("4 constants", constants),
        ("5 density of sign changes", density),
        ("6 fingerprint separation", injectivity),
        ("7 exceptional-zero stability", siegel),
        ("8 off-line pair construction", offline_pair),
        ("9 property suites", property_suites),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let outcome = run();
        match &outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
