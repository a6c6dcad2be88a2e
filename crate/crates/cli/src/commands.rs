use crate::args::{
    Cli, Command, CompareArgs, DerivArgs, FingerprintArgs, MethodArg, OfflineArgs, ScanArgs, SiegelArgs, SynthCommand,
    ZeroArgs, ZerosArgs,
};
use crate::cache::{load_or_scan, Loaded};
use crate::report::Report;
use crate::{DataFailure, Usage, EXIT_CERTIFICATE, EXIT_DATA};
use anyhow::{Context, Result};
use lmono::lfunction::LFunction;
use lmono::logderiv::{
    f_deriv_independent, f_deriv_zerosum, f_prime_formula, DerivativeValue, Method, NormalizedContext, ZeroSource,
    SERIES_FLOOR,
};
use lmono::monotonicity::{
    compare_fingerprints, compute_constants, construct_offline_pair, fingerprint, scan_sign_changes, siegel_stability,
    ZeroConstants, MAX_K,
};
use lmono::zeros::{lowest_zero, SyntheticZeroSet, ZeroList};
use lmono::{Error, RealPrimitiveCharacter};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::fmt::Write as _;

const MAX_HEIGHT: f64 = 10_000.0;

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Zeros(a) => zeros(cli, a),
        Command::Deriv(a) => deriv(cli, a),
        Command::Scan(a) => scan(cli, a),
        Command::Fingerprint(a) => fingerprint_cmd(cli, a),
        Command::Compare(a) => compare(cli, a),
        Command::Constants(a) => constants(cli, a),
        Command::Synth(SynthCommand::Siegel(a)) => siegel(cli, a),
        Command::Synth(SynthCommand::Offline(a)) => offline(cli, a),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn l_function(d: i64) -> Result<LFunction> {
    let chi = RealPrimitiveCharacter::new(d)?;
    Ok(LFunction::new(chi)?)
}

fn check_height(height: f64) -> Result<()> {
    if !(height > 0.0 && height <= MAX_HEIGHT) {
        return Err(usage(format!("-T must lie in (0, {MAX_HEIGHT}], got {height}")));
    }
    Ok(())
}

fn check_point(name: &str, s: f64) -> Result<()> {
    if !s.is_finite() {
        return Err(usage(format!("{name} must be finite, got {s}")));
    }
    Ok(())
}

/// A zero list that passed the count, either from the cache or freshly scanned.
fn verified(cli: &Cli, lf: &LFunction, height: f64) -> Result<ZeroList> {
    let loaded = load_or_scan(lf, height, &cli.cache)?;
    if !loaded.count.pass {
        return Err(DataFailure(format!(
            "count check failed: found {} zeros, argument principle gives {:.3}",
            loaded.count.found, loaded.count.expected
        ))
        .into());
    }
    Ok(loaded.zeros)
}

fn zero_source(cli: &Cli, z: &ZeroArgs) -> Result<(LFunction, ZeroList, ZeroSource, ZeroConstants)> {
    check_height(z.height)?;
    let lf = l_function(z.d)?;
    let zl = verified(cli, &lf, z.height)?;
    let source = ZeroSource::from_list(&lf, &zl)?;
    let constants = compute_constants(&source).context("computing zero-derived constants")?;
    Ok((lf, zl, source, constants))
}

fn emit<C: Serialize>(cli: &Cli, mut report: Report<'_, C>, csv: impl FnOnce() -> String) {
    report.cache_dir = cli.cache.display().to_string();
    if cli.csv {
        print!("{}", csv());
    } else {
        println!("{}", report.to_json());
    }
}

fn zeros(cli: &Cli, a: &ZerosArgs) -> Result<u8> {
    check_height(a.height)?;
    let lf = l_function(a.d)?;
    let Loaded { zeros: zl, count, path, .. } = load_or_scan(&lf, a.height, &cli.cache)?;
    let gamma0 = lowest_zero(&zl).ok();
    let result = json!({
        "count": zl.len(),
        "gamma0": gamma0,
        "per_zero_error": zl.per_zero_error,
        "source": zl.source.to_string(),
        "count_check": count,
        "cache_file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
    });
    emit(cli, Report::new("zeros", a, None, result), || {
        let mut out = String::from("d,index,ordinate,error\n");
        for (i, t) in zl.ordinates.iter().enumerate() {
            let _ = writeln!(out, "{},{},{:.15e},{:.3e}", zl.discriminant, i + 1, t, zl.per_zero_error);
        }
        out
    });
    if !count.pass {
        eprintln!(
            "count check failed: found {} zeros, argument principle gives {:.3}; cache not written",
            count.found, count.expected
        );
        return Ok(EXIT_DATA);
    }
    Ok(0)
}

/// Compares two evaluations of the same quantity: absolute when both are in
/// range, relative through the log-magnitude form otherwise.
fn residual(a: &DerivativeValue, b: &DerivativeValue) -> (f64, f64, &'static str) {
    if a.is_raw() && b.is_raw() {
        ((a.value - b.value).abs(), a.error_bound + b.error_bound, "absolute")
    } else if a.sign != b.sign {
        (f64::INFINITY, a.rel_error + b.rel_error, "relative")
    } else {
        ((a.ln_abs - b.ln_abs).exp_m1().abs(), a.rel_error + b.rel_error, "relative")
    }
}

fn deriv(cli: &Cli, a: &DerivArgs) -> Result<u8> {
    check_point("-s", a.s)?;
    let z = &a.zeros;
    if a.method != MethodArg::Zerosum && a.s < SERIES_FLOOR {
        return Err(usage(format!("the Dirichlet series needs s >= {SERIES_FLOOR}, got {}", a.s)));
    }
    if a.method != MethodArg::Series && !(a.s > 1.0) {
        return Err(usage(format!("the zero sum needs s > 1, got {}", a.s)));
    }
    if a.method == MethodArg::Zerosum && a.k == 0 {
        return Err(usage("the zero sum starts at k = 1; use --method series for log L"));
    }
    if !(a.tolerance > 0.0) {
        return Err(usage(format!("--tolerance must be positive, got {}", a.tolerance)));
    }
    let lf = l_function(z.d)?;

    let series = match a.method {
        MethodArg::Zerosum => None,
        _ => Some(f_deriv_independent(&lf, a.s, a.k, a.tolerance)?),
    };
    let mut constants = None;
    let other = match a.method {
        MethodArg::Series => None,
        _ if a.k == 0 => {
            // log L itself has no zero-sum form; compare with the direct value
            let p = lf.evaluate(Complex64::new(a.s, 0.0))?;
            let v = p.value.re.abs();
            let err = p.error_bound / (v - p.error_bound);
            Some(DerivativeValue::raw(0, a.s, v.ln(), err, Method::Formula, lf.character().modulus()))
        }
        _ => {
            check_height(z.height)?;
            let zl = verified(cli, &lf, z.height)?;
            let source = ZeroSource::from_list(&lf, &zl)?;
            constants = Some(compute_constants(&source)?);
            Some(if a.k == 1 { f_prime_formula(&lf, a.s, &zl)? } else { f_deriv_zerosum(&source, a.s, a.k)? })
        }
    };

    let mut certified = true;
    let mut result = json!({ "series": series, "zero_side": other });
    if let (Some(x), Some(y)) = (&series, &other) {
        let (r, bound, kind) = residual(x, y);
        certified = r <= bound;
        result["residual"] = json!(r);
        result["combined_bound"] = json!(bound);
        result["residual_kind"] = json!(kind);
        result["agree"] = json!(certified);
    }
    emit(cli, Report::new("deriv", a, constants, result), || {
        let mut out = String::from("method,k,s,value,error_bound,ln_abs,sign\n");
        for v in series.iter().chain(other.iter()) {
            let _ = writeln!(
                out,
                "{:?},{},{},{:.17e},{:.3e},{:.17e},{}",
                v.method, v.k, v.s, v.value, v.error_bound, v.ln_abs, v.sign
            );
        }
        out
    });
    if !certified {
        eprintln!("series and zero-side values disagree beyond their combined bounds");
        return Ok(EXIT_CERTIFICATE);
    }
    Ok(0)
}

fn scan(cli: &Cli, a: &ScanArgs) -> Result<u8> {
    let &[lo, hi] = a.s.as_slice() else {
        return Err(usage(format!("scan takes -s a,b; got {} values", a.s.len())));
    };
    check_point("-s", lo)?;
    check_point("-s", hi)?;
    if !(lo < hi && lo > 1.0) {
        return Err(usage(format!("scan needs 1 < a < b, got [{lo}, {hi}]")));
    }
    if a.kmax.is_some_and(|k| k == 0 || k > MAX_K) {
        return Err(usage(format!("--kmax must lie in 1..={MAX_K}")));
    }
    let (_, _, source, constants) = zero_source(cli, &a.zeros)?;
    let k_max = match a.kmax {
        Some(k) => k,
        None => {
            let ta = NormalizedContext::new(&source, lo)?.theta_s();
            let tb = NormalizedContext::new(&source, hi)?.theta_s();
            let onset = (2.0 * PI / (ta - tb).abs()).ceil();
            (3.0 * onset).min(MAX_K as f64) as u32
        }
    };
    let result = match scan_sign_changes(&source, lo, hi, k_max) {
        Ok(r) => serde_json::to_value(&r)?,
        Err(Error::NoFindings { k_max, onset }) => json!({
            "a": lo, "b": hi, "k_max": k_max, "onset": onset, "crossings": [], "uncertified": 0,
            "note": "no certified crossing below k_max",
        }),
        Err(e) => return Err(e.into()),
    };
    emit(cli, Report::new("scan", a, Some(constants), result.clone()), || {
        let mut out = String::from("k,s_star,h,g_below,g_above,f_bound\n");
        for c in result["crossings"].as_array().into_iter().flatten() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c["k"], c["s_star"], c["h"], c["g_below"], c["g_above"], c["f_bound"]
            );
        }
        out
    });
    Ok(0)
}

fn fingerprint_cmd(cli: &Cli, a: &FingerprintArgs) -> Result<u8> {
    check_point("-s", a.s)?;
    if a.k.max > MAX_K || a.k.min == 0 {
        return Err(usage(format!("-k must lie in 1..={MAX_K}")));
    }
    if !(a.tolerance >= 0.0) {
        return Err(usage("--tolerance must be non-negative"));
    }
    let (_, _, source, constants) = zero_source(cli, &a.zeros)?;
    let fp = fingerprint(&source, a.s, a.k.min, a.k.max, a.tolerance)?;
    let mut result = serde_json::to_value(&fp)?;
    result["definite_fraction"] = json!(fp.definite_fraction());
    emit(cli, Report::new("fingerprint", a, Some(constants), result), || fp.records());
    Ok(0)
}

fn compare(cli: &Cli, a: &CompareArgs) -> Result<u8> {
    check_point("--s1", a.s1)?;
    check_point("--s2", a.s2)?;
    if a.kmax == 0 || a.kmax > MAX_K {
        return Err(usage(format!("--kmax must lie in 1..={MAX_K}")));
    }
    let (_, _, source, constants) = zero_source(cli, &a.zeros)?;
    let cmp = compare_fingerprints(&source, a.s1, a.s2, a.kmax, a.tolerance)?;
    let first = cmp.first_separating_k;
    emit(cli, Report::new("compare", a, Some(constants), serde_json::to_value(&cmp)?), || {
        format!(
            "s1,s2,first_separating_k,examined,agreeing_definite,uncertain\n{},{},{},{},{},{}\n",
            cmp.s1,
            cmp.s2,
            first.map(|k| k.to_string()).unwrap_or_default(),
            cmp.examined,
            cmp.agreeing_definite,
            cmp.uncertain
        )
    });
    Ok(0)
}

fn constants(cli: &Cli, a: &ZeroArgs) -> Result<u8> {
    let (_, zl, _, c) = zero_source(cli, a)?;
    let result = json!({ "zeros_used": zl.len(), "gamma0": lowest_zero(&zl)? });
    emit(cli, Report::new("constants", a, Some(c), result), || {
        format!(
            "gamma0_tilde,c_chi,c_brute,b_chi,C_chi,D_chi\n{},{},{},{},{},{}\n",
            c.gamma0_tilde, c.c_chi, c.c_brute, c.b_chi, c.big_c_chi, c.big_d_chi
        )
    });
    Ok(0)
}

fn siegel(cli: &Cli, a: &SiegelArgs) -> Result<u8> {
    if !(a.beta > 0.5 && a.beta < 1.0) {
        return Err(usage(format!("--beta must lie in (1/2, 1), got {}", a.beta)));
    }
    for &s in &a.s {
        check_point("-s", s)?;
        if !(s > 1.0) {
            return Err(usage(format!("-s values must exceed 1, got {s}")));
        }
    }
    if a.k_start == 0 || a.k_span == 0 {
        return Err(usage("--k-start and --k-span must be positive"));
    }
    check_height(a.height)?;
    let lf = l_function(a.base)?;
    let zl = verified(cli, &lf, a.height)?;
    let set = SyntheticZeroSet::critical(&zl.ordinates, Some(a.beta))?;
    let report = siegel_stability(&ZeroSource::synthetic(&set), &a.s, a.k_start, a.k_span)?;
    let stable = report.stable;
    let result = serde_json::to_value(&report)?;
    emit(cli, Report::new("synth siegel", a, None, result), || {
        format!(
            "beta,m,analytic_bound,stable\n{},{},{},{}\n",
            report.beta, report.m, report.analytic_bound, report.stable
        )
    });
    Ok(if stable { 0 } else { EXIT_CERTIFICATE })
}

fn offline(cli: &Cli, a: &OfflineArgs) -> Result<u8> {
    let rho0 = Complex64::new(a.rho0.0, a.rho0.1);
    let rho1 = Complex64::new(a.rho1.0, a.rho1.1);
    if !(a.delta > 0.0 && a.delta < 1.0) {
        return Err(usage(format!("--delta must lie in (0, 1), got {}", a.delta)));
    }
    let pair = construct_offline_pair(rho0, rho1, a.delta)?;
    let ok = pair.certificate;
    let result = serde_json::to_value(&pair)?;
    emit(cli, Report::new("synth offline", a, None, result), || {
        format!(
            "a,b,n,s_prime,s_dblprime,diophantine_ok,all_definite,certificate\n{},{},{},{},{},{},{},{}\n",
            pair.a, pair.b_int, pair.n, pair.s_prime, pair.s_dblprime, pair.diophantine_ok, pair.all_definite, ok
        )
    });
    Ok(if ok { 0 } else { EXIT_CERTIFICATE })
}
