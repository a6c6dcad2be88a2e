use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

/// Catalan's constant, which equals L(2, χ_{-4}).
const CATALAN: f64 = 0.915_965_594_177_219_015;
/// Lowest ordinate of L(s, χ_{-4}) as tabulated in the LMFDB.
const GAMMA0_MINUS4: f64 = 6.020_948_904_697_597;

fn lmono(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmono"))
        .args(args)
        .arg("--cache")
        .arg(cache)
        .env_remove("LMONO_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn without_timestamp(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn zeros_writes_cache_and_reuses_it() {
    let dir = tempfile::tempdir().unwrap();
    let first = lmono(dir.path(), &["zeros", "-d", "-4", "-T", "50"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(dir.path().join("d-4_T50.csv").exists());
    let report = json(&first);
    assert!((report["result"]["gamma0"].as_f64().unwrap() - GAMMA0_MINUS4).abs() < 1e-6);
    assert_eq!(report["result"]["count_check"]["pass"], Value::Bool(true));
    assert_eq!(report["config"]["d"], -4);

    let second = lmono(dir.path(), &["zeros", "-d", "-4", "-T", "50"]);
    assert_eq!(second.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
    assert_eq!(without_timestamp(&first), without_timestamp(&second));
}

#[test]
fn damaged_cache_is_rescanned() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lmono(dir.path(), &["zeros", "-d", "-3", "-T", "30"]).status.code(), Some(0));
    let path = dir.path().join("d-3_T30.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();

    let out = lmono(dir.path(), &["zeros", "-d", "-3", "-T", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rescanning"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn invalid_discriminant_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = lmono(&cache, &["zeros", "-d", "7", "-T", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!cache.exists());
}

#[test]
fn log_l_at_two_matches_catalan() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmono(dir.path(), &["deriv", "-d", "-4", "-s", "2", "-k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let v = r["result"]["series"]["value"].as_f64().unwrap();
    assert!((v - CATALAN.ln()).abs() < 1e-9, "{v}");
}

#[test]
fn both_methods_agree_at_k3() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmono(dir.path(), &["deriv", "-d", "-4", "-s", "2", "-k", "3", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert!(r["result"]["residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(r["result"]["agree"], Value::Bool(true));
    assert!(r["constants"]["C_chi"].as_f64().is_some());
}

#[test]
fn deriv_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["deriv", "-d", "-4", "-s", "1.0", "-k", "1"][..],
        &["deriv", "-d", "-4", "-s", "2", "-k", "0", "--method", "zerosum"],
        &["deriv", "-d", "-4", "-s", "2", "-k", "1", "--tolerance", "0"],
        &["deriv", "-d", "-4", "-s", "2", "-k", "1", "--method", "fast"],
        &["deriv", "-d", "-4", "-s", "2", "-k", "1", "--json", "--csv"],
    ] {
        assert_eq!(lmono(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fingerprint", "-d", "-4", "-T", "50", "-s", "60", "-k", "2..200"];
    let a = lmono(dir.path(), &args);
    let b = lmono(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    let r = json(&a);
    assert_eq!(r["result"]["entries"].as_array().unwrap().len(), 199);
    assert_eq!(r["command"], "fingerprint");
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lmono"))
        .args(["zeros", "-d", "5", "-T", "20", "--csv"])
        .env("LMONO_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("d5_T20.csv").exists());
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.starts_with("d,index,ordinate,error\n"));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("5,")));
}

#[test]
fn constants_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmono(dir.path(), &["constants", "-d", "-4"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["constants"];
    let (small, brute) = (c["c_chi"].as_f64().unwrap(), c["c_brute"].as_f64().unwrap());
    assert!((small - brute).abs() < 1e-2);
    let big = c["C_chi"].as_f64().unwrap();
    assert_eq!(big, small.max(c["b_chi"].as_f64().unwrap()));
}

#[test]
fn synthetic_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let out = lmono(dir.path(), &["synth", "siegel", "--beta", "0.99", "--base", "-4", "--s", "2,3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["stable"], Value::Bool(true));
    assert!(r["result"]["m"].as_u64().unwrap() <= r["result"]["analytic_bound"].as_u64().unwrap());

    let out = lmono(dir.path(), &["synth", "offline", "--rho0", "0.5,6", "--rho1", "0.75,9"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["certificate"], Value::Bool(true));

    let bad = lmono(dir.path(), &["synth", "siegel", "--beta", "1.2", "--base", "-4", "-s", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_needs_an_interval() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lmono(dir.path(), &["scan", "-d", "-4", "-s", "40"]).status.code(), Some(2));
    assert_eq!(lmono(dir.path(), &["scan", "-d", "-4", "-s", "41,40"]).status.code(), Some(2));
    let out = lmono(dir.path(), &["scan", "-d", "-4", "-T", "50", "-s", "40,40.2", "--kmax", "900"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(!r["result"]["crossings"].as_array().unwrap().is_empty());
}
