//! Sign patterns of `F^(k)`: the constants `c_χ, b_χ, C_χ, D_χ`, the
//! density scanner for zeros of `F^(k)` in `s`, sign fingerprints over `k`,
//! and the synthetic constructions with an exceptional real zero and with
//! zeros off the critical line.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::logderiv::{eta_at, NormalizedContext, NormalizedValue, ZeroSource};

/// `l(s)`, the distance from `s` to the nearest zero, trivial zeros included.
pub fn l_of_s(source: &ZeroSource, s: f64) -> Result<f64> {
    if !(s > 0.5) {
        return Err(Error::Domain(format!("l(s) needs s > 1/2, got {s}")));
    }
    source.nearest_distance(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroConstants {
    pub gamma0_tilde: f64,
    pub c_chi: f64,
    /// Crossover found by scanning the defining predicate on a `10⁻³` grid.
    pub c_brute: f64,
    pub b_chi: f64,
    #[serde(rename = "C_chi")]
    pub big_c_chi: f64,
    #[serde(rename = "D_chi")]
    pub big_d_chi: f64,
}

const BRUTE_STEP: f64 = 1e-3;

/// Some nontrivial zero is closer to `s` than `s` is to the origin.
fn nontrivial_nearer(source: &ZeroSource, s: f64) -> bool {
    source.upper().iter().any(|&z| (s - z).norm() < s) || source.real().iter().any(|&b| (s - b).abs() < s)
}

pub fn compute_constants(source: &ZeroSource) -> Result<ZeroConstants> {
    let gamma0 = source.upper().iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    if !gamma0.is_finite() {
        return Err(Error::EmptyList);
    }
    // |s − ρ| < s  ⇔  s > |ρ|²/(2 Re ρ)
    let crossover = source
        .upper()
        .iter()
        .map(|z| z.norm_sqr() / (2.0 * z.re))
        .chain(source.real().iter().map(|&b| b / 2.0))
        .fold(f64::INFINITY, f64::min);
    let c_chi = crossover.max(1.0);
    let end = c_chi + 10.0;
    let n = ((end - 1.0) / BRUTE_STEP).round() as usize;
    let holds: Vec<bool> = (0..=n)
        .into_par_iter()
        .map(|i| nontrivial_nearer(source, 1.0 + i as f64 * BRUTE_STEP))
        .collect();
    let last_fail = holds.iter().rposition(|&h| !h);
    let c_brute = match last_fail {
        None => 1.0,
        Some(i) => 1.0 + (i + 1) as f64 * BRUTE_STEP,
    };
    let b_chi = 0.5 + gamma0 / (PI / 100.0).tan();
    let big_c = c_chi.max(b_chi);
    Ok(ZeroConstants {
        gamma0_tilde: gamma0,
        c_chi,
        c_brute,
        b_chi,
        big_c_chi: big_c,
        big_d_chi: gamma0 + (big_c - 0.5) / (2.0 * gamma0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trit {
    Minus,
    Zero,
    Plus,
    Uncertain,
}

impl Trit {
    pub fn from_sign(sign: Option<i8>) -> Self {
        match sign {
            Some(1) => Trit::Plus,
            Some(-1) => Trit::Minus,
            Some(0) => Trit::Zero,
            _ => Trit::Uncertain,
        }
    }

    pub fn is_definite(self) -> bool {
        matches!(self, Trit::Plus | Trit::Minus)
    }

    /// Both definite and of opposite sign.
    pub fn separates(self, other: Trit) -> bool {
        matches!((self, other), (Trit::Plus, Trit::Minus) | (Trit::Minus, Trit::Plus))
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trit::Minus => "-1",
            Trit::Zero => "0",
            Trit::Plus => "1",
            Trit::Uncertain => "?",
        })
    }
}

impl FromStr for Trit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "-1" => Ok(Trit::Minus),
            "0" => Ok(Trit::Zero),
            "1" => Ok(Trit::Plus),
            "?" => Ok(Trit::Uncertain),
            other => Err(format!("bad trit '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerprintEntry {
    pub k: u32,
    pub trit: Trit,
    pub g: f64,
    pub f_bound: f64,
}

impl fmt::Display for FingerprintEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} trit={} g={:e} fbound={:e}", self.k, self.trit, self.g, self.f_bound)
    }
}

impl FromStr for FingerprintEntry {
    type Err = String;
    fn from_str(line: &str) -> Result<Self, String> {
        let mut fields = line.split_whitespace();
        let mut take = |key: &str| -> Result<String, String> {
            let field = fields.next().ok_or_else(|| format!("missing {key}"))?;
            field
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(|| format!("expected {key}=, got '{field}'"))
        };
        let k = take("k")?.parse().map_err(|e| format!("k: {e}"))?;
        let trit = take("trit")?.parse()?;
        let g = take("g")?.parse().map_err(|e| format!("g: {e}"))?;
        let f_bound = take("fbound")?.parse().map_err(|e| format!("fbound: {e}"))?;
        Ok(Self { k, trit, g, f_bound })
    }
}

/// Signs of `F^(k)(s)` over `k ∈ [k_min, k_max]`, each `±1` only when certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignFingerprint {
    pub s: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub tolerance: f64,
    pub entries: Vec<FingerprintEntry>,
}

impl SignFingerprint {
    pub fn trit(&self, k: u32) -> Option<Trit> {
        k.checked_sub(self.k_min).and_then(|i| self.entries.get(i as usize)).map(|e| e.trit)
    }

    pub fn definite_fraction(&self) -> f64 {
        let n = self.entries.iter().filter(|e| e.trit.is_definite()).count();
        n as f64 / self.entries.len().max(1) as f64
    }

    /// One `k=<int> trit=<t> g=<float> fbound=<float>` line per entry.
    pub fn records(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }
}

pub const MAX_K: u32 = 100_000;

fn entry(v: &NormalizedValue, tolerance: f64) -> FingerprintEntry {
    let certified = v.g.abs() > v.f_bound + v.g_error + tolerance;
    FingerprintEntry {
        k: v.k,
        trit: if certified { Trit::from_sign(v.derivative_sign()) } else { Trit::Uncertain },
        g: v.g,
        f_bound: v.f_bound,
    }
}

fn check_k_range(k_min: u32, k_max: u32) -> Result<()> {
    if k_min < 2 || k_min > k_max || k_max > MAX_K {
        return Err(Error::Domain(format!(
            "k range [{k_min}, {k_max}] must lie in [2, {MAX_K}]"
        )));
    }
    Ok(())
}

pub fn fingerprint(source: &ZeroSource, s: f64, k_min: u32, k_max: u32, tolerance: f64) -> Result<SignFingerprint> {
    check_k_range(k_min, k_max)?;
    let ctx = NormalizedContext::new(source, s)?;
    let entries = (k_min..=k_max)
        .into_par_iter()
        .map(|k| ctx.eval(k).map(|v| entry(&v, tolerance)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignFingerprint {
        s,
        k_min,
        k_max,
        tolerance,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub s1: f64,
    pub s2: f64,
    pub first_separating_k: Option<u32>,
    /// Orders examined (up to and including the separating one).
    pub examined: u32,
    pub agreeing_definite: u32,
    pub uncertain: u32,
}

const COMPARE_BLOCK: u32 = 4096;

/// First `k ∈ [k_min, k_max]` where `s1` and `s2` carry definite opposite signs.
pub fn compare_fingerprints_window(
    source: &ZeroSource,
    s1: f64,
    s2: f64,
    k_min: u32,
    k_max: u32,
    tolerance: f64,
) -> Result<Comparison> {
    check_k_range(k_min, k_max)?;
    if s1 > s2 {
        return Err(Error::Domain(format!("need s1 ≤ s2, got {s1} > {s2}")));
    }
    let c1 = NormalizedContext::new(source, s1)?;
    let c2 = NormalizedContext::new(source, s2)?;
    let mut report = Comparison {
        s1,
        s2,
        first_separating_k: None,
        examined: 0,
        agreeing_definite: 0,
        uncertain: 0,
    };
    let mut lo = k_min;
    while lo <= k_max {
        let hi = lo.saturating_add(COMPARE_BLOCK - 1).min(k_max);
        let block = (lo..=hi)
            .into_par_iter()
            .map(|k| Ok((entry(&c1.eval(k)?, tolerance).trit, entry(&c2.eval(k)?, tolerance).trit)))
            .collect::<Result<Vec<_>>>()?;
        for (i, (t1, t2)) in block.into_iter().enumerate() {
            report.examined += 1;
            if t1.separates(t2) {
                report.first_separating_k = Some(lo + i as u32);
                return Ok(report);
            }
            if t1.is_definite() && t2.is_definite() {
                report.agreeing_definite += 1;
            } else {
                report.uncertain += 1;
            }
        }
        lo = hi + 1;
    }
    Ok(report)
}

/// As [`compare_fingerprints_window`] over `[2, k_max]`; for zeros of an
/// actual character both points must exceed `C_χ`.
pub fn compare_fingerprints(source: &ZeroSource, s1: f64, s2: f64, k_max: u32, tolerance: f64) -> Result<Comparison> {
    if !source.is_synthetic() {
        let c = compute_constants(source)?.big_c_chi;
        if !(s1 > c) {
            return Err(Error::Precondition(format!("s1 = {s1} must exceed C_χ = {c:.4}")));
        }
    }
    compare_fingerprints_window(source, s1, s2, 2, k_max, tolerance)
}

/// A zero of `F^(k)` in `s`, bracketed by certified opposite signs of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub k: u32,
    pub s_star: f64,
    /// Half-width of the certified bracket.
    pub h: f64,
    pub g_below: f64,
    pub g_above: f64,
    pub f_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub a: f64,
    pub b: f64,
    pub k_max: u32,
    /// `⌈2π/(θ_a − θ_b)⌉`: beyond it `cos(kθ_s)` sweeps a full period over `[a, b]`.
    pub onset: u64,
    pub crossings: Vec<Crossing>,
    /// Orders with certified opposite endpoint signs whose refined bracket
    /// could not be certified at resolution `h`.
    pub uncertified: u32,
}

fn definite_sign(v: &NormalizedValue) -> Option<i8> {
    v.definite_sign()
}

pub fn scan_sign_changes(source: &ZeroSource, a: f64, b: f64, k_max: u32) -> Result<ScanReport> {
    if !(b - a >= 1e-3) {
        return Err(Error::Domain(format!("interval [{a}, {b}] shorter than 1e-3")));
    }
    check_k_range(2, k_max)?;
    let c = compute_constants(source)?.c_chi;
    if !(a > c) {
        return Err(Error::Precondition(format!("a = {a} must exceed c_χ = {c:.4}")));
    }
    let rho_a = eta_at(source, a)?.rho0;
    let rho_b = eta_at(source, b)?.rho0;
    if rho_a != rho_b {
        let mid = 0.5 * (a + b);
        return Err(Error::Tie {
            s: mid,
            suggest_lo: a,
            suggest_hi: mid,
        });
    }
    let ca = NormalizedContext::new(source, a)?;
    let cb = NormalizedContext::new(source, b)?;
    let onset = (2.0 * PI / (ca.theta_s() - cb.theta_s())).ceil() as u64;

    let results: Vec<Option<std::result::Result<Crossing, ()>>> = (2..=k_max)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let va = ca.eval(k)?;
            let vb = cb.eval(k)?;
            match (definite_sign(&va), definite_sign(&vb)) {
                (Some(sa), Some(sb)) if sa != sb => Ok(Some(refine(source, a, b, k, sa)?)),
                _ => Ok(None),
            }
        })
        .collect::<Result<_>>()?;
    let mut crossings = Vec::new();
    let mut uncertified = 0;
    for r in results.into_iter().flatten() {
        match r {
            Ok(c) => crossings.push(c),
            Err(()) => uncertified += 1,
        }
    }
    if crossings.is_empty() && (k_max as u64) < onset {
        return Err(Error::NoFindings { k_max, onset });
    }
    Ok(ScanReport {
        a,
        b,
        k_max,
        onset,
        crossings,
        uncertified,
    })
}

fn g_at(source: &ZeroSource, s: f64, k: u32) -> Result<NormalizedValue> {
    NormalizedContext::new(source, s)?.eval(k)
}

/// Bisects the sign of `g` down to `h = 10⁻⁹ max(1, s)` and certifies `g(s* ± h)`.
fn refine(source: &ZeroSource, a: f64, b: f64, k: u32, sign_a: i8) -> Result<std::result::Result<Crossing, ()>> {
    let (mut lo, mut hi) = (a, b);
    let h = |s: f64| 1e-9 * s.abs().max(1.0);
    while hi - lo > 2.0 * h(hi) {
        let mid = 0.5 * (lo + hi);
        let g = g_at(source, mid, k)?.g;
        if g == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (g > 0.0) == (sign_a > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s_star = 0.5 * (lo + hi);
    let hs = h(s_star);
    let below = g_at(source, s_star - hs, k)?;
    let above = g_at(source, s_star + hs, k)?;
    Ok(match (definite_sign(&below), definite_sign(&above)) {
        (Some(x), Some(y)) if x != y => Ok(Crossing {
            k,
            s_star,
            h: hs,
            g_below: below.g,
            g_above: above.g,
            f_bound: below.f_bound.max(above.f_bound),
        }),
        _ => Err(()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelReport {
    pub beta: f64,
    pub s_values: Vec<f64>,
    /// Least `k ≥ k_start` with `|R_k(s)| < 1` at every `s`.
    pub m: u32,
    /// `⌈2 + log C / log(1/η_max)⌉` from the dominance ratios.
    pub analytic_bound: u32,
    pub stable: bool,
    /// First `(k, s)` where `1 + R_k(s) ≤ 0`, if any.
    pub violation: Option<(u32, f64)>,
}

/// `R_k(s) = Σ_{ρ≠β} ((s−β)/(s−ρ))^k`.
fn siegel_remainder(source: &ZeroSource, beta: f64, s: f64, k: u32) -> f64 {
    let num = s - beta;
    let kf = k as f64;
    let mut acc = crate::sum::NeumaierSum::new();
    for &z in source.upper() {
        let w = s - z;
        acc += 2.0 * (kf * (num / w.norm()).ln()).exp() * (kf * w.arg()).cos();
    }
    let mut skipped_self = false;
    for &x in source.real() {
        if x == beta && !skipped_self {
            skipped_self = true;
            continue;
        }
        acc += (num / (s - x)).powf(kf);
    }
    acc.sum()
}

/// Once the real zero `β` dominates, `F^(k)(s) = (−1)^{k−1}(k−1)!(s−β)^{−k}(1 + R_k(s))`
/// keeps the sign `(−1)^{k−1}`; finds where that starts and checks a span past it.
pub fn siegel_stability(source: &ZeroSource, s_values: &[f64], k_start: u32, k_span: u32) -> Result<SiegelReport> {
    let beta = source
        .real()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if !beta.is_finite() {
        return Err(Error::Dominance("set has no real zero".into()));
    }
    if let Some(z) = source.upper().iter().find(|z| z.re > beta) {
        return Err(Error::Dominance(format!("zero {z} lies right of β = {beta}")));
    }
    if source.parity().is_some() {
        return Err(Error::Precondition("expects a synthetic zero set".into()));
    }
    if s_values.is_empty() || s_values.iter().any(|&s| !(s > 1.0)) {
        return Err(Error::Domain("s values must be > 1".into()));
    }
    let k_start = k_start.max(1);
    let mut eta_max: f64 = 0.0;
    let mut c_max: f64 = 0.0;
    for &s in s_values {
        let num = s - beta;
        let ratios = source
            .upper()
            .iter()
            .map(|&z| (num / (s - z).norm(), 2.0))
            .chain(source.real().iter().filter(|&&x| x != beta).map(|&x| (num / (s - x), 1.0)));
        let mut c = 0.0;
        for (ratio, mult) in ratios {
            if ratio >= 1.0 {
                return Err(Error::Dominance(format!("β is not strictly nearest to s = {s}")));
            }
            eta_max = eta_max.max(ratio);
            c += mult * ratio * ratio;
        }
        c_max = c_max.max(c);
    }
    let analytic_bound = if c_max <= 1.0 || eta_max == 0.0 {
        2
    } else {
        (2.0 + c_max.ln() / (1.0 / eta_max).ln()).ceil() as u32
    };
    let mut m = k_start;
    while s_values.iter().any(|&s| siegel_remainder(source, beta, s, m).abs() >= 1.0) {
        m += 1;
        if m > MAX_K {
            return Err(Error::Search(MAX_K as u64));
        }
    }
    let mut violation = None;
    'outer: for k in m..=m.saturating_add(k_span) {
        for &s in s_values {
            if 1.0 + siegel_remainder(source, beta, s, k) <= 0.0 {
                violation = Some((k, s));
                break 'outer;
            }
        }
    }
    Ok(SiegelReport {
        beta,
        s_values: s_values.to_vec(),
        m,
        analytic_bound,
        stable: violation.is_none(),
        violation,
    })
}

/// Two points `s′ ≠ s″` whose fingerprints agree from some order on, built
/// from a zero pair `ρ₀, ρ₁` with `ρ₁` off the critical line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflinePair {
    pub rho0: Complex64,
    pub rho1: Complex64,
    pub delta: f64,
    /// Where the perpendiculars to the line through `ρ₀, ρ₁` meet the real axis.
    pub s0: f64,
    pub s1: f64,
    pub theta: f64,
    pub a: i64,
    pub b_int: i64,
    /// `2π(a + b√2)`.
    pub phi: f64,
    pub s_prime: f64,
    pub s_dblprime: f64,
    /// `C_{a,b} = 1/(9|b|√2)`.
    pub c_ab: f64,
    pub eta: f64,
    pub c_s: f64,
    pub n: u32,
    pub diophantine_ok: bool,
    pub window: Comparison,
    pub all_definite: bool,
    pub certificate: bool,
}

pub const B_SEARCH_MAX: i64 = 1_000_000;
pub const OFFLINE_WINDOW: u32 = 1000;

/// `n√2 − ⌊n√2⌋` for `n ≥ 0`, from `(2n² − m²)/(n√2 + m)` with `m = ⌊n√2⌋`.
fn frac_sqrt2(n: u64) -> (u64, f64) {
    let two_n2 = 2 * (n as u128) * (n as u128);
    let mut m = ((n as f64) * std::f64::consts::SQRT_2) as u128;
    while m * m > two_n2 {
        m -= 1;
    }
    while (m + 1) * (m + 1) <= two_n2 {
        m += 1;
    }
    let num = (two_n2 - m * m) as f64;
    (m as u64, num / (n as f64 * std::f64::consts::SQRT_2 + m as f64))
}

/// Distance from `n√2` to the nearest integer.
pub fn dist_sqrt2_multiple(n: u64) -> f64 {
    let (_, f) = frac_sqrt2(n);
    f.min(1.0 - f)
}

/// `a + b√2` as `(integer part, fraction)` computed without cancellation.
fn a_plus_b_sqrt2(a: i64, b: i64) -> f64 {
    let (m, f) = frac_sqrt2(b.unsigned_abs());
    if b >= 0 {
        (a + m as i64) as f64 + f
    } else {
        (a - m as i64) as f64 - f
    }
}

pub fn construct_offline_pair(rho0: Complex64, rho1: Complex64, delta: f64) -> Result<OfflinePair> {
    if !(rho1.im > rho0.im && rho0.im > 0.0) {
        return Err(Error::Precondition("need Im ρ₁ > Im ρ₀ > 0".into()));
    }
    if rho1.re == 0.5 {
        return Err(Error::Precondition("ρ₁ must lie off the critical line".into()));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!("δ = {delta} outside (0, 1/2)")));
    }
    let set = crate::zeros::SyntheticZeroSet::new(vec![rho0, rho1])?;
    let source = ZeroSource::synthetic(&set);
    let v = rho1 - rho0;
    if v.re == 0.0 {
        return Err(Error::Geometry("line through ρ₀, ρ₁ is vertical".into()));
    }
    // (s − ρ)·conj(v) purely imaginary
    let foot = |z: Complex64| z.re + z.im * v.im / v.re;
    let (s0, s1) = (foot(rho0), foot(rho1));
    let c = compute_constants(&source)?.c_chi;
    if !(s0 > c && s1 > c) {
        return Err(Error::Geometry(format!("feet {s0}, {s1} not above c = {c}")));
    }
    let theta = rho0.im.atan2(s0 - rho0.re);
    let theta1 = rho1.im.atan2(s1 - rho1.re);
    if (theta - theta1).abs() > 1e-12 {
        return Err(Error::Geometry(format!("angles differ: {theta} vs {theta1}")));
    }
    let target = theta / (2.0 * PI);
    let width = delta / (2.0 * PI);
    let (a, b_int, frac) = (1..=B_SEARCH_MAX)
        .flat_map(|b| [b, -b])
        .find_map(|b| {
            let a = (target - b as f64 * std::f64::consts::SQRT_2).round() as i64;
            let x = a_plus_b_sqrt2(a, b);
            ((x - target).abs() < width && x > 0.0).then_some((a, b, x))
        })
        .ok_or(Error::Search(B_SEARCH_MAX as u64))?;
    let phi = 2.0 * PI * frac;
    let s_prime = rho0.re + rho0.im / phi.tan();
    let s_dblprime = rho1.re + rho1.im / phi.tan();

    let mut eta: f64 = 0.0;
    let mut c_s: f64 = 0.0;
    for (s, rho) in [(s_prime, rho0), (s_dblprime, rho1)] {
        let e = eta_at(&source, s)?;
        if (e.rho0 - rho).norm() > 0.0 {
            return Err(Error::Geometry(format!("nearest zero to {s} is {} not {rho}", e.rho0)));
        }
        eta = eta.max(e.eta);
        let r = (s - rho).norm();
        let others: f64 = source
            .upper()
            .iter()
            .filter(|&&z| z != rho)
            .map(|&z| 2.0 * (r / (s - z).norm()).powi(2))
            .sum();
        c_s = c_s.max(others);
    }
    let c_ab = 1.0 / (9.0 * b_int.unsigned_abs() as f64 * std::f64::consts::SQRT_2);
    // k η^k is decreasing past 1/ln(1/η); the first k there with πC/(4k) > C_s η^{k−2} starts the run
    let k_floor = (1.0 / (1.0 / eta).ln()).ceil().max(2.0) as u64;
    let mut k = k_floor;
    while PI * c_ab / (4.0 * k as f64) <= c_s * eta.powi(k as i32 - 2) {
        k += 1;
        if k > MAX_K as u64 {
            return Err(Error::Search(k));
        }
    }
    let n = (k - 1) as u32;
    if n + OFFLINE_WINDOW > MAX_K {
        return Err(Error::Search(n as u64));
    }
    let four_b = 4 * b_int.unsigned_abs();
    let diophantine_ok = (n + 1..=n + OFFLINE_WINDOW).all(|k| dist_sqrt2_multiple(four_b * k as u64) > c_ab / k as f64);
    let (lo, hi) = if s_prime <= s_dblprime { (s_prime, s_dblprime) } else { (s_dblprime, s_prime) };
    let window = compare_fingerprints_window(&source, lo, hi, n + 1, n + OFFLINE_WINDOW, 0.0)?;
    let all_definite = window.uncertain == 0 && window.first_separating_k.is_none();
    let certificate = diophantine_ok && window.first_separating_k.is_none();
    Ok(OfflinePair {
        rho0,
        rho1,
        delta,
        s0,
        s1,
        theta,
        a,
        b_int,
        phi,
        s_prime,
        s_dblprime,
        c_ab,
        eta,
        c_s,
        n,
        diophantine_ok,
        window,
        all_definite,
        certificate,
    })
}
