//! Critical-line zeros: scanning, argument-principle count, the zero cache
//! file, and zero-derived constants.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lfunction::{LFunction, MAX_HEIGHT};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Scanned,
    Ingested,
    Synthetic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Scanned => "scanned",
            Provenance::Ingested => "ingested",
            Provenance::Synthetic => "synthetic",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "scanned" => Ok(Provenance::Scanned),
            "ingested" => Ok(Provenance::Ingested),
            "synthetic" => Ok(Provenance::Synthetic),
            other => Err(format!("unknown source '{other}'")),
        }
    }
}

/// Ordinates `γ_j` of zeros `1/2 + iγ_j` in `(0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub discriminant: i64,
    pub ordinates: Vec<f64>,
    pub per_zero_error: f64,
    pub covered_height: f64,
    pub source: Provenance,
    /// Set only after [`count_check`] has matched the argument-principle count.
    pub complete: bool,
}

impl ZeroList {
    pub fn empty(discriminant: i64, covered_height: f64, source: Provenance) -> Self {
        Self {
            discriminant,
            ordinates: Vec::new(),
            per_zero_error: 0.0,
            covered_height,
            source,
            complete: false,
        }
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Number of ordinates `≤ t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// Keeps only ordinates `≤ t` and lowers the covered height to `t`.
    pub fn truncated(&self, t: f64) -> ZeroList {
        let n = self.count_up_to(t);
        ZeroList {
            ordinates: self.ordinates[..n].to_vec(),
            covered_height: t.min(self.covered_height),
            complete: false,
            ..self.clone()
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.covered_height > 0.0) {
            return Err("covered height must be positive".into());
        }
        for w in self.ordinates.windows(2) {
            if !(w[1] > w[0]) {
                return Err(format!("ordinates not strictly increasing at {}", w[1]));
            }
        }
        if let Some(&g) = self.ordinates.first() {
            if !(g > 0.0) {
                return Err("ordinates must be positive".into());
            }
        }
        Ok(())
    }
}

/// Hypothetical zeros in the upper half plane; conjugates are implied.
/// A zero with zero imaginary part is a real zero and is not doubled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticZeroSet {
    zeros: Vec<Complex64>,
}

impl SyntheticZeroSet {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        for z in &zeros {
            if !(z.re > 0.0 && z.re < 1.0) {
                return Err(Error::Precondition(format!("zero {z} outside the strip 0 < Re < 1")));
            }
            if z.im < 0.0 {
                return Err(Error::Precondition(format!("zero {z} below the real axis")));
            }
        }
        Ok(Self { zeros })
    }

    /// Zeros `1/2 + iγ` at the given ordinates, plus an optional real zero.
    pub fn critical(ordinates: &[f64], real_zero: Option<f64>) -> Result<Self> {
        let mut zeros: Vec<Complex64> = real_zero.map(|b| Complex64::new(b, 0.0)).into_iter().collect();
        zeros.extend(ordinates.iter().map(|&g| Complex64::new(0.5, g)));
        Self::new(zeros)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn real_zeros(&self) -> impl Iterator<Item = f64> + '_ {
        self.zeros.iter().filter(|z| z.im == 0.0).map(|z| z.re)
    }

    pub fn complex_zeros(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.zeros.iter().copied().filter(|z| z.im > 0.0)
    }
}

/// Largest admissible scan step at height `t_max`.
pub fn max_scan_step(q: u64, t_max: f64) -> f64 {
    PI / (q as f64 * t_max / (2.0 * PI) + 4.0).ln()
}

const REFINE_WIDTH: f64 = 2e-9;

/// Locates sign changes of `Z` on `(0, T]` and refines them by bisection.
pub fn scan_zeros(lf: &LFunction, t_max: f64, step: f64) -> Result<ZeroList> {
    let q = lf.character().modulus();
    if !(t_max > 0.0 && t_max <= MAX_HEIGHT) {
        return Err(Error::Precondition(format!("T = {t_max} outside (0, {MAX_HEIGHT}]")));
    }
    if !(step > 0.0 && step <= max_scan_step(q, t_max)) {
        return Err(Error::Precondition(format!(
            "step {step} exceeds {:.4}",
            max_scan_step(q, t_max)
        )));
    }
    let n = (t_max / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(t_max)).collect();
    let values: Vec<f64> = grid.par_iter().map(|&t| lf.z_function(t)).collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    for i in 0..n {
        let (a, b) = (values[i], values[i + 1]);
        if b == 0.0 && i + 1 < n {
            continue; // picked up by the next bracket
        }
        if a * b < 0.0 || (b == 0.0 && a != 0.0) {
            brackets.push((grid[i], grid[i + 1], a));
        }
    }
    let refined: Vec<(f64, f64)> = brackets
        .par_iter()
        .map(|&(lo, hi, flo)| bisect(lf, lo, hi, flo))
        .collect::<Result<_>>()?;
    let per_zero_error = refined.iter().map(|r| r.1).fold(0.0, f64::max);
    let mut zl = ZeroList {
        discriminant: lf.character().discriminant(),
        ordinates: refined.into_iter().map(|r| r.0).filter(|&g| g > 0.0).collect(),
        per_zero_error,
        covered_height: t_max,
        source: Provenance::Scanned,
        complete: false,
    };
    zl.ordinates.dedup();
    Ok(zl)
}

fn bisect(lf: &LFunction, mut lo: f64, mut hi: f64, flo: f64) -> Result<(f64, f64)> {
    let sign_lo = flo.signum();
    while hi - lo > REFINE_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fm = lf.z_function(mid)?;
        if fm == 0.0 {
            return Ok((mid, 0.5 * REFINE_WIDTH));
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    /// `(ϑ(T) + Δ arg L)/π` along the right half of the rectangle.
    pub expected: f64,
    pub found: usize,
    pub pass: bool,
    /// Height actually used (nudged away from zeros when needed).
    pub height: f64,
}

const CONTOUR_SIGMA: f64 = 3.0;
const CONTOUR_CLEARANCE: f64 = 1e-3;
const CONTOUR_NUDGE: f64 = 1e-2;

/// Argument-principle count of zeros with `0 < γ ≤ T`, compared with the list.
///
/// By the functional equation the winding of `Λ` around
/// `[1-σ₁, σ₁] × [0, T]` is twice the change of `arg Λ` along
/// `1/2 → σ₁ → σ₁ + iT → 1/2 + iT`; `Λ` is positive on the real segment.
/// Sets `zlist.complete` on success.
pub fn count_check(lf: &LFunction, zlist: &mut ZeroList) -> Result<CountReport> {
    let mut height = zlist.covered_height;
    let near = |h: f64| zlist.ordinates.iter().any(|&g| (g - h).abs() < CONTOUR_CLEARANCE);
    if near(height) {
        height -= CONTOUR_NUDGE;
        if near(height) {
            return Err(Error::Contour(format!("no clear height near {}", zlist.covered_height)));
        }
    }
    let expected = if height <= 0.0 {
        0.0
    } else {
        let arg = track_arg(lf, Complex64::new(CONTOUR_SIGMA, 0.0), Complex64::new(CONTOUR_SIGMA, height))?
            + track_arg(lf, Complex64::new(CONTOUR_SIGMA, height), Complex64::new(0.5, height))?;
        (lf.theta(height)? + arg) / PI
    };
    let found = zlist.count_up_to(height);
    let pass = expected.round() >= 0.0 && found == expected.round() as usize;
    zlist.complete = pass;
    Ok(CountReport {
        expected,
        found,
        pass,
        height,
    })
}

/// Continuous change of `arg L` along the segment `from → to`.
fn track_arg(lf: &LFunction, from: Complex64, to: Complex64) -> Result<f64> {
    let len = (to - from).norm();
    let pieces = (len / 0.05).ceil().max(1.0) as usize;
    let pts: Vec<Complex64> = (0..=pieces).map(|i| from + (to - from) * (i as f64 / pieces as f64)).collect();
    let vals: Vec<Complex64> = pts.par_iter().map(|&s| lf.evaluate(s).map(|p| p.value)).collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..pieces {
        total += arg_increment(lf, pts[i], pts[i + 1], vals[i], vals[i + 1], 0)?;
    }
    Ok(total)
}

fn arg_increment(lf: &LFunction, a: Complex64, b: Complex64, fa: Complex64, fb: Complex64, depth: u32) -> Result<f64> {
    if fa.norm() < 1e-12 || fb.norm() < 1e-12 {
        return Err(Error::Contour(format!("L vanishes near {a}")));
    }
    let d = (fb / fa).arg();
    if d.abs() <= PI / 4.0 {
        return Ok(d);
    }
    if depth > 30 {
        return Err(Error::Contour(format!("argument not resolved between {a} and {b}")));
    }
    let m = 0.5 * (a + b);
    let fm = lf.evaluate(m)?.value;
    Ok(arg_increment(lf, a, m, fa, fm, depth + 1)? + arg_increment(lf, m, b, fm, fb, depth + 1)?)
}

/// `γ̃₀`, the smallest stored ordinate.
pub fn lowest_zero(zlist: &ZeroList) -> Result<f64> {
    zlist.ordinates.first().copied().ok_or(Error::EmptyList)
}

/// An estimated quantity with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

/// Zero-counting model above the covered height, built from
/// `N(t) = ϑ(t)/π + S(t)`.
///
/// A tail `Σ_{γ>T} w(γ)` is `(1/π)∫_T^∞ w ϑ' dt − w(T) S(T) − ∫_T^∞ S w' dt`;
/// integrating by parts twice more with `S₁(t) = ∫_0^t S`, its mean `S̄₁`
/// over `[T/2, T]`, and `S₂(t) = ∫_{T/2}^t (S₁ − S̄₁)` with mean `S̄₂`, the
/// last integral is `−(S₁(T) − S̄₁) w'(T)` up to a remainder
/// `(S₂(T) − S̄₂) w''(T) + ∫ (S₂ − S̄₂) w'''`, bounded with the window spread
/// of `S₂` standing in for all `t > T`.
#[derive(Debug, Clone)]
pub struct CountingModel {
    height: f64,
    s_at_height: f64,
    s1_at_height: f64,
    s1_mean: f64,
    s2_at_height: f64,
    s2_mean: f64,
    s2_spread: f64,
    /// `(t, quadrature weight × ϑ'(t))` for `∫_T^∞ w ϑ' dt`.
    fine_nodes: Vec<(f64, f64)>,
    coarse_nodes: Vec<(f64, f64)>,
}

/// Substituting `t = T/u`, geometric panels `[2^{-j-1}, 2^{-j}]` in `u`.
fn tail_nodes(lf: &LFunction, t0: f64, order: usize) -> Result<Vec<(f64, f64)>> {
    let rule = crate::special::gauss_legendre(order);
    let mut nodes = Vec::with_capacity(60 * order);
    let mut hi = 1.0;
    for _ in 0..60 {
        let lo = hi * 0.5;
        for &(x, w) in &rule {
            let u: f64 = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
            let t = t0 / u;
            nodes.push((t, 0.5 * (hi - lo) * w * t0 / (u * u) * lf.theta_prime(t)?));
        }
        hi = lo;
    }
    Ok(nodes)
}

const WINDOW_POINTS: usize = 400;

impl CountingModel {
    pub fn new(lf: &LFunction, zlist: &ZeroList) -> Result<Self> {
        if !zlist.complete {
            return Err(Error::Height("zero list has not passed count_check".into()));
        }
        let height = zlist.covered_height;
        let ords = &zlist.ordinates;
        let n_at = zlist.count_up_to(height) as f64;
        let s_at_height = n_at - lf.theta(height)? / PI;

        // Θ(t) = ∫_0^t ϑ on the window grid
        let rule = crate::special::gauss_legendre(8);
        let integrate = |a: f64, b: f64| -> Result<f64> {
            let pieces = ((b - a) / 0.5).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            let mut acc = NeumaierSum::new();
            for p in 0..pieces {
                let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
                for &(x, w) in &rule {
                    let t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                    acc += 0.5 * (hi - lo) * w * lf.theta(t)?;
                }
            }
            Ok(acc.sum())
        };
        let start = 0.5 * height;
        let mut big_theta = integrate(0.0, start)?;
        let dt = (height - start) / WINDOW_POINTS as f64;
        let mut s1 = Vec::with_capacity(WINDOW_POINTS + 1);
        for i in 0..=WINDOW_POINTS {
            let t = start + i as f64 * dt;
            if i > 0 {
                big_theta += integrate(t - dt, t)?;
            }
            let counted: NeumaierSum = ords.iter().take_while(|&&g| g <= t).map(|&g| t - g).collect();
            s1.push(counted.sum() - big_theta / PI);
        }
        let window_mean = |v: &[f64]| {
            let mut acc = NeumaierSum::new();
            for w in v.windows(2) {
                acc += 0.5 * (w[0] + w[1]) * dt;
            }
            acc.sum() / (height - start)
        };
        let s1_mean = window_mean(&s1);
        let mut s2 = Vec::with_capacity(s1.len());
        let mut acc = NeumaierSum::new();
        s2.push(0.0);
        for w in s1.windows(2) {
            acc += 0.5 * (w[0] + w[1] - 2.0 * s1_mean) * dt;
            s2.push(acc.sum());
        }
        let s2_mean = window_mean(&s2);
        let s2_spread = s2.iter().map(|v| (v - s2_mean).abs()).fold(0.0, f64::max);
        Ok(Self {
            height,
            s_at_height,
            s1_at_height: *s1.last().unwrap(),
            s1_mean,
            s2_at_height: *s2.last().unwrap(),
            s2_mean,
            s2_spread,
            fine_nodes: tail_nodes(lf, height, 16)?,
            coarse_nodes: tail_nodes(lf, height, 10)?,
        })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// `S(T) = N(T) − ϑ(T)/π`.
    pub fn s_at_height(&self) -> f64 {
        self.s_at_height
    }

    /// `Σ_{γ>T} w(γ)`; `weight(t)` returns `(w(t), w'(t), w''(t))`.
    pub fn tail<W: Fn(f64) -> (f64, f64, f64)>(&self, weight: W) -> Result<Estimate> {
        let t0 = self.height;
        let apply = |nodes: &[(f64, f64)]| -> f64 {
            let mut acc = NeumaierSum::new();
            for &(t, c) in nodes {
                acc += c * weight(t).0;
            }
            acc.sum()
        };
        let fine = apply(&self.fine_nodes);
        let coarse = apply(&self.coarse_nodes);
        let smooth = fine / PI;
        let quad_err = (fine - coarse).abs() / PI;
        let (w_t, dw_t, d2w_t) = weight(t0);
        let value = smooth - w_t * self.s_at_height + (self.s1_at_height - self.s1_mean) * dw_t;
        let second_order = (self.s2_at_height - self.s2_mean) * d2w_t;
        let error_bound = second_order.abs() + self.s2_spread * d2w_t.abs() + quad_err + 1e-15 * smooth.abs();
        Ok(Estimate { value, error_bound })
    }
}

/// `B(χ) = −Σ_ρ 1/ρ = −Σ_{γ>0} 1/(1/4 + γ²)` on the critical line, with the
/// tail above the covered height estimated from the counting model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BConstant {
    pub value: f64,
    pub error_bound: f64,
    pub partial: f64,
    pub tail: f64,
}

pub const B_CONSTANT_MIN_HEIGHT: f64 = 50.0;

pub fn b_constant(lf: &LFunction, zlist: &ZeroList) -> Result<BConstant> {
    if zlist.covered_height < B_CONSTANT_MIN_HEIGHT {
        return Err(Error::Height(format!(
            "B(χ) needs zeros to height {B_CONSTANT_MIN_HEIGHT}, have {}",
            zlist.covered_height
        )));
    }
    let model = CountingModel::new(lf, zlist)?;
    let partial: NeumaierSum = zlist.ordinates.iter().map(|&g| 1.0 / (0.25 + g * g)).collect();
    let partial = partial.sum();
    let tail = model.tail(|t| {
        let d = 0.25 + t * t;
        (1.0 / d, -2.0 * t / (d * d), (6.0 * t * t - 0.5) / (d * d * d))
    })?;
    if tail.error_bound > 0.1 * partial.abs() {
        return Err(Error::Tail(format!(
            "B(χ) tail bound {:e} exceeds 10% of partial sum {partial:e}",
            tail.error_bound
        )));
    }
    Ok(BConstant {
        value: -(partial + tail.value),
        error_bound: tail.error_bound + zlist.per_zero_error * 2.0 * partial,
        partial: -partial,
        tail: -tail.value,
    })
}

/// `B = −Σ_ρ 1/ρ` over a synthetic set (conjugates implied).
pub fn b_constant_synthetic(set: &SyntheticZeroSet) -> f64 {
    let mut acc = NeumaierSum::new();
    for z in set.zeros() {
        if z.im == 0.0 {
            acc += -1.0 / z.re;
        } else {
            acc += -2.0 * z.re / z.norm_sqr();
        }
    }
    acc.sum()
}

fn header_line(zl: &ZeroList) -> String {
    format!(
        "# lmono-zeros v1, d={}, T={}, source={}",
        zl.discriminant, zl.covered_height, zl.source
    )
}

/// Writes the zero cache CSV through a temporary file and rename.
pub fn store_zeros(zl: &ZeroList, path: &Path) -> Result<()> {
    let mut body = header_line(zl);
    body.push('\n');
    for (i, g) in zl.ordinates.iter().enumerate() {
        body.push_str(&format!("{},{},{},{}\n", zl.discriminant, i + 1, g, zl.per_zero_error));
    }
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("zeros"),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_header(line: &str) -> std::result::Result<(i64, f64, Provenance), String> {
    let rest = line
        .strip_prefix("# lmono-zeros v1,")
        .ok_or_else(|| "expected header '# lmono-zeros v1, d=<d>, T=<T>, source=<src>'".to_string())?;
    let (mut d, mut t, mut src) = (None, None, None);
    for field in rest.split(',') {
        let (k, v) = field.trim().split_once('=').ok_or_else(|| format!("bad header field '{field}'"))?;
        match k {
            "d" => d = Some(v.parse::<i64>().map_err(|e| format!("d: {e}"))?),
            "T" => t = Some(v.parse::<f64>().map_err(|e| format!("T: {e}"))?),
            "source" => src = Some(v.parse::<Provenance>()?),
            other => return Err(format!("unknown header key '{other}'")),
        }
    }
    match (d, t, src) {
        (Some(d), Some(t), Some(s)) => Ok((d, t, s)),
        _ => Err("header must carry d, T and source".into()),
    }
}

/// Reads a zero cache CSV. The result is never marked complete.
pub fn load_zeros(path: &Path) -> Result<ZeroList> {
    let text = std::fs::read_to_string(path)?;
    parse_zeros(&text)
}

/// Reads an external zero file and marks it `source=ingested`.
pub fn ingest_zeros(path: &Path) -> Result<ZeroList> {
    let mut zl = load_zeros(path)?;
    zl.source = Provenance::Ingested;
    Ok(zl)
}

pub fn parse_zeros(text: &str) -> Result<ZeroList> {
    let fmt_err = |line: usize, msg: String| Error::Format { line, msg };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| fmt_err(1, "empty file".into()))?;
    let (d, t, source) = parse_header(header.trim()).map_err(|m| fmt_err(1, m))?;
    let mut zl = ZeroList::empty(d, t, source);
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(fmt_err(lineno, format!("expected 4 columns, got {}", cols.len())));
        }
        let row_d: i64 = cols[0].parse().map_err(|e| fmt_err(lineno, format!("d: {e}")))?;
        let index: usize = cols[1].parse().map_err(|e| fmt_err(lineno, format!("index: {e}")))?;
        let g: f64 = cols[2].parse().map_err(|e| fmt_err(lineno, format!("ordinate: {e}")))?;
        let err: f64 = cols[3].parse().map_err(|e| fmt_err(lineno, format!("error: {e}")))?;
        if row_d != d {
            return Err(fmt_err(lineno, format!("row discriminant {row_d} differs from header {d}")));
        }
        if index != zl.ordinates.len() + 1 {
            return Err(fmt_err(lineno, format!("index {index} out of sequence")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(fmt_err(lineno, format!("ordinate {g} not positive")));
        }
        if let Some(&prev) = zl.ordinates.last() {
            if !(g > prev) {
                return Err(fmt_err(lineno, format!("ordinate {g} not above previous {prev}")));
            }
        }
        if g > t {
            return Err(fmt_err(lineno, format!("ordinate {g} above covered height {t}")));
        }
        if !(err >= 0.0 && err.is_finite()) {
            return Err(fmt_err(lineno, format!("error {err} invalid")));
        }
        zl.per_zero_error = zl.per_zero_error.max(err);
        zl.ordinates.push(g);
    }
    zl.validate().map_err(|m| fmt_err(1, m))?;
    Ok(zl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::RealPrimitiveCharacter;

    fn lf(d: i64) -> LFunction {
        LFunction::new(RealPrimitiveCharacter::new(d).unwrap()).unwrap()
    }

    /// Independent fine-grid sign scan with step 10⁻³.
    fn fine_grid_sign_changes(l: &LFunction, t_max: f64) -> Vec<f64> {
        let n = (t_max / 1e-3) as usize;
        let vals: Vec<f64> = (0..=n).into_par_iter().map(|i| l.z_function(i as f64 * 1e-3).unwrap()).collect();
        (0..n).filter(|&i| vals[i] * vals[i + 1] < 0.0).map(|i| (i as f64 + 0.5) * 1e-3).collect()
    }

    #[test]
    fn first_zeros_of_small_characters() {
        let l4 = lf(-4);
        let z4 = scan_zeros(&l4, 10.0, 0.01).unwrap();
        let fine4 = fine_grid_sign_changes(&l4, 10.0);
        assert_eq!(z4.ordinates.len(), 1);
        assert_eq!(fine4.len(), 1);
        assert!((z4.ordinates[0] - fine4[0]).abs() < 1e-3);
        assert!((z4.ordinates[0] - 6.020_948_9).abs() < 1e-6);
        assert!(z4.per_zero_error <= 1e-9);

        let l3 = lf(-3);
        let z3 = scan_zeros(&l3, 10.0, 0.01).unwrap();
        assert_eq!(z3.ordinates.len(), 1);
        assert_eq!(fine_grid_sign_changes(&l3, 10.0).len(), 1);
        assert!((z3.ordinates[0] - 8.039_737_2).abs() < 1e-6);

        let low = scan_zeros(&l4, 0.5, 0.01).unwrap();
        assert!(low.is_empty());
        assert!(fine_grid_sign_changes(&l4, 0.5).is_empty());
    }

    #[test]
    fn stored_ordinates_bracket_sign_changes() {
        let l = lf(-4);
        let zl = scan_zeros(&l, 30.0, 0.02).unwrap();
        let eps = 2.0 * zl.per_zero_error;
        for &g in &zl.ordinates {
            assert!(l.z_function(g - eps).unwrap() * l.z_function(g + eps).unwrap() < 0.0);
        }
    }

    #[test]
    fn step_precondition_enforced() {
        let l = lf(-4);
        assert!(matches!(scan_zeros(&l, 50.0, 2.0), Err(Error::Precondition(_))));
        assert!(matches!(scan_zeros(&l, 2000.0, 0.01), Err(Error::Precondition(_))));
    }

    #[test]
    fn count_check_small_heights() {
        let l = lf(-4);
        let mut zl = scan_zeros(&l, 10.0, 0.01).unwrap();
        let r = count_check(&l, &mut zl).unwrap();
        assert!(r.pass && zl.complete, "{r:?}");
        assert_eq!(r.found, 1);
        let mut empty = ZeroList::empty(-4, 0.1, Provenance::Synthetic);
        let r = count_check(&l, &mut empty).unwrap();
        assert!(r.pass);
        assert!(r.expected.abs() < 0.5);
    }

    #[test]
    fn count_check_detects_missing_zero() {
        let l = lf(-4);
        let mut zl = scan_zeros(&l, 20.0, 0.02).unwrap();
        zl.ordinates.remove(0);
        let r = count_check(&l, &mut zl).unwrap();
        assert!(!r.pass && !zl.complete);
    }

    #[test]
    fn count_check_nudges_away_from_zero() {
        let l = lf(-4);
        let mut zl = scan_zeros(&l, 10.0, 0.01).unwrap();
        let g = zl.ordinates[0];
        let mut clipped = zl.truncated(g + 1e-4);
        clipped.covered_height = g + 1e-4;
        let r = count_check(&l, &mut clipped).unwrap();
        assert!((r.height - (g + 1e-4 - 1e-2)).abs() < 1e-12);
        assert_eq!(r.found, 0);
        assert!(r.pass);
        assert!(count_check(&l, &mut zl).unwrap().pass);
    }

    #[test]
    fn lowest_zero_cases() {
        let mut zl = ZeroList::empty(-4, 10.0, Provenance::Synthetic);
        assert!(matches!(lowest_zero(&zl), Err(Error::EmptyList)));
        zl.ordinates = vec![2.0, 5.0];
        assert_eq!(lowest_zero(&zl).unwrap(), 2.0);
    }

    #[test]
    fn synthetic_b_constant_single_pair() {
        let set = SyntheticZeroSet::critical(&[2.0], None).unwrap();
        assert!((b_constant_synthetic(&set) + 4.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn synthetic_set_validation() {
        assert!(SyntheticZeroSet::new(vec![Complex64::new(1.2, 3.0)]).is_err());
        assert!(SyntheticZeroSet::new(vec![Complex64::new(0.5, -3.0)]).is_err());
        let s = SyntheticZeroSet::critical(&[3.0], Some(0.9)).unwrap();
        assert_eq!(s.real_zeros().collect::<Vec<_>>(), vec![0.9]);
        assert_eq!(s.complex_zeros().count(), 1);
    }

    #[test]
    fn csv_rejects_malformed_rows() {
        let good = "# lmono-zeros v1, d=-4, T=10, source=scanned\n-4,1,6.02,1e-9\n";
        assert_eq!(parse_zeros(good).unwrap().ordinates, vec![6.02]);
        let unsorted = "# lmono-zeros v1, d=-4, T=20, source=scanned\n-4,1,10.2,1e-9\n-4,2,6.02,1e-9\n";
        assert!(matches!(parse_zeros(unsorted), Err(Error::Format { line: 3, .. })));
        let bad_header = "d,index,ordinate,error\n";
        assert!(matches!(parse_zeros(bad_header), Err(Error::Format { line: 1, .. })));
        let cols = "# lmono-zeros v1, d=-4, T=20, source=scanned\n-4,1,6.02\n";
        assert!(matches!(parse_zeros(cols), Err(Error::Format { line: 2, .. })));
        let wrong_d = "# lmono-zeros v1, d=-4, T=20, source=scanned\n-3,1,6.02,1e-9\n";
        assert!(matches!(parse_zeros(wrong_d), Err(Error::Format { line: 2, .. })));
    }

    /// `B = −Λ'/Λ(1)`, with `L'(1)` from a five-point difference.
    fn b_oracle(l: &LFunction) -> f64 {
        let chi = l.character();
        let q = chi.modulus() as f64;
        let b = chi.parity();
        let h = 1e-3;
        let lv = |x: f64| l.evaluate(Complex64::new(x, 0.0)).unwrap().value.re;
        let dl = (lv(1.0 - 2.0 * h) - 8.0 * lv(1.0 - h) + 8.0 * lv(1.0 + h) - lv(1.0 + 2.0 * h)) / (12.0 * h);
        let psi = crate::special::digamma((1.0 + b as f64) / 2.0).unwrap();
        -(0.5 * (q / PI).ln() + 0.5 * psi + dl / lv(1.0))
    }

    #[test]
    fn b_constant_matches_functional_equation() {
        for (d, t) in [(-4, 100.0), (-3, 100.0), (5, 60.0)] {
            let l = lf(d);
            let mut zl = scan_zeros(&l, t, 0.02).unwrap();
            assert!(count_check(&l, &mut zl).unwrap().pass);
            let bc = b_constant(&l, &zl).unwrap();
            let oracle = b_oracle(&l);
            eprintln!("d={d} B={} ± {:e} oracle={oracle} partial={} tail={}", bc.value, bc.error_bound, bc.partial, bc.tail);
            assert!((bc.value - oracle).abs() <= bc.error_bound + 1e-8);
        }
    }
}
