//! Derivatives `F^(k)(s) = d^k/ds^k log L(s,χ)` for real `s`: the von
//! Mangoldt series, a Cauchy-integral evaluation that needs no zeros, the
//! sum over zeros, and the normalized dominant-pair form.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::characters::{PrimeSieve, RealPrimitiveCharacter};
use crate::error::{Error, Result};
use crate::lfunction::LFunction;
use crate::special::{hurwitz_zeta_any, log_gamma, trivial_zero_block, EULER_GAMMA};
use crate::sum::{ComplexSum, NeumaierSum};
use crate::zeros::{CountingModel, SyntheticZeroSet, ZeroList};

pub const SERIES_FLOOR: f64 = 1.2;
pub const SERIES_MAX_K: u32 = 64;
pub const SERIES_CAP: u64 = 100_000_000;
/// Largest cutoff [`f_deriv_independent`] will sieve before switching to the contour.
pub const INDEPENDENT_BUDGET: u64 = 20_000_000;
/// Above this order `(k−1)!` overflows and values are kept as log-magnitude and sign.
pub const RAW_MAX_K: u32 = 170;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Contour,
    ZeroSum,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeValue {
    pub k: u32,
    pub s: f64,
    /// Raw value; `±inf` when it exceeds the double range.
    pub value: f64,
    pub error_bound: f64,
    /// `ln |value|`, always finite unless the value is zero.
    pub ln_abs: f64,
    pub sign: i8,
    /// `error_bound / |value|`.
    pub rel_error: f64,
    pub method: Method,
    /// Dirichlet-series cutoff, contour nodes, or stored zeros used.
    pub terms: u64,
}

impl DerivativeValue {
    /// A value held directly, with its log-magnitude fields filled in.
    pub fn raw(k: u32, s: f64, value: f64, error_bound: f64, method: Method, terms: u64) -> Self {
        Self {
            k,
            s,
            value,
            error_bound,
            ln_abs: value.abs().ln(),
            sign: sign_of(value),
            rel_error: error_bound / value.abs(),
            method,
            terms,
        }
    }

    fn scaled(k: u32, s: f64, ln_abs: f64, sign: i8, rel_error: f64, method: Method, terms: u64) -> Self {
        let value = sign as f64 * ln_abs.exp();
        Self {
            k,
            s,
            value,
            error_bound: rel_error * value.abs(),
            ln_abs,
            sign,
            rel_error,
            method,
            terms,
        }
    }

    /// True when the raw value and bound fit in a double.
    pub fn is_raw(&self) -> bool {
        self.value.is_finite() && self.error_bound.is_finite()
    }
}

fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn ln_factorial(n: u32) -> f64 {
    log_gamma(Complex64::new(n as f64 + 1.0, 0.0)).map(|z| z.re).unwrap_or(f64::INFINITY)
}

/// `ln ∫_N^∞ (log x)^k x^{−s} dx` with `L = ln N`.
fn ln_tail_integral(s: f64, k: u32, big_l: f64) -> f64 {
    let ln_k_fact = ln_factorial(k);
    let ln_sm1 = (s - 1.0).ln();
    let terms: Vec<f64> = (0..=k)
        .map(|j| {
            let lj = if j == 0 { 0.0 } else { j as f64 * big_l.ln() };
            ln_k_fact - ln_factorial(j) + lj - (k + 1 - j) as f64 * ln_sm1
        })
        .collect();
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (1.0 - s) * big_l + m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Smallest cutoff `N` whose integral tail is at most `eps`; `Err(needed)` past the cap.
pub fn series_cutoff(s: f64, k: u32, eps: f64, cap: u64) -> std::result::Result<u64, f64> {
    let target = eps.ln();
    // the majorant is decreasing once log N ≥ k/s
    let mut lo = (k as f64 / s).max(LN_2);
    if ln_tail_integral(s, k, lo) <= target {
        return Ok(lo.exp().ceil() as u64);
    }
    let mut hi = lo * 2.0;
    while ln_tail_integral(s, k, hi) > target {
        lo = hi;
        hi *= 2.0;
        if hi > 200.0 {
            return Err(f64::INFINITY);
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if ln_tail_integral(s, k, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n = hi.exp().ceil();
    if n > cap as f64 {
        Err(n)
    } else {
        Ok(n as u64)
    }
}

/// `F^(k)(s)` from `(−1)^k F^(k) = Σ χ(n)Λ(n)(log n)^{k−1} n^{−s}`
/// (for `k = 0`, `Λ(n)/log n`), truncated where the integral tail is `≤ eps`.
pub fn f_deriv_series(chi: &RealPrimitiveCharacter, s: f64, k: u32, eps: f64) -> Result<DerivativeValue> {
    if !(s >= SERIES_FLOOR) {
        return Err(Error::Domain(format!("series needs s ≥ {SERIES_FLOOR}, got {s}")));
    }
    if k > SERIES_MAX_K {
        return Err(Error::Domain(format!("series needs k ≤ {SERIES_MAX_K}, got {k}")));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let n = series_cutoff(s, k, eps, SERIES_CAP).map_err(|needed| Error::Convergence {
        needed,
        cap: SERIES_CAP as f64,
    })?;
    let sieve = PrimeSieve::new(n);
    let mut acc = NeumaierSum::new();
    let mut magnitude = 0.0;
    for (pm, p) in sieve.prime_powers() {
        let c = chi.value(p);
        if c == 0 {
            continue;
        }
        let ln_p = (p as f64).ln();
        let ln_n = (pm as f64).ln();
        let m = (ln_n / ln_p).round() as i32;
        let chi_n = if c < 0 && m % 2 == 1 { -1.0 } else { 1.0 };
        let weight = if k == 0 { 1.0 / m as f64 } else { ln_p * ln_n.powi(k as i32 - 1) };
        let term = weight * (-s * ln_n).exp();
        magnitude += term;
        acc += chi_n * term;
    }
    let value = if k % 2 == 0 { acc.sum() } else { -acc.sum() };
    let error_bound = ln_tail_integral(s, k, (n as f64).ln()).exp() + 4.0 * f64::EPSILON * magnitude;
    Ok(DerivativeValue::raw(k, s, value, error_bound, Method::Series, n))
}

const CONTOUR_NODES: usize = 256;

/// `F^(k)(s)` as `k!/(2πi) ∮ log L(z) (z−s)^{−k−1} dz` on the circle of
/// radius `0.7(s − 1/2)` about `s`, by the trapezoid rule with 256 nodes;
/// the 128-node rule gives the discretization estimate. The circle's
/// winding number certifies that `log L` is analytic inside.
pub fn f_deriv_contour(lf: &LFunction, s: f64, k: u32) -> Result<DerivativeValue> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("contour evaluation needs s > 1, got {s}")));
    }
    if k > RAW_MAX_K {
        return Err(Error::Overflow(k));
    }
    let r = 0.7 * (s - 0.5);
    let m = CONTOUR_NODES;
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| s + Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
        .collect();
    let points: Vec<(Complex64, f64)> = nodes
        .par_iter()
        .map(|&z| lf.evaluate(z).map(|p| (p.value, p.error_bound)))
        .collect::<Result<_>>()?;
    let mut logs = Vec::with_capacity(m);
    let mut arg = points[0].0.arg();
    let mut log_err: f64 = 0.0;
    for (j, &(v, e)) in points.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(Error::Contour(format!("L vanishes at {}", nodes[j])));
        }
        if j > 0 {
            let step = (v / points[j - 1].0).arg();
            if step.abs() > PI / 2.0 {
                return Err(Error::Contour(format!("argument jump at {}", nodes[j])));
            }
            arg += step;
        }
        logs.push(Complex64::new(v.norm().ln(), arg));
        log_err = log_err.max(e / v.norm());
    }
    let closing = arg + (points[0].0 / points[m - 1].0).arg() - points[0].0.arg();
    if closing.abs() > PI {
        return Err(Error::Contour(format!("L has zeros within {r} of {s}")));
    }
    let coefficient = |stride: usize| -> f64 {
        let count = m / stride;
        let mut acc = ComplexSum::new();
        for j in (0..m).step_by(stride) {
            let phi = 2.0 * PI * j as f64 / m as f64;
            acc += logs[j] * Complex64::from_polar(1.0, -(k as f64) * phi);
        }
        acc.sum().re / count as f64
    };
    let scale = (ln_factorial(k) - k as f64 * r.ln()).exp();
    let fine = scale * coefficient(1);
    let coarse = scale * coefficient(2);
    let error_bound = (fine - coarse).abs() + scale * (log_err + 1e-15 * logs.iter().map(|l| l.norm()).fold(0.0, f64::max));
    Ok(DerivativeValue::raw(k, s, fine, error_bound, Method::Contour, m as u64))
}

/// Zero-free evaluation: the series when its cutoff is at most
/// [`INDEPENDENT_BUDGET`], otherwise the contour.
pub fn f_deriv_independent(lf: &LFunction, s: f64, k: u32, eps: f64) -> Result<DerivativeValue> {
    if s >= SERIES_FLOOR && k <= SERIES_MAX_K && series_cutoff(s, k, eps, INDEPENDENT_BUDGET).is_ok() {
        f_deriv_series(lf.character(), s, k, eps)
    } else {
        f_deriv_contour(lf, s, k)
    }
}

/// Zeros in the form the zero sums consume: upper-half-plane zeros,
/// real zeros, the trivial zeros `−b−2n` when attached to a character, and
/// the counting model above the covered height.
#[derive(Debug, Clone)]
pub struct ZeroSource {
    upper: Vec<Complex64>,
    real: Vec<f64>,
    parity: Option<u8>,
    model: Option<CountingModel>,
    modulus: u64,
    height: f64,
    per_zero_error: f64,
}

impl ZeroSource {
    /// From a verified list of critical-line ordinates.
    pub fn from_list(lf: &LFunction, zl: &ZeroList) -> Result<Self> {
        if zl.discriminant != lf.character().discriminant() {
            return Err(Error::Precondition(format!(
                "zero list is for d={}, not d={}",
                zl.discriminant,
                lf.character().discriminant()
            )));
        }
        let model = CountingModel::new(lf, zl)?;
        Ok(Self {
            upper: zl.ordinates.iter().map(|&g| Complex64::new(0.5, g)).collect(),
            real: Vec::new(),
            parity: Some(lf.character().parity()),
            model: Some(model),
            modulus: lf.character().modulus(),
            height: zl.covered_height,
            per_zero_error: zl.per_zero_error,
        })
    }

    /// Exactly the given zeros: no trivial zeros and no tail.
    pub fn synthetic(set: &SyntheticZeroSet) -> Self {
        Self {
            upper: set.complex_zeros().collect(),
            real: set.real_zeros().collect(),
            parity: None,
            model: None,
            modulus: 1,
            height: f64::INFINITY,
            per_zero_error: 0.0,
        }
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn real(&self) -> &[f64] {
        &self.real
    }

    pub fn parity(&self) -> Option<u8> {
        self.parity
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn is_synthetic(&self) -> bool {
        self.model.is_none()
    }

    /// Adds a real zero `β` (a hypothetical exceptional zero).
    pub fn with_real_zero(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Precondition(format!("real zero {beta} outside (0, 1)")));
        }
        self.real.push(beta);
        Ok(self)
    }

    /// Distance from `s` to every zero kind, as `(distance, zero)` with the
    /// zero in the closed upper half plane; trivial zeros contribute `−b`.
    fn candidates(&self, s: f64) -> Vec<(f64, Complex64)> {
        let mut v: Vec<(f64, Complex64)> = self.upper.iter().map(|&z| ((s - z).norm(), z)).collect();
        v.extend(self.real.iter().map(|&b| ((s - b).abs(), Complex64::new(b, 0.0))));
        if let Some(b) = self.parity {
            v.push((s + b as f64, Complex64::new(-(b as f64), 0.0)));
        }
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }

    /// `l(s)`, the distance from `s` to the nearest zero of any kind.
    pub fn nearest_distance(&self, s: f64) -> Result<f64> {
        let c = self.candidates(s);
        let d = c.first().map(|c| c.0).ok_or(Error::EmptyList)?;
        self.check_height(s, d)?;
        Ok(d)
    }

    fn check_height(&self, s: f64, d: f64) -> Result<()> {
        let floor = (Complex64::new(s - 0.5, self.height)).norm();
        if self.model.is_some() && d >= floor {
            return Err(Error::Height(format!(
                "zeros above T = {} could be within {d} of s = {s}",
                self.height
            )));
        }
        Ok(())
    }

    /// `Σ_{γ>T} |w(γ)|` for `w = 2 (r/(a−iγ))^k`, from the zero-counting
    /// function with an explicit remainder.
    fn tail_majorant(&self, s: f64, k: u32, r: f64) -> f64 {
        if self.model.is_none() {
            return 0.0;
        }
        let t = self.height;
        let q = self.modulus as f64;
        let a = s - 0.5;
        let ratio = r / Complex64::new(a, t).norm();
        let density = ((q * t / (2.0 * PI)).ln() + 1.0) / (2.0 * PI * t)
            + 2.0 * (0.5 * (q * (t + 2.0)).ln() + 7.5) / (t * t);
        2.0 * ratio.powi(k as i32 - 2) * r * r * density
    }

    /// `Σ_{γ>T} 2 Re (r/(a−iγ))^k` estimated from the counting model.
    fn tail_sum(&self, s: f64, k: u32, r: f64) -> Result<(f64, f64)> {
        let Some(model) = &self.model else { return Ok((0.0, 0.0)) };
        let bound = self.tail_majorant(s, k, r);
        if bound < 1e-30 {
            return Ok((0.0, bound));
        }
        let a = s - 0.5;
        let kf = k as f64;
        let est = model.tail(|t| {
            let z = Complex64::new(a, -t);
            let p = (r / z).powf(kf);
            (
                2.0 * p.re,
                2.0 * (Complex64::new(0.0, kf) / z * p).re,
                -2.0 * (kf * (kf + 1.0) * p / (z * z)).re,
            )
        })?;
        Ok((est.value, est.error_bound.min(bound)))
    }
}

/// `Σ_{n≥0} (r/(s+b+2n))^k` with an error bound.
fn trivial_scaled(s: f64, b: u8, k: u32, r: f64) -> Result<(f64, f64)> {
    let x0 = s + b as f64;
    if k <= 20 {
        let a = x0 / 2.0;
        let size = a.powi(-(k as i32)) + a.powi(1 - k as i32) / (k as f64 - 1.0);
        let eps = 1e-12 * size;
        let h = hurwitz_zeta_any(Complex64::new(k as f64, 0.0), a, eps)?;
        let scale = (r / 2.0).powi(k as i32);
        return Ok((scale * h.value.re, scale * (h.error_bound + 1e-15 * h.value.norm())));
    }
    let kf = k as f64;
    let mut acc = NeumaierSum::new();
    let mut n = 0u64;
    loop {
        let x = x0 + 2.0 * n as f64;
        let term = (kf * (r / x).ln()).exp();
        if term < 1e-30 * (kf * (r / x0).ln()).exp().max(1e-300) || term == 0.0 {
            // Σ_{m≥n} x_m^{−k} ≤ x_n^{−k}(1 + x_n/(2(k−1)))
            let rest = term * (1.0 + x / (2.0 * (kf - 1.0)));
            let total = acc.sum();
            return Ok((total, rest + 1e-15 * total));
        }
        acc += term;
        n += 1;
    }
}

/// `F′(s)` from the explicit formula
/// `−½log(q/π) + b log 2 + γ/2 + B + (1−b)/s + Σ_ρ (1/(s−ρ) + 1/ρ)`,
/// trivial zeros through digamma and the nontrivial tail from the counting model.
pub fn f_prime_formula(lf: &LFunction, s: f64, zl: &ZeroList) -> Result<DerivativeValue> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("f_prime_formula needs s > 1, got {s}")));
    }
    let chi = lf.character();
    let q = chi.modulus() as f64;
    let b = chi.parity();
    let bc = crate::zeros::b_constant(lf, zl)?;
    let model = CountingModel::new(lf, zl)?;
    let a = s - 0.5;
    let mut pairs = ComplexSum::new();
    for &g in &zl.ordinates {
        let rho = Complex64::new(0.5, g);
        pairs += 1.0 / (s - rho) + 1.0 / rho;
        pairs += 1.0 / (s - rho.conj()) + 1.0 / rho.conj();
    }
    let pairs = pairs.sum();
    if pairs.im.abs() > 1e-12 {
        return Err(Error::Precision(format!("pair sum has imaginary residue {:e}", pairs.im)));
    }
    // Σ_{γ>T} 2Re(1/(s−ρ) + 1/ρ); the 1/ρ part cancels the tail inside B
    let tail = model.tail(|t| {
        let d1 = a * a + t * t;
        let d0 = 0.25 + t * t;
        (
            2.0 * a / d1 + 1.0 / d0,
            -4.0 * a * t / (d1 * d1) - 2.0 * t / (d0 * d0),
            2.0 * a * (6.0 * t * t - 2.0 * a * a) / (d1 * d1 * d1) + (6.0 * t * t - 0.5) / (d0 * d0 * d0),
        )
    })?;
    let combined_bound = model
        .tail(|t| {
            let d1 = a * a + t * t;
            (
                2.0 * a / d1,
                -4.0 * a * t / (d1 * d1),
                2.0 * a * (6.0 * t * t - 2.0 * a * a) / (d1 * d1 * d1),
            )
        })?
        .error_bound;
    if combined_bound > 1e-4 {
        return Err(Error::Tail(format!("combined zero tail bound {combined_bound:e} exceeds 1e-4")));
    }
    let mut total = NeumaierSum::new();
    total += -0.5 * (q / PI).ln();
    total += b as f64 * LN_2;
    total += EULER_GAMMA / 2.0;
    total += bc.value;
    total += (1.0 - b as f64) / s;
    total += trivial_zero_block(s, b)?;
    total += pairs.re;
    total += tail.value;
    let ordinate_err: f64 = zl
        .ordinates
        .iter()
        .map(|&g| 4.0 * a * g / (a * a + g * g).powi(2) * zl.per_zero_error)
        .sum();
    let error_bound = combined_bound + ordinate_err + 1e-14;
    Ok(DerivativeValue::raw(1, s, total.sum(), error_bound, Method::Formula, zl.len() as u64))
}

/// `F^(k)(s) = (−1)^{k−1}(k−1)! Σ_ρ (s−ρ)^{−k}` over all zeros, `k ≥ 2`.
/// Computed as `r^{−k} Σ (r/(s−ρ))^k` with `r = l(s)`, so large `k` stays in range.
pub fn f_deriv_zerosum(source: &ZeroSource, s: f64, k: u32) -> Result<DerivativeValue> {
    if k < 2 {
        return Err(Error::Domain(format!("zero sum needs k ≥ 2, got {k}")));
    }
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zero sum needs s > 1, got {s}")));
    }
    let r = source.nearest_distance(s)?;
    let kf = k as f64;
    let mut acc = NeumaierSum::new();
    let mut magnitude = 0.0;
    let mut ordinate_err = 0.0;
    for &z in &source.upper {
        let w = s - z;
        let ln_ratio = (r / w.norm()).ln();
        let m = (kf * ln_ratio).exp();
        if m == 0.0 {
            continue;
        }
        let term = 2.0 * m * (kf * w.arg()).cos();
        acc += term;
        magnitude += 2.0 * m;
        ordinate_err += 2.0 * m * kf / w.norm() * source.per_zero_error;
    }
    for &beta in &source.real {
        let m = (r / (s - beta)).powf(kf);
        acc += m;
        magnitude += m;
    }
    let mut extra_err = 0.0;
    if let Some(b) = source.parity {
        let (v, e) = trivial_scaled(s, b, k, r)?;
        acc += v;
        magnitude += v;
        extra_err += e;
    }
    let (tail, tail_err) = source.tail_sum(s, k, r)?;
    acc += tail;
    extra_err += tail_err;
    let scaled = acc.sum();
    let scaled_err = extra_err + ordinate_err + 4.0 * f64::EPSILON * magnitude;
    let sign = if k % 2 == 1 { sign_of(scaled) } else { -sign_of(scaled) };
    let ln_abs = ln_factorial(k - 1) - kf * r.ln() + scaled.abs().ln();
    let terms = source.upper.len() as u64;
    Ok(DerivativeValue::scaled(k, s, ln_abs, sign, scaled_err / scaled.abs(), Method::ZeroSum, terms))
}

/// Nearest zero, second-nearest non-conjugate zero, and their distance ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaReport {
    pub rho0: Complex64,
    /// `None` when the source holds a single zero (η is then 0).
    pub rho_tilde: Option<Complex64>,
    pub eta: f64,
}

const TIE_TOLERANCE: f64 = 1e-12;

pub fn eta_at(source: &ZeroSource, s: f64) -> Result<EtaReport> {
    let c = source.candidates(s);
    let (d0, rho0) = *c.first().ok_or(Error::EmptyList)?;
    if c.len() == 1 {
        source.check_height(s, d0)?;
        return Ok(EtaReport {
            rho0,
            rho_tilde: None,
            eta: 0.0,
        });
    }
    let (d1, rho_tilde) = c[1];
    if (d1 - d0).abs() <= TIE_TOLERANCE {
        return Err(Error::Tie {
            s,
            suggest_lo: s - 1e-6,
            suggest_hi: s + 1e-6,
        });
    }
    source.check_height(s, d1)?;
    Ok(EtaReport {
        rho0,
        rho_tilde: Some(rho_tilde),
        eta: d0 / d1,
    })
}

/// `g = 2cos(kθ_s) + f(s)` where
/// `F^(k)(s) = (−1)^{k−1}(k−1)! r_s^{−k} g`, with `s − ρ₀ = r_s e^{−iθ_s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedValue {
    pub k: u32,
    pub s: f64,
    pub g: f64,
    pub cos_term: f64,
    /// Majorant for `|f(s)|`.
    pub f_bound: f64,
    /// Numerical uncertainty of `g` itself.
    pub g_error: f64,
    pub r_s: f64,
    pub theta_s: f64,
}

impl NormalizedValue {
    /// `±1` when `|g|` clears the majorant, so its sign is that of `2cos(kθ_s)`.
    pub fn definite_sign(&self) -> Option<i8> {
        (self.g.abs() > self.f_bound + self.g_error).then(|| sign_of(self.g))
    }

    /// Sign of `F^(k)` implied by a definite `g`.
    pub fn derivative_sign(&self) -> Option<i8> {
        self.definite_sign().map(|sg| if self.k % 2 == 1 { sg } else { -sg })
    }
}

/// Per-`s` data for evaluating [`NormalizedValue`] at many `k`.
#[derive(Debug, Clone)]
pub struct NormalizedContext<'a> {
    source: &'a ZeroSource,
    s: f64,
    rho0: Complex64,
    r: f64,
    theta: f64,
    /// `(ln(r/|s−ρ|), arg(s−ρ), multiplicity)`, nearest first.
    others: Vec<(f64, f64, f64)>,
}

impl<'a> NormalizedContext<'a> {
    pub fn new(source: &'a ZeroSource, s: f64) -> Result<Self> {
        let eta = eta_at(source, s)?;
        let rho0 = eta.rho0;
        if rho0.im <= 0.0 {
            return Err(Error::Precondition(format!(
                "nearest zero to s = {s} is real ({rho0}); s must exceed c_χ"
            )));
        }
        let w0 = s - rho0;
        let r = w0.norm();
        let mut others: Vec<(f64, f64, f64)> = source
            .upper
            .iter()
            .filter(|&&z| z != rho0)
            .map(|&z| {
                let w = s - z;
                ((r / w.norm()).ln(), w.arg(), 2.0)
            })
            .collect();
        others.extend(source.real.iter().map(|&b| ((r / (s - b)).ln(), 0.0, 1.0)));
        others.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(Self {
            source,
            s,
            rho0,
            r,
            theta: rho0.im.atan2(s - rho0.re),
            others,
        })
    }

    pub fn rho0(&self) -> Complex64 {
        self.rho0
    }

    pub fn r_s(&self) -> f64 {
        self.r
    }

    pub fn theta_s(&self) -> f64 {
        self.theta
    }

    pub fn eval(&self, k: u32) -> Result<NormalizedValue> {
        if k < 2 {
            return Err(Error::Domain(format!("normalized form needs k ≥ 2, got {k}")));
        }
        let kf = k as f64;
        let mut f = NeumaierSum::new();
        let mut majorant = 0.0;
        let mut ordinate_err = 0.0;
        let mut skipped = 0.0;
        for (i, &(ln_ratio, angle, mult)) in self.others.iter().enumerate() {
            let m = (kf * ln_ratio).exp();
            if m < 1e-30 {
                // sorted: every later term is smaller still
                skipped = m * self.others[i..].iter().map(|o| o.2).sum::<f64>();
                break;
            }
            f += mult * m * (kf * angle).cos();
            majorant += mult * m;
            ordinate_err += mult * m * kf * (-ln_ratio).exp() / self.r * self.source.per_zero_error;
        }
        let mut g_error = skipped;
        majorant += skipped;
        if let Some(b) = self.source.parity {
            let (v, e) = trivial_scaled(self.s, b, k, self.r)?;
            f += v;
            majorant += v + e;
            g_error += e;
        }
        let tail_bound = self.source.tail_majorant(self.s, k, self.r);
        if self.source.model.is_some() {
            let (v, e) = self.source.tail_sum(self.s, k, self.r)?;
            f += v;
            g_error += e;
        }
        majorant += tail_bound;
        let cos_term = 2.0 * (kf * self.theta).cos();
        let f = f.sum();
        // θ inherits the ordinate error of ρ₀, amplified k-fold in the cosine
        let theta_err = self.source.per_zero_error * (self.s - self.rho0.re) / (self.r * self.r)
            + self.theta * f64::EPSILON;
        g_error += ordinate_err + 2.0 * kf * theta_err + 4.0 * f64::EPSILON * (2.0 + majorant);
        Ok(NormalizedValue {
            k,
            s: self.s,
            g: cos_term + f,
            cos_term,
            f_bound: majorant,
            g_error,
            r_s: self.r,
            theta_s: self.theta,
        })
    }
}

pub fn g_normalized(source: &ZeroSource, s: f64, k: u32) -> Result<NormalizedValue> {
    NormalizedContext::new(source, s)?.eval(k)
}
