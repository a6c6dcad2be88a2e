//! Special-function kernel: Hurwitz zeta (Euler–Maclaurin), log-gamma,
//! digamma and Gauss–Legendre rules.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sum::ComplexSum;

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_741_78;

/// `B_2, B_4, …, B_40` as (numerator, denominator).
const BERNOULLI_EVEN: [(f64, f64); 20] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
    (2577687858367.0, 6.0),
    (-26315271553053477373.0, 1919190.0),
    (2929993913841559.0, 6.0),
    (-261082718496449122051.0, 13530.0),
];

/// `B_{2j}` for `j = 1..=20`.
pub fn bernoulli_even(j: usize) -> f64 {
    let (n, d) = BERNOULLI_EVEN[j - 1];
    n / d
}

fn bernoulli_over_factorial(j: usize) -> f64 {
    let mut f = 1.0;
    for i in 1..=(2 * j) {
        f *= i as f64;
    }
    bernoulli_even(j) / f
}

const MAX_BERNOULLI_TERMS: usize = 20;
const MAX_CUTOFF: usize = 2_000_000;

/// Euler–Maclaurin parameters chosen for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurinParams {
    pub cutoff: usize,
    pub bernoulli_terms: usize,
    pub target_epsilon: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct HurwitzValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub params: EulerMaclaurinParams,
}

/// `ζ(s, a) = Σ_{n≥0} (n+a)^{-s}`, analytically continued, for `a ∈ (0, 1]`.
///
/// The returned bound covers the first omitted Bernoulli correction and an
/// estimate of the floating-point error in the direct sum; it is at most
/// `eps` or the call fails with [`Error::Precision`].
pub fn hurwitz_zeta(s: Complex64, a: f64, eps: f64) -> Result<HurwitzValue> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Hurwitz parameter a = {a} outside (0, 1]")));
    }
    hurwitz_zeta_any(s, a, eps)
}

/// As [`hurwitz_zeta`] for any `a > 0`.
pub fn hurwitz_zeta_any(s: Complex64, a: f64, eps: f64) -> Result<HurwitzValue> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Hurwitz parameter a = {a} must be positive")));
    }
    let (sigma, t) = (s.re, s.im);
    let mut cutoff = 10f64
        .max((3f64.sqrt() * t.abs() - sigma).ceil())
        .max(((s.norm() + 2.0 * MAX_BERNOULLI_TERMS as f64) / PI).ceil())
        .max(1.0 - sigma) as usize;
    loop {
        if let Some(v) = hurwitz_em(s, a, cutoff, eps) {
            return Ok(v);
        }
        cutoff = cutoff * 3 / 2 + 1;
        if cutoff > MAX_CUTOFF {
            return Err(Error::Precision(format!(
                "Hurwitz zeta at s = {s}, a = {a}: eps = {eps:e} not reached"
            )));
        }
    }
}

fn hurwitz_em(s: Complex64, a: f64, cutoff: usize, eps: f64) -> Option<HurwitzValue> {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = ComplexSum::new();
    let mut abs_mass = 0.0;
    for n in 0..cutoff {
        let x = n as f64 + a;
        let term = (-s * x.ln()).exp();
        abs_mass += term.norm() * (s.norm() * x.ln().abs() + 2.0);
        acc += term;
    }
    let x = cutoff as f64 + a;
    let lx = x.ln();
    let x_pow = (-s * lx).exp();
    acc += x_pow * x / (s - one);
    acc += x_pow * 0.5;
    abs_mass += x_pow.norm() * (x / (s - one).norm() + 1.0) * (s.norm() * lx + 2.0);
    let rounding = abs_mass * f64::EPSILON;

    // poch = s (s+1) … (s+2j-2); power = x^{-s-2j+1}
    let mut poch = s;
    let mut power = x_pow / x;
    let x2 = x * x;
    for j in 1..=MAX_BERNOULLI_TERMS {
        let term = poch * power * bernoulli_over_factorial(j);
        acc += term;
        let next_poch = poch * (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        let next_power = power / x2;
        let next = if j < MAX_BERNOULLI_TERMS {
            (next_poch * next_power * bernoulli_over_factorial(j + 1)).norm()
        } else {
            // |B_{2J+2}/(2J+2)!| ≈ 2 (2π)^{-2J-2}
            next_poch.norm() * next_power.norm() * 2.0 / (2.0 * PI).powi(2 * j as i32 + 2)
        };
        let damp = (s + (2 * j + 1) as f64).norm() / (s.re + (2 * j + 1) as f64).max(1e-300);
        let trunc = next * damp;
        if trunc + rounding <= eps {
            return Some(HurwitzValue {
                value: acc.sum(),
                error_bound: trunc + rounding,
                params: EulerMaclaurinParams {
                    cutoff,
                    bernoulli_terms: j,
                    target_epsilon: eps,
                },
            });
        }
        if next > term.norm() && j > 2 {
            return None;
        }
        poch = next_poch;
        power = next_power;
    }
    None
}

/// Principal (continuous) branch of `log Γ(z)` for `Re z > 0`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("log_gamma needs Re z > 0, got {z}")));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let mut series = Complex64::new(0.0, 0.0);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    for j in 1..=10 {
        let n = 2.0 * j as f64;
        series += p * (bernoulli_even(j) / (n * (n - 1.0)));
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_2PI_HALF + series
}

/// `ψ(z) = Γ'/Γ(z)` for `Re z > 0`.
pub fn digamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("digamma needs Re z > 0, got {z}")));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 12.0 {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for j in 1..=10 {
        series += p * (bernoulli_even(j) / (2.0 * j as f64));
        p *= inv2;
    }
    Ok(w.ln() - inv * 0.5 - series - shift)
}

/// Real digamma for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    Ok(digamma_complex(Complex64::new(x, 0.0))?.re)
}

/// `(1/2) Γ'/Γ((s+b)/2)`.
pub fn digamma_half(s: f64, b: u8) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("digamma_half needs s > 0, got {s}")));
    }
    Ok(0.5 * digamma((s + b as f64) / 2.0)?)
}

/// Trivial-zero block `Σ (1/(s+b+2n) − 1/(b+2n))` of the gamma-factor
/// log-derivative (terms with `b+2n = 0` omitted), via digamma.
pub fn trivial_zero_block(s: f64, b: u8) -> Result<f64> {
    let half = digamma_half(s, b)?;
    Ok(match b {
        0 => -half - EULER_GAMMA / 2.0 - 1.0 / s,
        _ => -half - std::f64::consts::LN_2 - EULER_GAMMA / 2.0,
    })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}
