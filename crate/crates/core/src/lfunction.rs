//! `L(s, χ)` through the Hurwitz decomposition, the completed function and
//! the rotated critical-line function `Z(t)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::characters::RealPrimitiveCharacter;
use crate::error::{Error, Result};
use crate::special::{digamma, hurwitz_zeta, log_gamma};
use crate::sum::{ComplexSum, NeumaierSum};

pub const MAX_HEIGHT: f64 = 1.0e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LPoint {
    pub s: Complex64,
    pub value: Complex64,
    pub error_bound: f64,
}

/// Evaluate `L(s, χ) = q^{-s} Σ_{a=1}^{q} χ(a) ζ(s, a/q)`.
pub fn evaluate_l(chi: &RealPrimitiveCharacter, s: Complex64) -> Result<LPoint> {
    if s.im.abs() > MAX_HEIGHT {
        return Err(Error::Precision(format!("|Im s| = {} above supported height", s.im.abs())));
    }
    let q = chi.modulus() as f64;
    if s == Complex64::new(1.0, 0.0) {
        return value_at_one(chi);
    }
    let base = 1e-12 * (s.im.abs() / 50.0).powi(2).max(1.0);
    let mut acc = ComplexSum::new();
    let mut err = 0.0;
    for (a, x) in chi.period() {
        if x == 0 {
            continue;
        }
        let alpha = a as f64 / q;
        let eps = base * alpha.powf(-s.re).max(1.0);
        let h = hurwitz_zeta(s, alpha, eps)?;
        acc += h.value * x as f64;
        err += h.error_bound;
    }
    let scale = (-s * q.ln()).exp();
    Ok(LPoint {
        s,
        value: scale * acc.sum(),
        error_bound: scale.norm() * err,
    })
}

/// `L(1, χ) = -(1/q) Σ χ(a) ψ(a/q)`: the poles of the Hurwitz terms cancel.
fn value_at_one(chi: &RealPrimitiveCharacter) -> Result<LPoint> {
    let q = chi.modulus() as f64;
    let mut acc = NeumaierSum::new();
    for (a, x) in chi.period() {
        if x != 0 {
            acc += x as f64 * digamma(a as f64 / q)?;
        }
    }
    Ok(LPoint {
        s: Complex64::new(1.0, 0.0),
        value: Complex64::new(-acc.sum() / q, 0.0),
        error_bound: 1e-14 * q,
    })
}

/// `L(s, χ)` bundled with the calibrated rotation phase of `Z(t)`.
#[derive(Debug, Clone)]
pub struct LFunction {
    chi: RealPrimitiveCharacter,
    phase: f64,
}

const CALIBRATION_HEIGHTS: [f64; 6] = [2.3, 4.1, 7.3, 11.9, 17.2, 23.5];
const PHASE_TOLERANCE: f64 = 1e-6;

impl LFunction {
    /// Builds the evaluator and fixes the rotation phase by minimizing the
    /// imaginary residue of `e^{iϑ(t)} L(1/2+it)` at a few heights.
    pub fn new(chi: RealPrimitiveCharacter) -> Result<Self> {
        let mut this = Self { chi, phase: 0.0 };
        let mut angles = Vec::new();
        for &t in &CALIBRATION_HEIGHTS {
            let w = this.rotated(t)?;
            if w.norm() > 1e-3 {
                let mut a = w.arg();
                while a > PI / 2.0 {
                    a -= PI;
                }
                while a <= -PI / 2.0 {
                    a += PI;
                }
                angles.push(a);
            }
        }
        if angles.is_empty() {
            return Err(Error::Phase { t: 0.0, residue: f64::NAN });
        }
        let mean = angles.iter().sum::<f64>() / angles.len() as f64;
        this.phase = -mean;
        Ok(this)
    }

    pub fn character(&self) -> &RealPrimitiveCharacter {
        &self.chi
    }

    /// The calibrated constant added to `ϑ(t)`; zero for root number `+1`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn evaluate(&self, s: Complex64) -> Result<LPoint> {
        evaluate_l(&self.chi, s)
    }

    fn b(&self) -> f64 {
        self.chi.parity() as f64
    }

    /// `((s+b)/2) log(q/π) + log Γ((s+b)/2)`, the log of the gamma factor.
    pub fn log_gamma_factor(&self, s: Complex64) -> Result<Complex64> {
        let half = (s + self.b()) / 2.0;
        let q = self.chi.modulus() as f64;
        Ok(half * (q / PI).ln() + log_gamma(half)?)
    }

    /// `Λ(s, χ) = (q/π)^{(s+b)/2} Γ((s+b)/2) L(s, χ)` for `Re s > -b`.
    pub fn completed_lambda(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.log_gamma_factor(s)?.exp() * self.evaluate(s)?.value)
    }

    /// `ϑ(t) = (t/2) log(q/π) + Im log Γ((1/2 + b + it)/2)`, with `ϑ(0) = 0`.
    pub fn theta(&self, t: f64) -> Result<f64> {
        Ok(self.log_gamma_factor(Complex64::new(0.5, t))?.im)
    }

    /// `ϑ'(t) = (1/2) log(q/π) + (1/2) Re ψ((1/2 + b + it)/2)`.
    pub fn theta_prime(&self, t: f64) -> Result<f64> {
        let q = self.chi.modulus() as f64;
        let z = Complex64::new((0.5 + self.b()) / 2.0, t / 2.0);
        Ok(0.5 * (q / PI).ln() + 0.5 * crate::special::digamma_complex(z)?.re)
    }

    fn rotated(&self, t: f64) -> Result<Complex64> {
        let l = self.evaluate(Complex64::new(0.5, t))?.value;
        let th = self.theta(t)? + self.phase;
        Ok(Complex64::from_polar(1.0, th) * l)
    }

    /// Real-valued `Z(t)` with `|Z(t)| = |L(1/2+it, χ)|`.
    pub fn z_function(&self, t: f64) -> Result<f64> {
        if t.abs() > MAX_HEIGHT {
            return Err(Error::Precision(format!("|t| = {} above supported height", t.abs())));
        }
        let w = self.rotated(t)?;
        let residue = w.im.abs();
        if residue > PHASE_TOLERANCE * w.norm().max(1.0) {
            return Err(Error::Phase { t, residue });
        }
        Ok(w.re)
    }

    /// Checks `L(σ, χ) > 0` on a grid of `σ ∈ (0, 1]`, the hypothesis that
    /// `L` has no real zero in the critical strip.
    pub fn real_segment_positive(&self) -> Result<bool> {
        for i in 1..=200 {
            let sigma = i as f64 / 200.0;
            if self.evaluate(Complex64::new(sigma, 0.0))?.value.re <= 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
