//! Forward model of the notch-type transmission coefficient.
//!
//! A resonator side-coupled to a feed line produces
//!
//! ```text
//! S21(f) = a e^{i alpha} e^{-2 pi i f tau}
//!          [ 1 - (Q_L / |Q_e|) e^{i phi} / (1 + 2 i Q_L (f / f_r - 1)) ]
//! ```
//!
//! where `a`, `alpha`, `tau` describe the electromagnetic environment
//! (line attenuation, global phase, electric delay) and `phi` the impedance
//! mismatch. For `tau = 0` the locus over frequency is a circle of diameter
//! `a Q_L / |Q_e|` through the off-resonant point `a e^{i alpha}`.
//!
//! Several resonators multiplexed on one feed line combine as a product of
//! bracket terms under a single shared environment factor, which is accurate
//! for resonances separated by many linewidths.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::FrequencyTrace;

/// Parameters of a single notch resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchParams {
    /// Resonance frequency (Hz).
    pub f_r: f64,
    /// Loaded quality factor.
    pub q_loaded: f64,
    /// Magnitude of the external quality factor.
    pub q_ext_mag: f64,
    /// Impedance-mismatch rotation (rad).
    pub phi: f64,
    /// Environment amplitude.
    pub amplitude: f64,
    /// Environment phase (rad).
    pub alpha: f64,
    /// Electric delay (s).
    pub delay: f64,
}

impl NotchParams {
    pub fn new(
        f_r: f64,
        q_loaded: f64,
        q_ext_mag: f64,
        phi: f64,
        amplitude: f64,
        alpha: f64,
        delay: f64,
    ) -> Result<Self> {
        let p = NotchParams {
            f_r,
            q_loaded,
            q_ext_mag,
            phi,
            amplitude,
            alpha,
            delay,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("f_r", self.f_r),
            ("Q_L", self.q_loaded),
            ("|Q_e|", self.q_ext_mag),
            ("amplitude", self.amplitude),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [
            ("phi", self.phi),
            ("alpha", self.alpha),
            ("delay", self.delay),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        if self.internal_loss() <= 0.0 {
            return Err(Error::Domain(format!(
                "parameters imply a non-positive internal quality factor \
                 (1/Q_L = {:.3e} must exceed cos(phi)/|Q_e| = {:.3e})",
                1.0 / self.q_loaded,
                self.phi.cos() / self.q_ext_mag
            )));
        }
        Ok(())
    }

    fn internal_loss(&self) -> f64 {
        1.0 / self.q_loaded - self.phi.cos() / self.q_ext_mag
    }

    /// Internal quality factor in the diameter-correction convention,
    /// `1/Q_i = 1/Q_L - cos(phi)/|Q_e|`.
    pub fn q_internal(&self) -> f64 {
        1.0 / self.internal_loss()
    }

    /// Full width of the resonance, `f_r / Q_L`.
    pub fn linewidth(&self) -> f64 {
        self.f_r / self.q_loaded
    }
}

/// Resonance bracket without the environment factor.
fn bracket(f: f64, p: &NotchParams) -> Complex64 {
    let depth = Complex64::from_polar(p.q_loaded / p.q_ext_mag, p.phi);
    let detuning = Complex64::new(1.0, 2.0 * p.q_loaded * (f / p.f_r - 1.0));
    Complex64::new(1.0, 0.0) - depth / detuning
}

/// Environment factor `a e^{i alpha} e^{-2 pi i f tau}`.
fn environment(f: f64, amplitude: f64, alpha: f64, delay: f64) -> Complex64 {
    Complex64::from_polar(amplitude, alpha - TAU * f * delay)
}

/// Model transmission coefficient at frequency `f`.
pub fn s21_model(f: f64, p: &NotchParams) -> Complex64 {
    environment(f, p.amplitude, p.alpha, p.delay) * bracket(f, p)
}

/// Uniform frequency grid centered on `f_r` spanning `half_widths`
/// linewidths to each side.
pub fn centered_grid(p: &NotchParams, half_widths: f64, points: usize) -> Vec<f64> {
    let half_span = half_widths * p.linewidth();
    let start = p.f_r - half_span;
    let step = 2.0 * half_span / (points - 1) as f64;
    (0..points).map(|i| start + step * i as f64).collect()
}

fn noise_tag(seed: u64, sigma: f64) -> String {
    format!("chacha8,seed={seed},sigma={sigma}")
}

/// Samples the model on `grid` and adds i.i.d. complex Gaussian noise with
/// standard deviation `sigma` on each quadrature, drawn from a ChaCha8
/// stream seeded with `seed`. `sigma = 0` returns exact model values.
///
/// The generator and seed are recorded in the trace's `rng` metadata so runs
/// are reproducible from the file alone.
pub fn synthesize_trace(
    p: &NotchParams,
    grid: &[f64],
    sigma: f64,
    seed: u64,
) -> Result<FrequencyTrace> {
    p.validate()?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!(
            "noise sigma must be >= 0, got {sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Complex64> = grid
        .iter()
        .map(|f| {
            let clean = s21_model(*f, p);
            if sigma == 0.0 {
                clean
            } else {
                let dre: f64 = StandardNormal.sample(&mut rng);
                let dim: f64 = StandardNormal.sample(&mut rng);
                clean + Complex64::new(sigma * dre, sigma * dim)
            }
        })
        .collect();
    let mut trace = FrequencyTrace::new(grid.to_vec(), samples)?;
    trace.rng = Some(noise_tag(seed, sigma));
    Ok(trace)
}

/// Product-law transmission of several resonators on one feed line.
///
/// All parameter sets must share the environment triple
/// `(amplitude, alpha, delay)` and have distinct resonance frequencies.
pub fn compose_multiplexed(params: &[NotchParams], grid: &[f64]) -> Result<FrequencyTrace> {
    let first = params.first().ok_or_else(|| {
        Error::Config("multiplexed composition needs at least one resonator".into())
    })?;
    for (i, p) in params.iter().enumerate() {
        p.validate()?;
        if p.amplitude != first.amplitude || p.alpha != first.alpha || p.delay != first.delay {
            return Err(Error::Config(format!(
                "resonator {i} does not share the environment (a, alpha, tau) of resonator 0"
            )));
        }
    }
    for i in 0..params.len() {
        for j in (i + 1)..params.len() {
            if params[i].f_r == params[j].f_r {
                return Err(Error::Config(format!(
                    "resonators {i} and {j} share the resonance frequency {}",
                    params[i].f_r
                )));
            }
        }
    }
    let samples: Vec<Complex64> = grid
        .iter()
        .map(|f| {
            let mut product = environment(*f, first.amplitude, first.alpha, first.delay);
            for p in params {
                product *= bracket(*f, p);
            }
            product
        })
        .collect();
    FrequencyTrace::new(grid.to_vec(), samples)
}
