//! Notch-resonance parameter extraction.
//!
//! The pipeline mirrors the standard IQ-plane treatment of a notch-coupled
//! resonator:
//!
//! 1. estimate and remove the electric delay ([`delay::estimate_delay`]),
//! 2. fit the resulting circle algebraically ([`circle::fit_circle`]),
//! 3. translate the circle to the origin and fit the canonical phase model
//!    ([`phase::fit_phase`]) for `f_r`, `Q_L` and the resonance angle,
//! 4. recover the environment `(a, alpha)` from the off-resonant point,
//!    the mismatch angle `phi`, and `|Q_e|` from the circle diameter,
//! 5. derive `Q_i` in the diameter-correction convention
//!    `1/Q_i = 1/Q_L - cos(phi)/|Q_e|`.
//!
//! Uncertainties are first-order propagations of the phase-fit covariance
//! with the circle-fit scatter folded into the radius variance.
//!
//! The staged estimates seed a final joint least-squares refinement of all
//! seven parameters against the complex samples. For additive Gaussian
//! trace noise that joint fit is the maximum-likelihood estimate; without
//! it the staged estimator carries a percent-level noise bias in the
//! quality factors. On noiseless data the refinement starts at the optimum
//! and changes nothing.

pub mod circle;
pub mod delay;
pub mod phase;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::PLANCK;
use crate::error::{Error, Result};
use crate::fit::minimize;
use crate::s21::{s21_model, NotchParams};
use crate::trace::FrequencyTrace;

pub use circle::{fit_circle, CircleGeometry};
pub use delay::{estimate_delay, DelayEstimate};
pub use phase::{fit_phase, PhaseFit};

/// Identifier of the Q_i convention used by this pipeline.
pub const Q_I_CONVENTION: &str = "diameter-correction: 1/Q_i = 1/Q_L - cos(phi)/|Q_e|";

/// 1-sigma uncertainties of the extracted parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NotchSigmas {
    pub f_r: f64,
    pub q_loaded: f64,
    pub q_ext_mag: f64,
    pub q_internal: f64,
    pub phi: f64,
    pub delay: f64,
}

/// Photon-occupation metrics of a probed resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonMetrics {
    /// Mean intra-resonator photon number at the given input power.
    pub mean_photons: f64,
    /// Input power that sustains one photon on average (W).
    pub single_photon_power_watts: f64,
}

/// Full result of a notch-trace fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotchFitResult {
    pub schema_version: u32,
    pub kind: String,
    pub label: Option<String>,
    pub power_dbm: Option<f64>,
    pub temperature_k: Option<f64>,
    /// Fitted model parameters.
    pub params: NotchParams,
    /// Internal quality factor, diameter-correction convention.
    pub q_internal: f64,
    /// Loss tangent `1 / Q_i`.
    pub tan_delta: f64,
    pub sigma: NotchSigmas,
    /// RMS of `|model - data|` over the trace.
    pub residual_rms: f64,
    pub photon: Option<PhotonMetrics>,
    pub q_i_convention: String,
    pub warnings: Vec<String>,
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// Converts a power in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

/// Mean photon number and single-photon power for a notch resonator probed
/// with `p_in_watts` on the feed line:
///
/// ```text
/// <n> = Q_L^2 / (pi h f_r^2 |Q_e|) * P_in
/// ```
///
/// The single-photon power is the exact inverse, so
/// `photon_metrics(..., single_photon_power).mean_photons == 1` bit-exactly.
pub fn photon_metrics(
    f_r: f64,
    q_loaded: f64,
    q_ext_mag: f64,
    p_in_watts: f64,
) -> Result<PhotonMetrics> {
    for (name, v) in [
        ("f_r", f_r),
        ("Q_L", q_loaded),
        ("|Q_e|", q_ext_mag),
        ("P_in", p_in_watts),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
        }
    }
    let single_photon_power_watts = PI * PLANCK * f_r * f_r * q_ext_mag / (q_loaded * q_loaded);
    Ok(PhotonMetrics {
        mean_photons: p_in_watts / single_photon_power_watts,
        single_photon_power_watts,
    })
}

pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Joint least-squares refinement of all seven parameters against the
/// complex samples, seeded by the staged estimates. Parameters are
/// optimized in dimensionless units (ratios to the seed, delay in radians
/// at the center frequency) to keep the normal equations well conditioned.
/// Returns `None` when the refinement fails or leaves the valid domain, in
/// which case the staged estimates stand.
fn joint_refine(trace: &FrequencyTrace, seed: &NotchParams) -> Option<NotchParams> {
    struct Problem<'a> {
        trace: &'a FrequencyTrace,
        seed: NotchParams,
        f_center: f64,
    }
    impl Problem<'_> {
        fn params(&self, x: &[f64]) -> NotchParams {
            NotchParams {
                f_r: self.seed.f_r * x[0],
                q_loaded: self.seed.q_loaded * x[1],
                q_ext_mag: self.seed.q_ext_mag * x[2],
                phi: x[3],
                amplitude: self.seed.amplitude * x[4],
                alpha: x[5],
                delay: x[6] / (TAU * self.f_center),
            }
        }
    }
    impl crate::fit::LeastSquares for Problem<'_> {
        fn residuals(&self, x: &[f64]) -> Vec<f64> {
            let p = self.params(x);
            let mut out = Vec::with_capacity(2 * self.trace.len());
            for (f, z) in self.trace.freq_hz().iter().zip(self.trace.s21()) {
                let diff = s21_model(*f, &p) - z;
                out.push(diff.re);
                out.push(diff.im);
            }
            out
        }
    }

    let f_center = seed.f_r;
    let problem = Problem {
        trace,
        seed: *seed,
        f_center,
    };
    let x0 = [
        1.0,
        1.0,
        1.0,
        seed.phi,
        1.0,
        seed.alpha,
        seed.delay * TAU * f_center,
    ];
    let fit = minimize(&problem, &x0, &crate::fit::LmOptions::default()).ok()?;
    let mut refined = problem.params(&fit.params);
    refined.phi = wrap_angle(refined.phi);
    refined.alpha = wrap_angle(refined.alpha);
    refined.validate().ok()?;
    Some(refined)
}

/// Extracts all notch parameters from a single-resonance trace.
pub fn extract_notch(trace: &FrequencyTrace) -> Result<NotchFitResult> {
    let DelayEstimate {
        delay: tau,
        mut warnings,
    } = estimate_delay(trace).map_err(|e| stage(e, "delay estimation"))?;

    let corrected = delay::remove_delay(trace, tau);
    let circle = fit_circle(&corrected).map_err(|e| stage(e, "circle fit"))?;

    let centered: Vec<Complex64> = corrected.iter().map(|z| z - circle.center).collect();
    let phase_fit = fit_phase(trace.freq_hz(), &centered).map_err(|e| stage(e, "phase fit"))?;

    let f_r = phase_fit.f_r;
    let q_loaded = phase_fit.q_loaded;
    let theta0 = phase_fit.theta0;

    // Off-resonant point: diametrically opposite the resonance on the circle.
    let off_resonant = circle.center - Complex64::from_polar(circle.radius, theta0);
    let amplitude = off_resonant.norm();
    let alpha = off_resonant.arg();
    let phi = wrap_angle(theta0 - alpha - PI);
    let q_ext_mag = amplitude * q_loaded / (2.0 * circle.radius);

    let staged = NotchParams {
        f_r,
        q_loaded,
        q_ext_mag,
        phi,
        amplitude,
        alpha,
        delay: tau,
    };
    let params = joint_refine(trace, &staged).unwrap_or(staged);

    let inv_q_i = 1.0 / params.q_loaded - params.phi.cos() / params.q_ext_mag;
    if inv_q_i <= 0.0 {
        return Err(Error::Config(format!(
            "fit implies a non-positive internal quality factor: \
             Q_L = {:.6e}, |Q_e| = {:.6e}, phi = {:.6}",
            params.q_loaded, params.q_ext_mag, params.phi
        )));
    }
    let q_internal = 1.0 / inv_q_i;
    if params.phi.cos() < 0.0 {
        warnings.push(format!(
            "phi = {:.4} rad rotates Re(1/Q_e) negative; Q_i < Q_L in this convention",
            params.phi
        ));
    }
    if trace.span() < 5.0 * params.f_r / params.q_loaded {
        warnings.push(format!(
            "trace spans only {:.2} linewidths (< 5); delay and Q separation is weak",
            trace.span() * params.q_loaded / params.f_r
        ));
    }

    // Uncertainty propagation.
    let sigma_f_r = phase_fit.covariance[(0, 0)].max(0.0).sqrt();
    let sigma_q_l = phase_fit.covariance[(1, 1)].max(0.0).sqrt();
    let sigma_theta0 = phase_fit.covariance[(2, 2)].max(0.0).sqrt();
    let cov_q_theta = phase_fit.covariance[(1, 2)];
    // Radius uncertainty from the circle-fit scatter.
    let sigma_radius = circle.rms_residual / (trace.len() as f64).sqrt();
    let rel_r = sigma_radius / circle.radius;
    let sigma_phi = (sigma_theta0 * sigma_theta0 + rel_r * rel_r).sqrt();
    let sigma_q_e = q_ext_mag * ((sigma_q_l / q_loaded).powi(2) + rel_r * rel_r).sqrt();
    // 1/Q_i = (1 - (2 r / a) cos phi) / Q_L, with phi tied to theta0.
    let d_ql = -inv_q_i / q_loaded;
    let d_theta0 = (2.0 * circle.radius / amplitude) * phi.sin() / q_loaded;
    let d_radius = -(2.0 / amplitude) * phi.cos() / q_loaded;
    let var_inv_qi = (d_ql * sigma_q_l).powi(2)
        + (d_theta0 * sigma_theta0).powi(2)
        + 2.0 * d_ql * d_theta0 * cov_q_theta
        + (d_radius * sigma_radius).powi(2);
    let sigma_q_i = q_internal * q_internal * var_inv_qi.max(0.0).sqrt();
    let sigma_delay = delay::edge_slope_delay_sigma(trace);

    let residual_rms = (trace
        .freq_hz()
        .iter()
        .zip(trace.s21())
        .map(|(f, z)| (s21_model(*f, &params) - z).norm_sqr())
        .sum::<f64>()
        / trace.len() as f64)
        .sqrt();

    let photon = match trace.power_dbm {
        Some(dbm) => Some(photon_metrics(
            params.f_r,
            params.q_loaded,
            params.q_ext_mag,
            dbm_to_watts(dbm),
        )?),
        None => None,
    };

    Ok(NotchFitResult {
        schema_version: 1,
        kind: "notch_fit".into(),
        label: trace.label.clone(),
        power_dbm: trace.power_dbm,
        temperature_k: trace.temperature_k,
        params,
        q_internal,
        tan_delta: inv_q_i,
        sigma: NotchSigmas {
            f_r: sigma_f_r,
            q_loaded: sigma_q_l,
            q_ext_mag: sigma_q_e,
            q_internal: sigma_q_i,
            phi: sigma_phi,
            delay: sigma_delay,
        },
        residual_rms,
        photon,
        q_i_convention: Q_I_CONVENTION.into(),
        warnings,
    })
}

fn stage(e: Error, name: &str) -> Error {
    match e {
        Error::FitNonConvergence { .. } => e,
        Error::Domain(msg) => Error::Domain(format!("{name}: {msg}")),
        Error::Config(msg) => Error::Config(format!("{name}: {msg}")),
        Error::DegenerateGeometry(msg) => Error::DegenerateGeometry(format!("{name}: {msg}")),
        other => other,
    }
}

/// Mean and sample standard deviation of one parameter over repeated fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std_dev: f64,
}

fn stat(values: impl Iterator<Item = f64> + Clone) -> Stat {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Stat {
        mean,
        std_dev: var.sqrt(),
    }
}

/// Per-parameter average over repeated fits of the same resonator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateFit {
    pub schema_version: u32,
    pub kind: String,
    pub label: Option<String>,
    pub count: usize,
    pub f_r: Stat,
    pub q_loaded: Stat,
    pub q_ext_mag: Stat,
    pub q_internal: Stat,
    pub phi: Stat,
    pub amplitude: Stat,
    pub alpha: Stat,
    pub delay: Stat,
    pub tan_delta: Stat,
}

/// Averages repeated fits (at least two) of one resonator.
pub fn aggregate_fits(results: &[NotchFitResult]) -> Result<AggregateFit> {
    if results.len() < 2 {
        return Err(Error::Config(format!(
            "aggregation needs at least 2 fits, got {}",
            results.len()
        )));
    }
    let label = &results[0].label;
    if results.iter().any(|r| &r.label != label) {
        return Err(Error::Config(
            "aggregation across differently labeled fits is not meaningful".into(),
        ));
    }
    Ok(AggregateFit {
        schema_version: 1,
        kind: "aggregate_fit".into(),
        label: label.clone(),
        count: results.len(),
        f_r: stat(results.iter().map(|r| r.params.f_r)),
        q_loaded: stat(results.iter().map(|r| r.params.q_loaded)),
        q_ext_mag: stat(results.iter().map(|r| r.params.q_ext_mag)),
        q_internal: stat(results.iter().map(|r| r.q_internal)),
        phi: stat(results.iter().map(|r| r.params.phi)),
        amplitude: stat(results.iter().map(|r| r.params.amplitude)),
        alpha: stat(results.iter().map(|r| r.params.alpha)),
        delay: stat(results.iter().map(|r| r.params.delay)),
        tan_delta: stat(results.iter().map(|r| r.tan_delta)),
    })
}

/// One power point of a probe-power sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSweepRow {
    pub power_dbm: f64,
    pub n_photon: f64,
    pub q_i: f64,
    pub q_i_sigma: f64,
    pub q_e: f64,
    pub q_e_sigma: f64,
    pub tan_delta: f64,
}

/// Quality factors versus probe power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSweep {
    pub schema_version: u32,
    pub kind: String,
    pub rows: Vec<PowerSweepRow>,
}

/// Fits every trace of a power sweep and tabulates quality factors per
/// power point, ordered by increasing power. Traces sharing a power value
/// are fit individually and averaged.
pub fn analyze_power_sweep(traces: &[FrequencyTrace]) -> Result<PowerSweep> {
    if traces.is_empty() {
        return Err(Error::Config("power sweep needs at least one trace".into()));
    }
    let mut tagged: Vec<(f64, &FrequencyTrace)> = Vec::with_capacity(traces.len());
    for (i, t) in traces.iter().enumerate() {
        match t.power_dbm {
            Some(p) => tagged.push((p, t)),
            None => {
                return Err(Error::Config(format!(
                    "trace {i} carries no power_dbm metadata; a power sweep needs it"
                )))
            }
        }
    }
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut rows = Vec::new();
    let mut i = 0;
    while i < tagged.len() {
        let power = tagged[i].0;
        let mut fits = Vec::new();
        while i < tagged.len() && tagged[i].0 == power {
            fits.push(extract_notch(tagged[i].1)?);
            i += 1;
        }
        let (q_i, q_i_sigma, q_e, q_e_sigma, f_r, q_l) = if fits.len() >= 2 {
            let agg_qi = stat(fits.iter().map(|f| f.q_internal));
            let agg_qe = stat(fits.iter().map(|f| f.params.q_ext_mag));
            let agg_fr = stat(fits.iter().map(|f| f.params.f_r));
            let agg_ql = stat(fits.iter().map(|f| f.params.q_loaded));
            (
                agg_qi.mean,
                agg_qi.std_dev,
                agg_qe.mean,
                agg_qe.std_dev,
                agg_fr.mean,
                agg_ql.mean,
            )
        } else {
            let f = &fits[0];
            (
                f.q_internal,
                f.sigma.q_internal,
                f.params.q_ext_mag,
                f.sigma.q_ext_mag,
                f.params.f_r,
                f.params.q_loaded,
            )
        };
        let photons = photon_metrics(f_r, q_l, q_e, dbm_to_watts(power))?;
        rows.push(PowerSweepRow {
            power_dbm: power,
            n_photon: photons.mean_photons,
            q_i,
            q_i_sigma,
            q_e,
            q_e_sigma,
            tan_delta: 1.0 / q_i,
        });
    }
    Ok(PowerSweep {
        schema_version: 1,
        kind: "power_sweep".into(),
        rows,
    })
}

/// Renders a power sweep as CSV with the fixed header
/// `power_dbm,n_photon,q_i,q_i_sigma,q_e,q_e_sigma,tan_delta`.
pub fn power_sweep_csv(sweep: &PowerSweep) -> String {
    let mut out = String::from("power_dbm,n_photon,q_i,q_i_sigma,q_e,q_e_sigma,tan_delta\n");
    for r in &sweep.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.power_dbm, r.n_photon, r.q_i, r.q_i_sigma, r.q_e, r.q_e_sigma, r.tan_delta
        ));
    }
    out
}

/// Splits a multiplexed trace into one window per supplied approximate
/// resonance frequency.
///
/// Each window spans ten estimated linewidths to each side of the dip,
/// clipped to the midpoints between neighboring resonances. The linewidth is
/// estimated from the full width at half depth of the `|S21|` dip, which for
/// a notch resonance equals `f_r / Q_L` independent of the dip depth.
pub fn split_windows(trace: &FrequencyTrace, approx_f_r: &[f64]) -> Result<Vec<FrequencyTrace>> {
    if approx_f_r.is_empty() {
        return Err(Error::Config("no resonance frequencies supplied".into()));
    }
    let mut centers = approx_f_r.to_vec();
    centers.sort_by(f64::total_cmp);
    let freq = trace.freq_hz();
    let (f_lo, f_hi) = (freq[0], freq[freq.len() - 1]);

    let mut windows = Vec::with_capacity(centers.len());
    for (i, center) in centers.iter().enumerate() {
        if *center < f_lo || *center > f_hi {
            return Err(Error::Config(format!(
                "approximate resonance {center} Hz lies outside the trace [{f_lo}, {f_hi}]"
            )));
        }
        let region_lo = if i == 0 {
            f_lo
        } else {
            0.5 * (centers[i - 1] + center)
        };
        let region_hi = if i + 1 == centers.len() {
            f_hi
        } else {
            0.5 * (center + centers[i + 1])
        };
        let region: Vec<(f64, f64)> = freq
            .iter()
            .zip(trace.s21())
            .filter(|(f, _)| **f >= region_lo && **f <= region_hi)
            .map(|(f, z)| (*f, z.norm()))
            .collect();
        if region.len() < crate::trace::MIN_POINTS {
            return Err(Error::Config(format!(
                "window around {center} Hz holds fewer than {} points",
                crate::trace::MIN_POINTS
            )));
        }
        // Dip minimum and edge baseline inside the region.
        let (dip_idx, dip_mag) = region
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(i, (_, m))| (i, *m))
            .unwrap();
        let edge_n = (region.len() / 6).max(1);
        let baseline = region[..edge_n]
            .iter()
            .chain(&region[region.len() - edge_n..])
            .map(|(_, m)| *m)
            .sum::<f64>()
            / (2 * edge_n) as f64;
        let half_level = 0.5 * (baseline + dip_mag);
        let mut left = region[0].0;
        for j in (0..dip_idx).rev() {
            if region[j].1 > half_level {
                left = region[j].0;
                break;
            }
        }
        let mut right = region[region.len() - 1].0;
        for item in region.iter().skip(dip_idx) {
            if item.1 > half_level {
                right = item.0;
                break;
            }
        }
        let min_step = freq[1] - freq[0];
        let linewidth = (right - left).max(min_step);
        let f_center = region[dip_idx].0;
        let lo = (f_center - 10.0 * linewidth).max(region_lo);
        let hi = (f_center + 10.0 * linewidth).min(region_hi);
        windows.push(trace.crop(lo, hi)?);
    }
    Ok(windows)
}
