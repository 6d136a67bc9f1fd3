//! Lumped-element model of the tadpole resonator.
//!
//! A short CPW strip (inductance `L`, small stray capacitance `C_cpw`)
//! shunted by a large parallel-plate capacitor (`C_ppc = c0 * A`) resonates
//! at
//!
//! ```text
//! f_r = 1 / (2 pi sqrt(L (C_ppc + C_cpw)))
//! ```
//!
//! with characteristic impedance `Z_c = sqrt(L / (C_ppc + C_cpw))`. This
//! module provides the forward model, its inversions (plate area for a
//! target frequency, inductance implied by a measured frequency), and the
//! calibration of the capacitance per unit area `c0` against measured
//! (area, frequency) data.
//!
//! Calibration note: frequency-vs-area data determines only the products
//! `L * c0` and `L * C_cpw`, so `L` and `C_cpw` are required as fixed inputs
//! and `c0` is the single free parameter.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parallel-plate capacitor specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpcSpec {
    /// Plate area (m^2).
    pub area: f64,
    /// Capacitance per unit area (F/m^2).
    pub c0: f64,
    /// Dielectric thickness (m); informational, not used in the capacitance.
    pub dielectric_thickness: f64,
}

impl PpcSpec {
    pub fn new(area: f64, c0: f64, dielectric_thickness: f64) -> Result<Self> {
        for (name, v) in [
            ("area", area),
            ("c0", c0),
            ("dielectric thickness", dielectric_thickness),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("PPC {name} must be > 0, got {v}")));
            }
        }
        Ok(PpcSpec {
            area,
            c0,
            dielectric_thickness,
        })
    }
}

/// Capacitance of a parallel-plate capacitor, `c0 * A`.
pub fn ppc_capacitance(spec: &PpcSpec) -> f64 {
    spec.c0 * spec.area
}

/// Lumped LC model: strip inductance plus the two capacitance contributions.
///
/// The tadpole regime requires `C_cpw < C_ppc`; the constructor enforces it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedModel {
    /// Total inductance (H).
    pub inductance: f64,
    /// Parallel-plate capacitance (F).
    pub c_ppc: f64,
    /// CPW stray capacitance (F).
    pub c_cpw: f64,
}

impl LumpedModel {
    pub fn new(inductance: f64, c_ppc: f64, c_cpw: f64) -> Result<Self> {
        for (name, v) in [("L", inductance), ("C_ppc", c_ppc), ("C_cpw", c_cpw)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if c_cpw >= c_ppc {
            return Err(Error::Domain(format!(
                "not a tadpole design: C_cpw = {c_cpw} must be smaller than C_ppc = {c_ppc}"
            )));
        }
        Ok(LumpedModel {
            inductance,
            c_ppc,
            c_cpw,
        })
    }

    pub fn total_capacitance(&self) -> f64 {
        self.c_ppc + self.c_cpw
    }
}

/// Resonance frequency of the lumped model (Hz).
pub fn resonance_frequency(m: &LumpedModel) -> f64 {
    1.0 / (TAU * (m.inductance * m.total_capacitance()).sqrt())
}

/// Characteristic impedance `sqrt(L / C_total)` (ohm).
pub fn characteristic_impedance(m: &LumpedModel) -> f64 {
    (m.inductance / m.total_capacitance()).sqrt()
}

/// Plate area that places the resonance at `f_target`, given fixed `L`,
/// capacitance per unit area `c0`, and stray capacitance `c_cpw`.
///
/// Fails when the target is so high that the required total capacitance does
/// not exceed the stray capacitance.
pub fn required_area(f_target: f64, inductance: f64, c0: f64, c_cpw: f64) -> Result<f64> {
    for (name, v) in [
        ("target frequency", f_target),
        ("inductance", inductance),
        ("c0", c0),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
        }
    }
    if !(c_cpw >= 0.0 && c_cpw.is_finite()) {
        return Err(Error::Domain(format!("C_cpw must be >= 0, got {c_cpw}")));
    }
    let c_total = 1.0 / ((TAU * f_target).powi(2) * inductance);
    let c_ppc = c_total - c_cpw;
    if c_ppc <= 0.0 {
        return Err(Error::Infeasible(format!(
            "target {:.6} MHz needs total capacitance {:.6e} F, not above the stray {:.6e} F; \
             lower the frequency, the inductance, or the stray capacitance",
            f_target / 1e6,
            c_total,
            c_cpw
        )));
    }
    Ok(c_ppc / c0)
}

/// Inductance implied by a resonance at `f` with total capacitance `c_total`.
pub fn implied_inductance(f: f64, c_total: f64) -> Result<f64> {
    for (name, v) in [("frequency", f), ("total capacitance", c_total)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
        }
    }
    Ok(1.0 / ((TAU * f).powi(2) * c_total))
}

/// One calibration measurement: plate area and measured resonance frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub label: Option<String>,
    /// Plate area (m^2).
    pub area: f64,
    /// Measured resonance frequency (Hz).
    pub f_measured: f64,
}

/// A set of (area, measured frequency) rows for c0 calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationDataset {
    rows: Vec<CalibrationRow>,
}

impl CalibrationDataset {
    pub fn new(rows: Vec<CalibrationRow>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Config(format!(
                "calibration needs at least 2 rows, got {}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if !(row.area > 0.0 && row.area.is_finite()) {
                return Err(Error::Domain(format!(
                    "row {i}: area must be > 0, got {}",
                    row.area
                )));
            }
            if !(row.f_measured > 0.0 && row.f_measured.is_finite()) {
                return Err(Error::Domain(format!(
                    "row {i}: frequency must be > 0, got {}",
                    row.f_measured
                )));
            }
        }
        for i in 0..rows.len() {
            for j in (i + 1)..rows.len() {
                if rows[i].area == rows[j].area {
                    return Err(Error::Config(format!(
                        "rows {i} and {j} have identical area {}; areas must be distinct",
                        rows[i].area
                    )));
                }
            }
        }
        Ok(CalibrationDataset { rows })
    }

    pub fn rows(&self) -> &[CalibrationRow] {
        &self.rows
    }
}

/// Unconstrained straight-line fit of total capacitance versus area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    /// Slope (F/m^2).
    pub slope: f64,
    pub slope_sigma: f64,
    /// Intercept (F).
    pub intercept: f64,
    pub intercept_sigma: f64,
    pub r_squared: f64,
}

/// Result of a c0 calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C0Calibration {
    /// Fitted capacitance per unit area (F/m^2).
    pub c0: f64,
    /// 1-sigma uncertainty of `c0` (F/m^2).
    pub c0_sigma: f64,
    /// Per-row residuals of implied total capacitance (F), data minus model.
    pub residuals: Vec<f64>,
    /// Free straight-line view of total capacitance vs area.
    pub line: LinearFit,
}

/// Fits the capacitance per unit area `c0` against measured frequencies.
///
/// Each measured frequency is converted to an implied total capacitance
/// `y_i = 1 / ((2 pi f_i)^2 L)` and the model `y_i = c0 A_i + c_cpw` is
/// solved by least squares with `c_cpw` held fixed, so `c0` is the only free
/// parameter. The returned `line` field carries the two-parameter straight
/// line through the same points for comparison.
pub fn calibrate_c0(
    data: &CalibrationDataset,
    inductance: f64,
    c_cpw: f64,
) -> Result<C0Calibration> {
    if !(inductance > 0.0 && inductance.is_finite()) {
        return Err(Error::Domain(format!(
            "inductance must be > 0, got {inductance}"
        )));
    }
    if !(c_cpw >= 0.0 && c_cpw.is_finite()) {
        return Err(Error::Domain(format!("C_cpw must be >= 0, got {c_cpw}")));
    }
    let rows = data.rows();
    let n = rows.len();
    let areas: Vec<f64> = rows.iter().map(|r| r.area).collect();
    let caps: Vec<f64> = rows
        .iter()
        .map(|r| 1.0 / ((TAU * r.f_measured).powi(2) * inductance))
        .collect();

    // One-parameter least squares through the fixed intercept c_cpw.
    let sum_aa: f64 = areas.iter().map(|a| a * a).sum();
    let sum_ay: f64 = areas.iter().zip(&caps).map(|(a, y)| a * (y - c_cpw)).sum();
    let c0 = sum_ay / sum_aa;
    let residuals: Vec<f64> = areas
        .iter()
        .zip(&caps)
        .map(|(a, y)| y - (c0 * a + c_cpw))
        .collect();
    let dof = (n - 1) as f64;
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / dof;
    let c0_sigma = (s2 / sum_aa).sqrt();

    let line = fit_line(&areas, &caps)?;

    Ok(C0Calibration {
        c0,
        c0_sigma,
        residuals,
        line,
    })
}

/// Ordinary least-squares straight line `y = slope * x + intercept`.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::Config(format!(
            "line fit needs >= 2 paired points, got {} and {}",
            n,
            y.len()
        )));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|xi| (xi - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Config(
            "line fit is degenerate: all abscissae are equal".into(),
        ));
    }
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (xi - mean_x) * (yi - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - (slope * xi + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|yi| (yi - mean_y).powi(2)).sum();
    let s2 = if n > 2 { ss_res / (n - 2) as f64 } else { 0.0 };
    Ok(LinearFit {
        slope,
        slope_sigma: (s2 / sxx).sqrt(),
        intercept,
        intercept_sigma: (s2 * (1.0 / nf + mean_x * mean_x / sxx)).sqrt(),
        r_squared: if ss_tot > 0.0 {
            1.0 - ss_res / ss_tot
        } else {
            1.0
        },
    })
}

/// One resonator design to be tabulated by [`prediction_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorDesign {
    pub label: String,
    /// Plate area (m^2), used for the total-length estimate.
    pub area: f64,
    pub model: LumpedModel,
}

/// One row of a prediction report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub label: String,
    /// Plate area (m^2).
    pub area: f64,
    /// Predicted resonance frequency (Hz).
    pub f_predicted: f64,
    /// Measured resonance frequency (Hz), when supplied.
    pub f_measured: Option<f64>,
    /// Relative error `(f_meas - f_pred) / f_meas` in percent.
    pub rel_error_percent: Option<f64>,
    /// Characteristic impedance (ohm).
    pub z_c: f64,
    /// Total-length to wavelength ratio; uses the measured frequency when
    /// present, the prediction otherwise.
    pub size_ratio: f64,
}

/// Frequency prediction table with measured comparison columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub schema_version: u32,
    /// Relative-error convention marker: denominator is the measured value.
    pub error_convention: String,
    pub rows: Vec<PredictionRow>,
}

/// Relative frequency error in percent, `(f_meas - f_pred) / f_meas * 100`.
pub fn relative_error_percent(f_measured: f64, f_predicted: f64) -> f64 {
    (f_measured - f_predicted) / f_measured * 100.0
}

/// Builds the prediction table for a set of designs.
///
/// The total length is the strip length plus the side of a square plate of
/// the design's area; `eps_eff` feeds the wavelength estimate.
pub fn prediction_report(
    designs: &[ResonatorDesign],
    measured: Option<&[f64]>,
    strip_length: f64,
    eps_eff: f64,
) -> Result<PredictionReport> {
    if let Some(m) = measured {
        if m.len() != designs.len() {
            return Err(Error::Config(format!(
                "got {} measured frequencies for {} designs",
                m.len(),
                designs.len()
            )));
        }
    }
    let mut rows = Vec::with_capacity(designs.len());
    for (i, d) in designs.iter().enumerate() {
        let f_pred = resonance_frequency(&d.model);
        let f_meas = measured.map(|m| m[i]);
        let f_for_ratio = f_meas.unwrap_or(f_pred);
        let l_tot = strip_length + d.area.sqrt();
        let ratio = size_ratio(l_tot, crate::cpw::mode_wavelength(f_for_ratio, eps_eff)?)?;
        rows.push(PredictionRow {
            label: d.label.clone(),
            area: d.area,
            f_predicted: f_pred,
            f_measured: f_meas,
            rel_error_percent: f_meas.map(|fm| relative_error_percent(fm, f_pred)),
            z_c: characteristic_impedance(&d.model),
            size_ratio: ratio,
        });
    }
    Ok(PredictionReport {
        schema_version: 1,
        error_convention: "measured-denominator".into(),
        rows,
    })
}

use crate::cpw::size_ratio;

/// Reads a calibration dataset from CSV with the fixed header
/// `label,area_um2,f_meas_mhz`. Lines starting with `#` are comments.
pub fn read_calibration_csv(path: &std::path::Path) -> Result<CalibrationDataset> {
    let name = path.display().to_string();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(name.clone(), e))?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in content.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "label,area_um2,f_meas_mhz" {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("expected header 'label,area_um2,f_meas_mhz', got '{line}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let area_um2: f64 = fields[1].trim().parse().map_err(|_| {
            Error::parse(
                &name,
                lineno,
                format!("area '{}' is not a number", fields[1]),
            )
        })?;
        let f_mhz: f64 = fields[2].trim().parse().map_err(|_| {
            Error::parse(
                &name,
                lineno,
                format!("frequency '{}' is not a number", fields[2]),
            )
        })?;
        rows.push(CalibrationRow {
            label: Some(fields[0].trim().to_string()),
            area: area_um2 * 1e-12,
            f_measured: f_mhz * 1e6,
        });
    }
    if !saw_header {
        return Err(Error::parse(
            &name,
            1,
            "missing 'label,area_um2,f_meas_mhz' header",
        ));
    }
    CalibrationDataset::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PF: f64 = 1e-12;
    const NH: f64 = 1e-9;
    const UM2: f64 = 1e-12;
    const FF_PER_UM2: f64 = 1e-3; // 1 fF/um^2 = 1e-3 F/m^2

    #[test]
    fn ppc_capacitance_is_area_times_density() {
        let spec = PpcSpec::new(206_721.0 * UM2, 1.39 * FF_PER_UM2, 42e-9).unwrap();
        assert_relative_eq!(ppc_capacitance(&spec), 287.34e-12, max_relative = 1e-4);
        assert!(PpcSpec::new(0.0, 1.39 * FF_PER_UM2, 42e-9).is_err());
        let doubled = PpcSpec::new(2.0 * 206_721.0 * UM2, 1.39 * FF_PER_UM2, 42e-9).unwrap();
        assert_relative_eq!(
            ppc_capacitance(&doubled),
            2.0 * ppc_capacitance(&spec),
            max_relative = 1e-15
        );
    }

    #[test]
    fn resonance_frequency_reproduces_reference_design() {
        let m = LumpedModel::new(1.0706 * NH, 287.34 * PF, 0.26 * PF).unwrap();
        assert_relative_eq!(resonance_frequency(&m), 286.8e6, max_relative = 1e-3);
    }

    #[test]
    fn resonance_frequency_unit_case_and_scaling() {
        let m = LumpedModel::new(1.0, 0.9, 0.1).unwrap();
        assert_relative_eq!(resonance_frequency(&m), 1.0 / TAU, max_relative = 1e-15);
        let quadrupled = LumpedModel::new(1.0, 3.6, 0.4).unwrap();
        assert_relative_eq!(
            resonance_frequency(&quadrupled),
            0.5 / TAU,
            max_relative = 1e-14
        );
    }

    #[test]
    fn resonance_frequency_is_decreasing_in_each_argument() {
        let base = LumpedModel::new(1.0 * NH, 100.0 * PF, 0.3 * PF).unwrap();
        let f0 = resonance_frequency(&base);
        for bumped in [
            LumpedModel::new(1.1 * NH, 100.0 * PF, 0.3 * PF).unwrap(),
            LumpedModel::new(1.0 * NH, 101.0 * PF, 0.3 * PF).unwrap(),
            LumpedModel::new(1.0 * NH, 100.0 * PF, 0.4 * PF).unwrap(),
        ] {
            assert!(resonance_frequency(&bumped) < f0);
        }
    }

    #[test]
    fn characteristic_impedance_reference_and_identity() {
        let m = LumpedModel::new(1.0706 * NH, 287.34 * PF, 0.26 * PF).unwrap();
        let z = characteristic_impedance(&m);
        assert_relative_eq!(z, 1.93, max_relative = 2e-3);
        // Z_c = 2 pi f_r L is an algebraic identity of the two definitions.
        assert_relative_eq!(
            z,
            TAU * resonance_frequency(&m) * m.inductance,
            max_relative = 1e-13
        );

        let unit = LumpedModel::new(1.0 * NH, 0.9e-9, 0.1e-9).unwrap();
        assert_relative_eq!(characteristic_impedance(&unit), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn tadpole_invariant_rejects_dominant_stray() {
        assert!(LumpedModel::new(1.0 * NH, 0.2 * PF, 0.3 * PF).is_err());
    }

    #[test]
    fn impedance_monotonicity() {
        let base = LumpedModel::new(1.0 * NH, 100.0 * PF, 0.3 * PF).unwrap();
        let z0 = characteristic_impedance(&base);
        let more_c = LumpedModel::new(1.0 * NH, 110.0 * PF, 0.3 * PF).unwrap();
        assert!(characteristic_impedance(&more_c) < z0);
        let more_l = LumpedModel::new(1.2 * NH, 100.0 * PF, 0.3 * PF).unwrap();
        assert!(characteristic_impedance(&more_l) > z0);
    }

    #[test]
    fn required_area_matches_reference_and_round_trips() {
        let area = required_area(286.8e6, 1.0706 * NH, 1.39 * FF_PER_UM2, 0.26 * PF).unwrap();
        assert_relative_eq!(area, 206_721.0 * UM2, max_relative = 1e-3);

        // Round trip at tight tolerance over a frequency sweep.
        for f in [0.29e9, 0.45e9, 0.7e9, 1.1e9] {
            let a = required_area(f, 1.0706 * NH, 1.39 * FF_PER_UM2, 0.26 * PF).unwrap();
            let m = LumpedModel::new(1.0706 * NH, 1.39 * FF_PER_UM2 * a, 0.26 * PF).unwrap();
            assert_relative_eq!(resonance_frequency(&m), f, max_relative = 1e-12);
        }
    }

    #[test]
    fn required_area_rejects_unreachable_targets() {
        // 100 GHz with 1 nH needs ~2.5 fF total, below the 260 fF stray.
        let err = required_area(100e9, 1.0 * NH, 1.39 * FF_PER_UM2, 0.26 * PF);
        assert!(matches!(err, Err(Error::Infeasible(_))));
    }

    #[test]
    fn implied_inductance_reference_rows() {
        assert_relative_eq!(
            implied_inductance(286.8e6, 287.60 * PF).unwrap(),
            1.0706 * NH,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            implied_inductance(1086.6e6, 20.04 * PF).unwrap(),
            1.071 * NH,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            implied_inductance(1.0 / TAU, 1.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
    }

    fn synthetic_dataset(c0: f64, inductance: f64, c_cpw: f64) -> CalibrationDataset {
        let rows = (0..8)
            .map(|i| {
                let area = (20_000.0 + 25_000.0 * i as f64) * UM2;
                let m = LumpedModel::new(inductance, c0 * area, c_cpw).unwrap();
                CalibrationRow {
                    label: None,
                    area,
                    f_measured: resonance_frequency(&m),
                }
            })
            .collect();
        CalibrationDataset::new(rows).unwrap()
    }

    #[test]
    fn calibrate_c0_recovers_noiseless_truth_exactly() {
        let truth = 1.40 * FF_PER_UM2;
        let data = synthetic_dataset(truth, 1.0706 * NH, 0.26 * PF);
        let cal = calibrate_c0(&data, 1.0706 * NH, 0.26 * PF).unwrap();
        assert_relative_eq!(cal.c0, truth, max_relative = 1e-12);
        assert!(cal.residuals.iter().all(|r| r.abs() < 1e-24));
        // The free line view recovers slope = c0 and intercept = C_cpw.
        assert_relative_eq!(cal.line.slope, truth, max_relative = 1e-10);
        assert_relative_eq!(cal.line.intercept, 0.26 * PF, max_relative = 1e-8);
    }

    #[test]
    fn calibration_dataset_rejects_degenerate_input() {
        let row = CalibrationRow {
            label: None,
            area: 1e-8,
            f_measured: 3e8,
        };
        assert!(CalibrationDataset::new(vec![row.clone()]).is_err());
        assert!(CalibrationDataset::new(vec![row.clone(), row]).is_err());
    }

    #[test]
    fn prediction_report_computes_relative_error_and_ratio() {
        let model = LumpedModel::new(1.0706 * NH, 287.34 * PF, 0.26 * PF).unwrap();
        let designs = vec![ResonatorDesign {
            label: "A".into(),
            area: 206_721.0 * UM2,
            model,
        }];
        let report = prediction_report(&designs, Some(&[290.5e6]), 2000e-6, 6.45).unwrap();
        let row = &report.rows[0];
        assert_relative_eq!(row.rel_error_percent.unwrap(), 1.27, max_relative = 1e-2);
        assert_relative_eq!(row.size_ratio, 0.0060, max_relative = 2e-2);

        // Zero error when measured equals predicted.
        let f_pred = resonance_frequency(&designs[0].model);
        let exact = prediction_report(&designs, Some(&[f_pred]), 2000e-6, 6.45).unwrap();
        assert_eq!(exact.rows[0].rel_error_percent.unwrap(), 0.0);

        assert!(prediction_report(&designs, Some(&[1e9, 2e9]), 2000e-6, 6.45).is_err());
    }
}
