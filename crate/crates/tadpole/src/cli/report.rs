//! `tadpole report`: turns result JSONs into CSV tables and SVG plots.
//!
//! Inputs are classified by their `kind` field:
//! - `calibration` -> table + frequency-vs-area plot (data and fitted model)
//! - `power_sweep` -> fixed-header table + Q_i-vs-power plot
//! - `tls_fit` -> table + frequency-vs-temperature plot (data and fit)
//! - `notch_fit` -> one row in a combined parameter table
//!
//! Output files are named after the input file stem, plus `index.csv`
//! listing everything produced.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::ReportArgs;
use crate::error::{Error, Result};
use crate::lumped::resonance_frequency;
use crate::lumped::LumpedModel;
use crate::notch::{NotchFitResult, PowerSweep};
use crate::plot::{render_svg, Plot, Series, SeriesKind};
use crate::tls::{tls_frequency, TlsParams};
use crate::trace::read_json;

const MHZ: f64 = 1e6;
const PF: f64 = 1e-12;
const NH: f64 = 1e-9;
const UM2: f64 = 1e-12;
const FF_PER_UM2: f64 = 1e-3;

pub fn cmd_report(args: ReportArgs, quiet: bool) -> Result<()> {
    if args.inputs.is_empty() {
        return Err(Error::io(
            "report inputs",
            std::io::Error::new(std::io::ErrorKind::NotFound, "no result files supplied"),
        ));
    }
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Error::io(args.out_dir.display().to_string(), e))?;

    let mut index = String::from("input,kind,output\n");
    let mut notch_rows: Vec<NotchFitResult> = Vec::new();

    for input in &args.inputs {
        let value: serde_json::Value = read_json(input)?;
        let kind = value
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| {
                Error::Config(format!(
                    "{} carries no 'kind' field; not a toolkit result file",
                    input.display()
                ))
            })?
            .to_string();
        let stem = input
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("result")
            .to_string();
        let outputs = match kind.as_str() {
            "calibration" => report_calibration(&value, &args.out_dir, &stem)?,
            "power_sweep" => report_power_sweep(&value, &args.out_dir, &stem)?,
            "tls_fit" => report_tls_fit(&value, &args.out_dir, &stem)?,
            "notch_fit" => {
                notch_rows.push(serde_json::from_value(value)?);
                Vec::new()
            }
            other => {
                return Err(Error::Config(format!(
                    "{}: unsupported result kind '{other}'",
                    input.display()
                )))
            }
        };
        for out in outputs {
            let _ = writeln!(index, "{},{},{}", input.display(), kind, out.display());
        }
        if kind == "notch_fit" {
            let _ = writeln!(index, "{},notch_fit,notch_fits.csv", input.display());
        }
    }

    if !notch_rows.is_empty() {
        let path = args.out_dir.join("notch_fits.csv");
        let mut out = String::from(
            "label,f_r_hz,f_r_sigma_hz,q_loaded,q_loaded_sigma,q_ext_mag,q_ext_sigma,\
             q_internal,q_internal_sigma,phi_rad,delay_s,tan_delta,power_dbm,n_photon\n",
        );
        for r in &notch_rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.label.clone().unwrap_or_default(),
                r.params.f_r,
                r.sigma.f_r,
                r.params.q_loaded,
                r.sigma.q_loaded,
                r.params.q_ext_mag,
                r.sigma.q_ext_mag,
                r.q_internal,
                r.sigma.q_internal,
                r.params.phi,
                r.params.delay,
                r.tan_delta,
                r.power_dbm.map(|p| p.to_string()).unwrap_or_default(),
                r.photon
                    .map(|p| p.mean_photons.to_string())
                    .unwrap_or_default(),
            );
        }
        write_file(&path, &out)?;
    }

    let index_path = args.out_dir.join("index.csv");
    write_file(&index_path, &index)?;
    if !quiet {
        println!("wrote report to {}", args.out_dir.display());
    }
    Ok(())
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path.display().to_string(), e))
}

fn report_calibration(
    value: &serde_json::Value,
    out_dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let record: super::CalibrationRecord = serde_json::from_value(value.clone())?;

    let csv_path = out_dir.join(format!("{stem}_calibration.csv"));
    let mut csv = String::from("label,area_um2,f_meas_mhz,f_model_mhz,residual_pf\n");
    let l = record.inductance_nh * NH;
    let c_cpw = record.c_cpw_pf * PF;
    let c0 = record.c0_ff_per_um2 * FF_PER_UM2;
    let mut scatter = Vec::new();
    let mut curve = Vec::new();
    for (row, residual) in record.rows.iter().zip(&record.calibration.residuals) {
        let model = LumpedModel::new(l, c0 * row.area_um2 * UM2, c_cpw)?;
        let f_model = resonance_frequency(&model) / MHZ;
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            row.label.clone().unwrap_or_default(),
            row.area_um2,
            row.f_meas_mhz,
            f_model,
            residual / PF
        );
        scatter.push((row.area_um2, row.f_meas_mhz));
    }
    let (a_min, a_max) = record
        .rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.area_um2), hi.max(r.area_um2))
        });
    for i in 0..=100 {
        let area_um2 = a_min + (a_max - a_min) * i as f64 / 100.0;
        let model = LumpedModel::new(l, c0 * area_um2 * UM2, c_cpw)?;
        curve.push((area_um2, resonance_frequency(&model) / MHZ));
    }
    write_file(&csv_path, &csv)?;

    let svg_path = out_dir.join(format!("{stem}_frequency_vs_area.svg"));
    let plot = Plot {
        title: format!(
            "Resonance frequency vs plate area (c0 = {:.3} fF/um^2)",
            record.c0_ff_per_um2
        ),
        x_label: "A_PPC (um^2)".into(),
        y_label: "f_r (MHz)".into(),
        series: vec![
            Series {
                name: "measured".into(),
                kind: SeriesKind::Scatter,
                points: scatter,
                y_err: None,
            },
            Series {
                name: "fitted model".into(),
                kind: SeriesKind::Line,
                points: curve,
                y_err: None,
            },
        ],
    };
    write_file(&svg_path, &render_svg(&plot))?;
    Ok(vec![csv_path, svg_path])
}

fn report_power_sweep(
    value: &serde_json::Value,
    out_dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let sweep: PowerSweep = serde_json::from_value(value.clone())?;
    let csv_path = out_dir.join(format!("{stem}_power_sweep.csv"));
    write_file(&csv_path, &crate::notch::power_sweep_csv(&sweep))?;

    let svg_path = out_dir.join(format!("{stem}_qi_vs_power.svg"));
    let plot = Plot {
        title: "Internal quality factor vs probe power".into(),
        x_label: "probe power (dBm)".into(),
        y_label: "Q_i".into(),
        series: vec![
            Series {
                name: "Q_i".into(),
                kind: SeriesKind::Scatter,
                points: sweep.rows.iter().map(|r| (r.power_dbm, r.q_i)).collect(),
                y_err: Some(sweep.rows.iter().map(|r| r.q_i_sigma).collect()),
            },
            Series {
                name: "Q_e".into(),
                kind: SeriesKind::Scatter,
                points: sweep.rows.iter().map(|r| (r.power_dbm, r.q_e)).collect(),
                y_err: Some(sweep.rows.iter().map(|r| r.q_e_sigma).collect()),
            },
        ],
    };
    write_file(&svg_path, &render_svg(&plot))?;
    Ok(vec![csv_path, svg_path])
}

fn report_tls_fit(value: &serde_json::Value, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let record: super::TlsFitRecord = serde_json::from_value(value.clone())?;
    let params = TlsParams {
        f0: record.fit.f0,
        delta0: record.fit.delta0,
        filling_factor: record.fit.filling_factor,
    };

    let csv_path = out_dir.join(format!("{stem}_tls_fit.csv"));
    let mut csv = String::from("temperature_k,f_r_hz,f_model_hz,residual_hz\n");
    let mut scatter = Vec::new();
    for row in &record.rows {
        let f_model = tls_frequency(row.temperature_k, &params)?;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            row.temperature_k,
            row.f_r_hz,
            f_model,
            row.f_r_hz - f_model
        );
        scatter.push((row.temperature_k, (row.f_r_hz - record.fit.f0) / 1e3));
    }
    write_file(&csv_path, &csv)?;

    let (t_min, t_max) = record
        .rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.temperature_k), hi.max(r.temperature_k))
        });
    let mut curve = Vec::new();
    for i in 0..=200 {
        let t = t_min + (t_max - t_min) * i as f64 / 200.0;
        curve.push((t, (tls_frequency(t, &params)? - record.fit.f0) / 1e3));
    }

    let svg_path = out_dir.join(format!("{stem}_fr_vs_temperature.svg"));
    let plot = Plot {
        title: format!(
            "TLS frequency shift (f0 = {:.3} MHz, delta0 = {:.2e})",
            record.fit.f0 / MHZ,
            record.fit.delta0
        ),
        x_label: "temperature (K)".into(),
        y_label: "f_r - f0 (kHz)".into(),
        series: vec![
            Series {
                name: "data".into(),
                kind: SeriesKind::Scatter,
                points: scatter,
                y_err: None,
            },
            Series {
                name: "TLS model".into(),
                kind: SeriesKind::Line,
                points: curve,
                y_err: None,
            },
        ],
    };
    write_file(&svg_path, &render_svg(&plot))?;
    Ok(vec![csv_path, svg_path])
}
