//! Command-line front end.
//!
//! Every subcommand is a thin, deterministic binding to one library
//! operation. Units are explicit in flag names (`--c0-ff-per-um2`,
//! `--inductance-nh`) and converted to SI at this boundary. Exit codes:
//! 0 success, 1 validation error, 2 fit non-convergence, 3 I/O error; on
//! failure a machine-readable JSON object is printed to stderr.

mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cpw::{self, CpwGeometry};
use crate::error::{Error, Result};
use crate::lumped::{
    self, calibrate_c0, prediction_report, read_calibration_csv, required_area, C0Calibration,
    LumpedModel, ResonatorDesign,
};
use crate::notch::{analyze_power_sweep, extract_notch, power_sweep_csv};
use crate::s21::{centered_grid, synthesize_trace, NotchParams};
use crate::tls::{fit_tls, read_temperature_csv, TemperatureRow, TlsFit};
use crate::trace::{read_trace, write_json, write_trace, TraceFormat};

const UM: f64 = 1e-6;
const UM2: f64 = 1e-12;
const FF_PER_UM2: f64 = 1e-3;
const PF: f64 = 1e-12;
const NH: f64 = 1e-9;
const MHZ: f64 = 1e6;
const NS: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "tadpole",
    version,
    about = "Design and characterization toolkit for low-impedance lumped-element superconducting resonators"
)]
pub struct Cli {
    /// Suppress the human-readable summary on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for the capacitor area that hits a target frequency.
    Design(DesignArgs),
    /// Predict frequencies for a set of designs and compare to measurement.
    Predict(PredictArgs),
    /// Fit the capacitance per unit area to measured (area, frequency) data.
    Calibrate(CalibrateArgs),
    /// Synthesize a notch-resonance trace with optional noise.
    Synth(SynthArgs),
    /// Extract resonance parameters from a measured or synthetic trace.
    Fit(FitArgs),
    /// Fit the TLS frequency-versus-temperature model.
    TlsFit(TlsFitArgs),
    /// Analyze a probe-power sweep of traces.
    Sweep(SweepArgs),
    /// Aggregate result JSONs into CSV tables and SVG plots.
    Report(ReportArgs),
}

/// Shared CPW geometry flags.
#[derive(Args, Debug, Clone)]
pub struct CpwFlags {
    /// Center-conductor width (um).
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub width_um: f64,
    /// Gap between center conductor and ground (um).
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub gap_um: f64,
    /// Strip length (um).
    #[arg(long, default_value_t = 2000.0, allow_negative_numbers = true)]
    pub length_um: f64,
    /// Substrate relative permittivity.
    #[arg(long, default_value_t = 11.9, allow_negative_numbers = true)]
    pub eps_r: f64,
    /// Effective permittivity override (otherwise (eps_r + 1) / 2).
    #[arg(long, allow_negative_numbers = true)]
    pub eps_eff: Option<f64>,
}

impl CpwFlags {
    fn geometry(&self) -> Result<CpwGeometry> {
        let geom = CpwGeometry::new(
            self.width_um * UM,
            self.gap_um * UM,
            self.length_um * UM,
            self.eps_r,
        )?;
        match self.eps_eff {
            Some(e) => geom.with_eps_eff(e),
            None => Ok(geom),
        }
    }
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    /// Target resonance frequency (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub target_frequency_mhz: f64,
    /// Capacitance per unit area of the plate dielectric (fF/um^2).
    #[arg(long, allow_negative_numbers = true)]
    pub c0_ff_per_um2: f64,
    /// Total inductance override (nH); otherwise the analytic strip value.
    #[arg(long, allow_negative_numbers = true)]
    pub inductance_nh: Option<f64>,
    /// CPW stray capacitance override (pF); otherwise the analytic value.
    #[arg(long, allow_negative_numbers = true)]
    pub c_cpw_pf: Option<f64>,
    #[command(flatten)]
    pub cpw: CpwFlags,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Input CSV with header `label,area_um2,f_meas_mhz`.
    #[arg(long)]
    pub data: PathBuf,
    /// Capacitance per unit area (fF/um^2).
    #[arg(long, allow_negative_numbers = true)]
    pub c0_ff_per_um2: f64,
    /// Total inductance override (nH); otherwise the analytic strip value.
    #[arg(long, allow_negative_numbers = true)]
    pub inductance_nh: Option<f64>,
    /// CPW stray capacitance override (pF); otherwise the analytic value.
    #[arg(long, allow_negative_numbers = true)]
    pub c_cpw_pf: Option<f64>,
    #[command(flatten)]
    pub cpw: CpwFlags,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    /// Input CSV with header `label,area_um2,f_meas_mhz`.
    #[arg(long)]
    pub data: PathBuf,
    /// Fixed total inductance (nH).
    #[arg(long, allow_negative_numbers = true)]
    pub inductance_nh: f64,
    /// Fixed CPW stray capacitance (pF).
    #[arg(long, allow_negative_numbers = true)]
    pub c_cpw_pf: f64,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Resonance frequency (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub f_r_mhz: f64,
    /// Loaded quality factor.
    #[arg(long, allow_negative_numbers = true)]
    pub q_loaded: f64,
    /// Magnitude of the external quality factor.
    #[arg(long, allow_negative_numbers = true)]
    pub q_ext: f64,
    /// Impedance-mismatch angle (rad).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_rad: f64,
    /// Environment amplitude.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Environment phase (rad).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_rad: f64,
    /// Electric delay (ns).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delay_ns: f64,
    /// Full grid span in linewidths (f_r / Q_L).
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub span_linewidths: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    /// Gaussian noise sigma per quadrature.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Noise generator seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probe power recorded in the trace metadata (dBm).
    #[arg(long, allow_negative_numbers = true)]
    pub power_dbm: Option<f64>,
    /// Temperature recorded in the trace metadata (K).
    #[arg(long, allow_negative_numbers = true)]
    pub temperature_k: Option<f64>,
    /// Label recorded in the trace metadata.
    #[arg(long)]
    pub label: Option<String>,
    /// Output trace CSV path.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Input trace (CSV, .s1p, or .s2p).
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_parser = ["csv", "touchstone"])]
    pub format: Option<String>,
    /// Crop the trace to frequencies above this value (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub f_min_mhz: Option<f64>,
    /// Crop the trace to frequencies below this value (MHz).
    #[arg(long, allow_negative_numbers = true)]
    pub f_max_mhz: Option<f64>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TlsFitArgs {
    /// Input CSV with header `temperature_k,f_r_hz[,sigma_f_hz]`.
    #[arg(long)]
    pub data: PathBuf,
    /// Filling factor F (fixed, not fitted).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub filling_factor: f64,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Trace CSV files carrying `power_dbm` metadata.
    #[arg(required = true)]
    pub traces: Vec<PathBuf>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the sweep table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Result JSON files (fit, calibration, sweep, TLS fit).
    pub inputs: Vec<PathBuf>,
    /// Directory for the emitted CSV tables and SVG plots.
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Design record emitted by `tadpole design`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DesignRecord {
    pub schema_version: u32,
    pub kind: String,
    pub target_frequency_mhz: f64,
    pub area_um2: f64,
    pub inductance_nh: f64,
    /// "override" or "cpw-analytic".
    pub inductance_source: String,
    pub c_ppc_pf: f64,
    pub c_cpw_pf: f64,
    pub c_cpw_source: String,
    pub c_total_pf: f64,
    /// Forward-model check of the resonance frequency (MHz).
    pub f_r_check_mhz: f64,
    pub z_c_ohm: f64,
    pub l_tot_over_lambda0: f64,
    pub eps_eff: f64,
    pub notes: Vec<String>,
}

/// Calibration record emitted by `tadpole calibrate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub schema_version: u32,
    pub kind: String,
    pub c0_ff_per_um2: f64,
    pub c0_sigma_ff_per_um2: f64,
    pub inductance_nh: f64,
    pub c_cpw_pf: f64,
    pub calibration: C0Calibration,
    pub rows: Vec<CalibrationEcho>,
}

/// Input row echoed into the calibration record for downstream plotting.
#[derive(Debug, Serialize, Deserialize)]
pub struct CalibrationEcho {
    pub label: Option<String>,
    pub area_um2: f64,
    pub f_meas_mhz: f64,
}

/// TLS fit record with the fitted curve inputs echoed for plotting.
#[derive(Debug, Serialize, Deserialize)]
pub struct TlsFitRecord {
    #[serde(flatten)]
    pub fit: TlsFit,
    pub rows: Vec<TemperatureRow>,
}

/// Entry point: parse, dispatch, map errors to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{e}");
            emit_error_json("validation", 1, &e.to_string());
            return 1;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            let kind = match code {
                2 => "fit",
                3 => "io",
                _ => "validation",
            };
            emit_error_json(kind, code, &e.to_string());
            code
        }
    }
}

fn emit_error_json(kind: &str, exit_code: i32, message: &str) {
    let payload = serde_json::json!({
        "error": { "kind": kind, "exit_code": exit_code, "message": message }
    });
    eprintln!("{payload}");
}

/// Maps library errors onto the documented exit codes.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FitNonConvergence { .. } => 2,
        Error::Io { .. } | Error::Json(_) => 3,
        _ => 1,
    }
}

fn execute(cli: Cli) -> Result<()> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Design(args) => cmd_design(args, quiet),
        Command::Predict(args) => cmd_predict(args, quiet),
        Command::Calibrate(args) => cmd_calibrate(args, quiet),
        Command::Synth(args) => cmd_synth(args, quiet),
        Command::Fit(args) => cmd_fit(args, quiet),
        Command::TlsFit(args) => cmd_tls_fit(args, quiet),
        Command::Sweep(args) => cmd_sweep(args, quiet),
        Command::Report(args) => report::cmd_report(args, quiet),
    }
}

fn emit<T: Serialize>(value: &T, output: &Option<PathBuf>, quiet: bool) -> Result<()> {
    match output {
        Some(path) => {
            write_json(value, path)?;
            if !quiet {
                println!("wrote {}", path.display());
            }
        }
        None => println!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

/// Effective strip inductance and stray capacitance: explicit overrides win,
/// otherwise the analytic line parameters scaled by length.
fn resolve_lc(
    cpw: &CpwFlags,
    inductance_nh: Option<f64>,
    c_cpw_pf: Option<f64>,
    notes: &mut Vec<String>,
) -> Result<(f64, String, f64, String)> {
    let geom = cpw.geometry()?;
    let (l_strip, c_strip) = cpw::strip_lc(&geom)?;
    let (l, l_source) = match inductance_nh {
        Some(nh) => {
            if !(nh > 0.0 && nh.is_finite()) {
                return Err(Error::Domain(format!(
                    "inductance must be > 0, got {nh} nH"
                )));
            }
            (nh * NH, "override".to_string())
        }
        None => {
            notes.push(format!(
                "inductance {:.4} nH is the analytic strip value; it excludes coupler and \
                 lead contributions, so characterized devices often imply a larger effective \
                 inductance -- pass --inductance-nh to pin it",
                l_strip / NH
            ));
            (l_strip, "cpw-analytic".to_string())
        }
    };
    let (c, c_source) = match c_cpw_pf {
        Some(pf) => {
            if !(pf >= 0.0 && pf.is_finite()) {
                return Err(Error::Domain(format!("C_cpw must be >= 0, got {pf} pF")));
            }
            (pf * PF, "override".to_string())
        }
        None => (c_strip, "cpw-analytic".to_string()),
    };
    Ok((l, l_source, c, c_source))
}

fn cmd_design(args: DesignArgs, quiet: bool) -> Result<()> {
    let mut notes = Vec::new();
    let (l, l_source, c_cpw, c_cpw_source) =
        resolve_lc(&args.cpw, args.inductance_nh, args.c_cpw_pf, &mut notes)?;
    let f_target = args.target_frequency_mhz * MHZ;
    let c0 = args.c0_ff_per_um2 * FF_PER_UM2;
    let area = required_area(f_target, l, c0, c_cpw)?;
    let c_ppc = c0 * area;
    let model = LumpedModel::new(l, c_ppc, c_cpw)?;
    let geom = args.cpw.geometry()?;
    let eps_eff = geom.eps_eff();
    let f_check = lumped::resonance_frequency(&model);
    let l_tot = geom.length + area.sqrt();
    let ratio = cpw::size_ratio(l_tot, cpw::mode_wavelength(f_check, eps_eff)?)?;

    let summarize = !quiet && args.output.is_some();
    let record = DesignRecord {
        schema_version: 1,
        kind: "design".into(),
        target_frequency_mhz: args.target_frequency_mhz,
        area_um2: area / UM2,
        inductance_nh: l / NH,
        inductance_source: l_source,
        c_ppc_pf: c_ppc / PF,
        c_cpw_pf: c_cpw / PF,
        c_cpw_source,
        c_total_pf: model.total_capacitance() / PF,
        f_r_check_mhz: f_check / MHZ,
        z_c_ohm: lumped::characteristic_impedance(&model),
        l_tot_over_lambda0: ratio,
        eps_eff,
        notes,
    };
    if summarize {
        println!(
            "area {:.1} um^2 -> f_r {:.3} MHz, Z_c {:.3} ohm",
            record.area_um2, record.f_r_check_mhz, record.z_c_ohm
        );
    }
    emit(&record, &args.output, quiet)
}

fn cmd_predict(args: PredictArgs, quiet: bool) -> Result<()> {
    let mut notes = Vec::new();
    let (l, _, c_cpw, _) = resolve_lc(&args.cpw, args.inductance_nh, args.c_cpw_pf, &mut notes)?;
    let c0 = args.c0_ff_per_um2 * FF_PER_UM2;
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::Domain(format!(
            "c0 must be > 0, got {} fF/um^2",
            args.c0_ff_per_um2
        )));
    }
    let dataset = read_calibration_csv(&args.data)?;
    let geom = args.cpw.geometry()?;

    let mut designs = Vec::new();
    let mut measured = Vec::new();
    for (i, row) in dataset.rows().iter().enumerate() {
        designs.push(ResonatorDesign {
            label: row.label.clone().unwrap_or_else(|| format!("row{i}")),
            area: row.area,
            model: LumpedModel::new(l, c0 * row.area, c_cpw)?,
        });
        measured.push(row.f_measured);
    }
    let report = prediction_report(&designs, Some(&measured), geom.length, geom.eps_eff())?;

    if let Some(csv_path) = &args.csv {
        let mut out = String::from(
            "label,area_um2,f_pred_mhz,f_meas_mhz,rel_error_pct,z_c_ohm,l_tot_over_lambda0\n",
        );
        for row in &report.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.label,
                row.area / UM2,
                row.f_predicted / MHZ,
                row.f_measured
                    .map(|f| (f / MHZ).to_string())
                    .unwrap_or_default(),
                row.rel_error_percent
                    .map(|e| e.to_string())
                    .unwrap_or_default(),
                row.z_c,
                row.size_ratio
            ));
        }
        std::fs::write(csv_path, out).map_err(|e| Error::io(csv_path.display().to_string(), e))?;
        if !quiet {
            println!("wrote {}", csv_path.display());
        }
    }
    if !quiet && args.output.is_some() {
        for row in &report.rows {
            println!(
                "{}: predicted {:.1} MHz, measured {:.1} MHz, error {:+.2} %",
                row.label,
                row.f_predicted / MHZ,
                row.f_measured.unwrap_or(f64::NAN) / MHZ,
                row.rel_error_percent.unwrap_or(f64::NAN)
            );
        }
    }
    emit(&report, &args.output, quiet)
}

fn cmd_calibrate(args: CalibrateArgs, quiet: bool) -> Result<()> {
    let dataset = read_calibration_csv(&args.data)?;
    let l = args.inductance_nh * NH;
    let c_cpw = args.c_cpw_pf * PF;
    let calibration = calibrate_c0(&dataset, l, c_cpw)?;
    let record = CalibrationRecord {
        schema_version: 1,
        kind: "calibration".into(),
        c0_ff_per_um2: calibration.c0 / FF_PER_UM2,
        c0_sigma_ff_per_um2: calibration.c0_sigma / FF_PER_UM2,
        inductance_nh: args.inductance_nh,
        c_cpw_pf: args.c_cpw_pf,
        calibration,
        rows: dataset
            .rows()
            .iter()
            .map(|r| CalibrationEcho {
                label: r.label.clone(),
                area_um2: r.area / UM2,
                f_meas_mhz: r.f_measured / MHZ,
            })
            .collect(),
    };
    if !quiet && args.output.is_some() {
        println!(
            "c0 = {:.4} +- {:.4} fF/um^2",
            record.c0_ff_per_um2, record.c0_sigma_ff_per_um2
        );
    }
    emit(&record, &args.output, quiet)
}

fn cmd_synth(args: SynthArgs, quiet: bool) -> Result<()> {
    let params = NotchParams::new(
        args.f_r_mhz * MHZ,
        args.q_loaded,
        args.q_ext,
        args.phi_rad,
        args.amplitude,
        args.alpha_rad,
        args.delay_ns * NS,
    )?;
    if args.points < crate::trace::MIN_POINTS {
        return Err(Error::Domain(format!(
            "need at least {} grid points, got {}",
            crate::trace::MIN_POINTS,
            args.points
        )));
    }
    if !(args.span_linewidths > 0.0 && args.span_linewidths.is_finite()) {
        return Err(Error::Domain(format!(
            "span must be > 0 linewidths, got {}",
            args.span_linewidths
        )));
    }
    let grid = centered_grid(&params, args.span_linewidths / 2.0, args.points);
    let mut trace = synthesize_trace(&params, &grid, args.sigma, args.seed)?;
    trace.power_dbm = args.power_dbm;
    trace.temperature_k = args.temperature_k;
    trace.label = args.label;
    write_trace(&trace, &args.output)?;
    if !quiet {
        println!(
            "wrote {} ({} points, sigma {})",
            args.output.display(),
            trace.len(),
            args.sigma
        );
    }
    Ok(())
}

fn cmd_fit(args: FitArgs, quiet: bool) -> Result<()> {
    let format = match args.format.as_deref() {
        Some("csv") => TraceFormat::Csv,
        Some("touchstone") => TraceFormat::Touchstone,
        Some(other) => return Err(Error::Config(format!("unknown trace format '{other}'"))),
        None => TraceFormat::from_path(&args.input),
    };
    let mut trace = read_trace(&args.input, format)?;
    if args.f_min_mhz.is_some() || args.f_max_mhz.is_some() {
        let lo = args.f_min_mhz.map(|f| f * MHZ).unwrap_or(f64::NEG_INFINITY);
        let hi = args.f_max_mhz.map(|f| f * MHZ).unwrap_or(f64::INFINITY);
        trace = trace.crop(lo, hi)?;
    }
    let result = extract_notch(&trace)?;
    if !quiet && args.output.is_some() {
        println!(
            "f_r = {:.6} MHz, Q_L = {:.1}, |Q_e| = {:.1}, Q_i = {:.1}, tan(delta) = {:.3e}",
            result.params.f_r / MHZ,
            result.params.q_loaded,
            result.params.q_ext_mag,
            result.q_internal,
            result.tan_delta
        );
        for w in &result.warnings {
            println!("warning: {w}");
        }
    }
    emit(&result, &args.output, quiet)
}

fn cmd_tls_fit(args: TlsFitArgs, quiet: bool) -> Result<()> {
    let dataset = read_temperature_csv(&args.data)?;
    let fit = fit_tls(&dataset, args.filling_factor, None)?;
    let record = TlsFitRecord {
        fit,
        rows: dataset.rows().to_vec(),
    };
    if !quiet && args.output.is_some() {
        println!(
            "f0 = {:.6} MHz +- {:.3} kHz, delta0 = {:.4e} +- {:.2e}",
            record.fit.f0 / MHZ,
            record.fit.f0_sigma / 1e3,
            record.fit.delta0,
            record.fit.delta0_sigma
        );
    }
    emit(&record, &args.output, quiet)
}

fn cmd_sweep(args: SweepArgs, quiet: bool) -> Result<()> {
    let traces = args
        .traces
        .iter()
        .map(|p| read_trace(p, TraceFormat::from_path(p)))
        .collect::<Result<Vec<_>>>()?;
    let sweep = analyze_power_sweep(&traces)?;
    let csv = power_sweep_csv(&sweep);
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv).map_err(|e| Error::io(path.display().to_string(), e))?;
        if !quiet {
            println!("wrote {}", path.display());
        }
    }
    if !quiet && args.output.is_some() {
        print!("{csv}");
    }
    match &args.output {
        Some(_) => emit(&sweep, &args.output, quiet),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
