//! Report emission: build calibration, fit, sweep, and TLS results with
//! the library, then drive the embedded `report` command to turn them into
//! CSV tables and SVG plots.
//!
//! ```bash
//! cargo run -p tadpole --example report_artifacts
//! ```

use std::path::Path;

use tadpole::lumped::{calibrate_c0, read_calibration_csv};
use tadpole::notch::{analyze_power_sweep, extract_notch};
use tadpole::s21::{centered_grid, synthesize_trace, NotchParams};
use tadpole::tls::{fit_tls, tls_frequency, TemperatureDataset, TemperatureRow, TlsParams};
use tadpole::trace::write_json;

fn main() -> tadpole::Result<()> {
    let dir = std::env::temp_dir().join("tadpole_report_demo");
    std::fs::create_dir_all(&dir).map_err(|e| tadpole::Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;

    // Calibration record (uses the CLI record type so `report` can plot it).
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/table1.csv");
    let dataset = read_calibration_csv(&data)?;
    let calibration = calibrate_c0(&dataset, 1.0706e-9, 0.26e-12)?;
    let cal_record = tadpole::cli::CalibrationRecord {
        schema_version: 1,
        kind: "calibration".into(),
        c0_ff_per_um2: calibration.c0 * 1e3,
        c0_sigma_ff_per_um2: calibration.c0_sigma * 1e3,
        inductance_nh: 1.0706,
        c_cpw_pf: 0.26,
        calibration,
        rows: dataset
            .rows()
            .iter()
            .map(|r| tadpole::cli::CalibrationEcho {
                label: r.label.clone(),
                area_um2: r.area * 1e12,
                f_meas_mhz: r.f_measured / 1e6,
            })
            .collect(),
    };
    let cal_path = dir.join("calibration.json");
    write_json(&cal_record, &cal_path)?;

    // A single notch fit.
    let params = NotchParams::new(500e6, 5000.0, 50_000.0, 0.2, 0.8, 1.0, 30e-9)?;
    let grid = centered_grid(&params, 5.0, 1201);
    let mut trace = synthesize_trace(&params, &grid, 0.005, 3)?;
    trace.power_dbm = Some(-118.0);
    trace.label = Some("demo".into());
    let fit_path = dir.join("fit.json");
    write_json(&extract_notch(&trace)?, &fit_path)?;

    // A small power sweep.
    let mut sweep_traces = Vec::new();
    for (i, power) in [-140.0, -128.0, -116.0, -104.0].iter().enumerate() {
        let mut t = synthesize_trace(&params, &grid, 0.004, 10 + i as u64)?;
        t.power_dbm = Some(*power);
        sweep_traces.push(t);
    }
    let sweep_path = dir.join("sweep.json");
    write_json(&analyze_power_sweep(&sweep_traces)?, &sweep_path)?;

    // A TLS temperature fit with the inputs echoed for plotting.
    let truth = TlsParams::new(500e6, 3e-4, 1.0)?;
    let rows: Vec<TemperatureRow> = (0..16)
        .map(|i| {
            let t = 0.025 + 0.03 * i as f64;
            Ok(TemperatureRow {
                temperature_k: t,
                f_r_hz: tls_frequency(t, &truth)?,
                sigma_f_hz: None,
            })
        })
        .collect::<tadpole::Result<_>>()?;
    let temp_data = TemperatureDataset::new(rows)?;
    let tls_record = tadpole::cli::TlsFitRecord {
        fit: fit_tls(&temp_data, 1.0, None)?,
        rows: temp_data.rows().to_vec(),
    };
    let tls_path = dir.join("tls.json");
    write_json(&tls_record, &tls_path)?;

    // Drive the embedded CLI to produce the report.
    let out_dir = dir.join("report");
    let code = tadpole::cli::run([
        "tadpole".to_string(),
        "report".into(),
        "--out-dir".into(),
        out_dir.display().to_string(),
        cal_path.display().to_string(),
        fit_path.display().to_string(),
        sweep_path.display().to_string(),
        tls_path.display().to_string(),
    ]);
    assert_eq!(code, 0);

    println!("report written to {}:", out_dir.display());
    let mut names: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    Ok(())
}
