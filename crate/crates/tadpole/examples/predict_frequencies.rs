//! Frequency prediction table: forward-model every bundled resonator and
//! compare against its measured frequency.
//!
//! ```bash
//! cargo run -p tadpole --example predict_frequencies
//! ```

use std::path::Path;

use tadpole::lumped::{prediction_report, read_calibration_csv, LumpedModel, ResonatorDesign};

fn main() -> tadpole::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/table1.csv");
    let dataset = read_calibration_csv(&path)?;

    // Fixed model inputs: calibrated plate capacitance density, the
    // table-implied inductance, and the stray capacitance.
    let c0 = 1.39e-3;
    let inductance = 1.0706e-9;
    let c_cpw = 0.26e-12;

    let mut designs = Vec::new();
    let mut measured = Vec::new();
    for row in dataset.rows() {
        designs.push(ResonatorDesign {
            label: row.label.clone().unwrap_or_default(),
            area: row.area,
            model: LumpedModel::new(inductance, c0 * row.area, c_cpw)?,
        });
        measured.push(row.f_measured);
    }
    let report = prediction_report(&designs, Some(&measured), 2000e-6, 6.45)?;

    println!(
        "{:<3} {:>10} {:>10} {:>8} {:>8} {:>10}",
        "", "pred MHz", "meas MHz", "err %", "Z_c", "l/lambda0"
    );
    for row in &report.rows {
        println!(
            "{:<3} {:>10.1} {:>10.1} {:>8.2} {:>8.2} {:>10.4}",
            row.label,
            row.f_predicted / 1e6,
            row.f_measured.unwrap() / 1e6,
            row.rel_error_percent.unwrap(),
            row.z_c,
            row.size_ratio
        );
    }
    let mean_abs: f64 = report
        .rows
        .iter()
        .map(|r| r.rel_error_percent.unwrap().abs())
        .sum::<f64>()
        / report.rows.len() as f64;
    println!(
        "\nmean |error| = {mean_abs:.2} % ({})",
        report.error_convention
    );
    Ok(())
}
