//! Calibrate the capacitance per unit area against the bundled
//! characterization data: twelve measured (area, frequency) pairs with the
//! inductance and stray capacitance held fixed.
//!
//! ```bash
//! cargo run -p tadpole --example calibrate_c0
//! ```

use std::path::Path;

use tadpole::lumped::{calibrate_c0, read_calibration_csv};

fn main() -> tadpole::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/table1.csv");
    let dataset = read_calibration_csv(&path)?;

    let inductance = 1.0706e-9;
    let c_cpw = 0.26e-12;
    let cal = calibrate_c0(&dataset, inductance, c_cpw)?;

    println!(
        "c0 = {:.4} +- {:.4} fF/um^2 (L = {:.4} nH, C_cpw = {:.2} pF fixed)",
        cal.c0 * 1e3,
        cal.c0_sigma * 1e3,
        inductance * 1e9,
        c_cpw * 1e12
    );
    println!(
        "free line view: slope {:.4} fF/um^2, intercept {:.3} pF, R^2 = {:.5}",
        cal.line.slope * 1e3,
        cal.line.intercept * 1e12,
        cal.line.r_squared
    );

    println!("\nper-row residuals of implied total capacitance:");
    for (row, residual) in dataset.rows().iter().zip(&cal.residuals) {
        println!(
            "  {:<3} A = {:>9.0} um^2  f = {:>7.1} MHz  residual = {:+7.3} pF",
            row.label.as_deref().unwrap_or("?"),
            row.area * 1e12,
            row.f_measured / 1e6,
            residual * 1e12
        );
    }
    Ok(())
}
