//! Probe-power sweep analysis: synthesize traces whose internal quality
//! factor saturates at low and high power, fit every trace, and tabulate
//! Q_i, Q_e, photon number, and loss tangent per power point.
//!
//! ```bash
//! cargo run -p tadpole --example power_sweep
//! ```

use tadpole::notch::{analyze_power_sweep, power_sweep_csv};
use tadpole::s21::{centered_grid, synthesize_trace, NotchParams};

/// Smooth saturation between the low- and high-power plateaus.
fn q_internal_at(power_dbm: f64) -> f64 {
    let low = 2.3e3;
    let high = 8.5e3;
    let x = (power_dbm + 116.0) / 12.0;
    low + (high - low) / (1.0 + (-x).exp())
}

fn main() -> tadpole::Result<()> {
    let q_ext = 50_000.0;
    let mut traces = Vec::new();
    for i in 0..8 {
        let power = -144.0 + 8.0 * i as f64;
        let q_i = q_internal_at(power);
        let q_loaded = 1.0 / (1.0 / q_i + 1.0 / q_ext);
        let params = NotchParams::new(500e6, q_loaded, q_ext, 0.1, 1.0, 0.0, 20e-9)?;
        let grid = centered_grid(&params, 5.0, 1201);
        // Three repeats per power, averaged by the sweep analysis.
        for rep in 0..3 {
            let mut t = synthesize_trace(&params, &grid, 0.004, (i * 3 + rep) as u64)?;
            t.power_dbm = Some(power);
            t.label = Some("demo".into());
            traces.push(t);
        }
    }

    let sweep = analyze_power_sweep(&traces)?;
    print!("{}", power_sweep_csv(&sweep));

    println!(
        "\nloss-tangent span: {:.2e} (low power) to {:.2e} (high power)",
        sweep.rows.first().unwrap().tan_delta,
        sweep.rows.last().unwrap().tan_delta
    );
    Ok(())
}
