//! Six resonators multiplexed on one feed line: compose the product-law
//! trace, split it into windows around each dip, and fit every window.
//!
//! ```bash
//! cargo run -p tadpole --example multiplexed_readout
//! ```

use tadpole::notch::{extract_notch, split_windows};
use tadpole::s21::{compose_multiplexed, NotchParams};

fn main() -> tadpole::Result<()> {
    // One shared environment for the whole feed line.
    let (amplitude, alpha, delay) = (0.9, 0.4, 25e-9);
    let f_rs = [280e6, 313e6, 349e6, 390e6, 422e6, 455e6];
    let resonators: Vec<NotchParams> = f_rs
        .iter()
        .enumerate()
        .map(|(i, f_r)| {
            NotchParams::new(
                *f_r,
                4_000.0 + 400.0 * i as f64,
                45_000.0 + 3_000.0 * i as f64,
                0.1 - 0.03 * i as f64,
                amplitude,
                alpha,
                delay,
            )
        })
        .collect::<tadpole::Result<_>>()?;

    let grid: Vec<f64> = (0..120_001)
        .map(|i| 270e6 + (465e6 - 270e6) * i as f64 / 120_000.0)
        .collect();
    let trace = compose_multiplexed(&resonators, &grid)?;
    println!(
        "composed {} resonators on a {}-point trace",
        resonators.len(),
        trace.len()
    );

    // Windowing wants rough dip positions, e.g. from a peak finder or the
    // design values; deliberately offset here to show the tolerance.
    let approx: Vec<f64> = f_rs.iter().map(|f| f + 0.4e6).collect();
    let windows = split_windows(&trace, &approx)?;

    println!(
        "\n{:<4} {:>12} {:>9} {:>9} {:>9} {:>8}",
        "", "f_r (MHz)", "Q_L", "|Q_e|", "Q_i", "err %"
    );
    for (truth, window) in resonators.iter().zip(&windows) {
        let fit = extract_notch(window)?;
        println!(
            "{:<4} {:>12.4} {:>9.0} {:>9.0} {:>9.0} {:>8.3}",
            format!("{:.0}", truth.f_r / 1e6),
            fit.params.f_r / 1e6,
            fit.params.q_loaded,
            fit.params.q_ext_mag,
            fit.q_internal,
            (fit.q_internal / truth.q_internal() - 1.0) * 100.0
        );
    }
    Ok(())
}
