//! Synthesize a noisy notch trace and run the full extraction pipeline:
//! delay removal, circle fit, phase fit, joint refinement, uncertainties,
//! and photon metrics.
//!
//! ```bash
//! cargo run -p tadpole --example synth_and_fit
//! ```

use tadpole::notch::extract_notch;
use tadpole::s21::{centered_grid, synthesize_trace, NotchParams};

fn main() -> tadpole::Result<()> {
    let truth = NotchParams::new(
        500e6,    // f_r
        5_000.0,  // Q_L
        50_000.0, // |Q_e|
        0.2,      // phi
        0.8,      // amplitude
        1.0,      // alpha
        30e-9,    // delay
    )?;
    println!(
        "truth:  f_r = {} MHz, Q_L = {}, |Q_e| = {}, Q_i = {:.1}",
        truth.f_r / 1e6,
        truth.q_loaded,
        truth.q_ext_mag,
        truth.q_internal()
    );

    // 2001 points over +-5 linewidths, 1% amplitude noise per quadrature.
    let grid = centered_grid(&truth, 5.0, 2001);
    let mut trace = synthesize_trace(&truth, &grid, 0.01 * truth.amplitude, 7)?;
    trace.power_dbm = Some(-120.0);
    trace.label = Some("demo".into());
    println!(
        "trace:  {} points, rng {}",
        trace.len(),
        trace.rng.as_deref().unwrap()
    );

    let fit = extract_notch(&trace)?;
    println!(
        "fitted: f_r = {:.6} MHz (+- {:.0} Hz)",
        fit.params.f_r / 1e6,
        fit.sigma.f_r
    );
    println!(
        "        Q_L = {:.1} (+- {:.1}), |Q_e| = {:.0} (+- {:.0})",
        fit.params.q_loaded, fit.sigma.q_loaded, fit.params.q_ext_mag, fit.sigma.q_ext_mag
    );
    println!(
        "        Q_i = {:.1} (+- {:.1}), tan(delta) = {:.3e}",
        fit.q_internal, fit.sigma.q_internal, fit.tan_delta
    );
    println!(
        "        phi = {:.4} rad, delay = {:.3} ns, residual rms = {:.2e}",
        fit.params.phi,
        fit.params.delay * 1e9,
        fit.residual_rms
    );
    let photon = fit.photon.unwrap();
    println!(
        "        at -120 dBm: <n> = {:.1}, single-photon power = {:.1} dBm",
        photon.mean_photons,
        tadpole::notch::watts_to_dbm(photon.single_photon_power_watts)
    );
    println!("        convention: {}", fit.q_i_convention);
    Ok(())
}
