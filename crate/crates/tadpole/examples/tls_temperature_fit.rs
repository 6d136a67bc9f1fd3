//! Two-level-system temperature analysis: generate a frequency-versus-
//! temperature curve, add measurement noise, fit (f0, delta0) back out, and
//! compare the loss-tangent law against the fitted values.
//!
//! ```bash
//! cargo run -p tadpole --example tls_temperature_fit
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tadpole::tls::{
    fit_tls, tls_frequency, tls_loss_tangent, TemperatureDataset, TemperatureRow, TlsParams,
};

fn main() -> tadpole::Result<()> {
    let truth = TlsParams::new(500e6, 3e-4, 1.0)?;
    println!(
        "truth: f0 = {} MHz, delta0 = {:.1e}, F = {}",
        truth.f0 / 1e6,
        truth.delta0,
        truth.filling_factor
    );

    // 20 temperature points, 25 mK to 500 mK, 1 kHz frequency noise.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<TemperatureRow> = (0..20)
        .map(|i| {
            let t = 0.025 + (0.5 - 0.025) * i as f64 / 19.0;
            let noise: f64 = StandardNormal.sample(&mut rng);
            Ok(TemperatureRow {
                temperature_k: t,
                f_r_hz: tls_frequency(t, &truth)? + 1e3 * noise,
                sigma_f_hz: Some(1e3),
            })
        })
        .collect::<tadpole::Result<_>>()?;
    let dataset = TemperatureDataset::new(rows)?;

    let fit = fit_tls(&dataset, 1.0, None)?;
    println!(
        "fit:   f0 = {:.6} MHz (+- {:.0} Hz), delta0 = {:.4e} (+- {:.1e})",
        fit.f0 / 1e6,
        fit.f0_sigma,
        fit.delta0,
        fit.delta0_sigma
    );
    println!(
        "       ln-argument convention: {}",
        fit.log_argument_convention
    );

    println!(
        "\n{:>8} {:>14} {:>12} {:>12}",
        "T (mK)", "shift (kHz)", "resid (Hz)", "tan(delta)"
    );
    let fitted = TlsParams::new(fit.f0, fit.delta0, 1.0)?;
    for (row, residual) in dataset.rows().iter().zip(&fit.residuals).step_by(3) {
        println!(
            "{:>8.0} {:>14.2} {:>12.0} {:>12.3e}",
            row.temperature_k * 1e3,
            (tls_frequency(row.temperature_k, &fitted)? - fit.f0) / 1e3,
            residual,
            tls_loss_tangent(row.temperature_k, row.f_r_hz, fit.delta0)?
        );
    }
    Ok(())
}
