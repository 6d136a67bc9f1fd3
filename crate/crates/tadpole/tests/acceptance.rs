//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test -p tadpole --test acceptance -- --nocapture`).
//!
//! Reference values come from the bundled characterization table
//! (`data/table1_full.csv`); independent numerical oracles (quadrature,
//! Lanczos digamma, brute-force statistics) live in this file and never
//! call the implementation paths they check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tadpole::cpw::{ellipk, mode_wavelength, size_ratio};
use tadpole::lumped::{
    calibrate_c0, characteristic_impedance, implied_inductance, prediction_report,
    read_calibration_csv, relative_error_percent, CalibrationDataset, CalibrationRow, LumpedModel,
    ResonatorDesign,
};
use tadpole::notch::{extract_notch, photon_metrics};
use tadpole::s21::{centered_grid, synthesize_trace, NotchParams};
use tadpole::tls::{
    digamma, fit_tls, tls_frequency, TemperatureDataset, TemperatureRow, TlsParams,
};

const FF_PER_UM2: f64 = 1e-3;
const UM2: f64 = 1e-12;
const PF: f64 = 1e-12;
const NH: f64 = 1e-9;
const MHZ: f64 = 1e6;

/// One row of the bundled characterization table.
#[derive(Debug, Clone)]
struct TableRow {
    label: String,
    f_meas: f64,
    f_pred: f64,
    rel_err_pct: f64,
    z_c: f64,
    size_ratio: f64,
    area: f64,
    c_ratio_pct: f64,
    #[allow(dead_code)]
    single_photon_dbm: f64,
}

fn load_table() -> Vec<TableRow> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/table1_full.csv");
    let content = std::fs::read_to_string(path).expect("bundled table present");
    let mut rows = Vec::new();
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("label,") {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 9, "table row width");
        rows.push(TableRow {
            label: f[0].into(),
            f_meas: f[1].parse::<f64>().unwrap() * MHZ,
            f_pred: f[2].parse::<f64>().unwrap() * MHZ,
            rel_err_pct: f[3].parse().unwrap(),
            z_c: f[4].parse().unwrap(),
            size_ratio: f[5].parse().unwrap(),
            area: f[6].parse::<f64>().unwrap() * UM2,
            c_ratio_pct: f[7].parse().unwrap(),
            single_photon_dbm: f[8].parse().unwrap(),
        });
    }
    assert_eq!(rows.len(), 12);
    rows
}

const C0_REFERENCE: f64 = 1.39 * FF_PER_UM2;

/// Total capacitance of a row: plate capacitance from the reference c0,
/// scaled up by the printed stray-to-plate ratio.
fn row_capacitances(row: &TableRow) -> (f64, f64) {
    let c_ppc = C0_REFERENCE * row.area;
    let c_cpw = c_ppc * row.c_ratio_pct / 100.0;
    (c_ppc, c_cpw)
}

fn row_implied_inductance(row: &TableRow) -> f64 {
    let (c_ppc, c_cpw) = row_capacitances(row);
    implied_inductance(row.f_pred, c_ppc + c_cpw).unwrap()
}

#[test]
fn criterion_01_implied_inductance_consistency() {
    let rows = load_table();
    let inductances: Vec<f64> = rows.iter().map(row_implied_inductance).collect();
    let n = inductances.len() as f64;
    let mean = inductances.iter().sum::<f64>() / n;
    let var = inductances.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let rsd = var.sqrt() / mean;

    assert!(
        (mean - 1.071 * NH).abs() <= 0.005 * NH,
        "mean inductance {:.4} nH is not ~1.071 nH",
        mean / NH
    );
    assert!(
        rsd < 0.005,
        "relative standard deviation {:.4}% >= 0.5%",
        rsd * 100.0
    );
    println!(
        "criterion 01 PASS: mean implied L = {:.4} nH, rsd = {:.3}% (< 0.5%)",
        mean / NH,
        rsd * 100.0
    );
}

#[test]
fn criterion_02_zc_reproduction() {
    let rows = load_table();
    let mut report = String::new();
    let mut violations = Vec::new();
    for row in &rows {
        let (c_ppc, c_cpw) = row_capacitances(row);
        let l = row_implied_inductance(row);
        let model = LumpedModel::new(l, c_ppc, c_cpw).unwrap();
        let z = characteristic_impedance(&model);
        report.push_str(&format!(
            "  {}: computed Z_c = {:.4} ohm, table {:.1} ohm (delta {:+.4})\n",
            row.label,
            z,
            row.z_c,
            z - row.z_c
        ));
        if (z - row.z_c).abs() > 0.05 {
            violations.push(format!(
                "{}: |{:.4} - {:.1}| = {:.4} > 0.05",
                row.label,
                z,
                row.z_c,
                (z - row.z_c).abs()
            ));
        }
    }
    print!("{report}");
    assert!(
        violations.is_empty(),
        "Z_c from row-implied L and C_total misses the printed column on {} of 12 rows:\n{}",
        violations.len(),
        violations.join("\n")
    );
    println!("criterion 02 PASS: every Z_c within 0.05 ohm of the table");
}

#[test]
fn criterion_03_c0_calibration() {
    let rows = load_table();
    let dataset = CalibrationDataset::new(
        rows.iter()
            .map(|r| CalibrationRow {
                label: Some(r.label.clone()),
                area: r.area,
                f_measured: r.f_meas,
            })
            .collect(),
    )
    .unwrap();
    let cal = calibrate_c0(&dataset, 1.0706 * NH, 0.26 * PF).unwrap();
    let c0 = cal.c0 / FF_PER_UM2;
    assert!(
        (c0 - 1.39).abs() <= 0.05,
        "calibrated c0 = {c0:.4} fF/um^2 outside 1.39 +- 0.05"
    );
    // The bundled CSV (the CLI-facing fixture) gives the same answer.
    let path = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/table1.csv"));
    let from_csv =
        calibrate_c0(&read_calibration_csv(path).unwrap(), 1.0706 * NH, 0.26 * PF).unwrap();
    assert!((from_csv.c0 - cal.c0).abs() <= 1e-12 * cal.c0);
    println!(
        "criterion 03 PASS: c0 = {:.4} +- {:.4} fF/um^2 (within 1.39 +- 0.05)",
        c0,
        cal.c0_sigma / FF_PER_UM2
    );
}

#[test]
fn criterion_04_relative_error_column() {
    // The error column is recomputed through the prediction pipeline: model
    // frequencies from the calibrated constants (L = 1.0706 nH,
    // c0 = 1.39 fF/um^2, uniform C_cpw = 0.26 pF) against the measured
    // values, measured-frequency denominator. The printed column carries
    // magnitudes (three rows have predictions above measurement), so the
    // signed recomputation is compared by magnitude.
    let rows = load_table();
    let designs: Vec<ResonatorDesign> = rows
        .iter()
        .map(|r| ResonatorDesign {
            label: r.label.clone(),
            area: r.area,
            model: LumpedModel::new(1.0706 * NH, C0_REFERENCE * r.area, 0.26 * PF).unwrap(),
        })
        .collect();
    let measured: Vec<f64> = rows.iter().map(|r| r.f_meas).collect();
    let report = prediction_report(&designs, Some(&measured), 2000e-6, 6.45).unwrap();

    let mut worst = 0.0_f64;
    for (row, table) in report.rows.iter().zip(&rows) {
        let recomputed = row.rel_error_percent.unwrap();
        // Consistency with the direct definition.
        assert_eq!(
            recomputed,
            relative_error_percent(table.f_meas, row.f_predicted)
        );
        let delta = recomputed.abs() - table.rel_err_pct;
        println!(
            "  {}: recomputed {:+.4}%, table {:.2}% (delta {:+.4} pp)",
            table.label, recomputed, table.rel_err_pct, delta
        );
        assert!(
            delta.abs() <= 0.05,
            "{}: |{:.4}| vs {:.2} differs by {:.4} pp > 0.05",
            table.label,
            recomputed,
            table.rel_err_pct,
            delta.abs()
        );
        worst = worst.max(delta.abs());
    }
    println!(
        "criterion 04 PASS: every relative error within 0.05 pp of the table (worst {worst:.4})"
    );
}

#[test]
fn criterion_05_size_ratios() {
    let rows = load_table();
    let strip_length = 2000e-6;
    for row in &rows {
        let l_tot = strip_length + row.area.sqrt();
        let lambda0 = mode_wavelength(row.f_meas, 6.45).unwrap();
        let ratio = size_ratio(l_tot, lambda0).unwrap();
        let rel = (ratio / row.size_ratio - 1.0).abs();
        assert!(
            rel <= 0.10,
            "{}: computed l_tot/lambda0 = {:.5} vs table {:.4} ({:.1}% off)",
            row.label,
            ratio,
            row.size_ratio,
            rel * 100.0
        );
    }
    println!("criterion 05 PASS: all 12 size ratios within 10% of the table");
}

fn random_params(rng: &mut ChaCha8Rng) -> NotchParams {
    let log_uniform =
        |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> f64 { lo * (hi / lo).powf(rng.gen::<f64>()) };
    let f_r = log_uniform(rng, 0.2e9, 2e9);
    let q_loaded = log_uniform(rng, 2e3, 5e4);
    let q_ext_mag = q_loaded * log_uniform(rng, 1.2, 30.0);
    let phi = rng.gen_range(-1.0..1.0);
    let amplitude = rng.gen_range(0.3..2.0);
    let alpha = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let delay = rng.gen_range(0.0..40e-9);
    NotchParams::new(f_r, q_loaded, q_ext_mag, phi, amplitude, alpha, delay).unwrap()
}

#[test]
fn criterion_06_noiseless_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut worst_f: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for case in 0..1000 {
        let truth = random_params(&mut rng);
        let grid = centered_grid(&truth, 5.0, 601);
        let trace = synthesize_trace(&truth, &grid, 0.0, case).unwrap();
        let fit = extract_notch(&trace)
            .unwrap_or_else(|e| panic!("case {case} failed: {e}\nparams: {truth:?}"));
        let ef = (fit.params.f_r / truth.f_r - 1.0).abs();
        let eql = (fit.params.q_loaded / truth.q_loaded - 1.0).abs();
        let eqe = (fit.params.q_ext_mag / truth.q_ext_mag - 1.0).abs();
        let eqi = (fit.q_internal / truth.q_internal() - 1.0).abs();
        assert!(
            ef <= 1e-6,
            "case {case}: f_r relative error {ef:.3e} > 1e-6\nparams: {truth:?}"
        );
        for (name, e) in [("Q_L", eql), ("|Q_e|", eqe), ("Q_i", eqi)] {
            assert!(
                e <= 1e-4,
                "case {case}: {name} relative error {e:.3e} > 1e-4\nparams: {truth:?}"
            );
        }
        worst_f = worst_f.max(ef);
        worst_q = worst_q.max(eql.max(eqe).max(eqi));
    }
    println!(
        "criterion 06 PASS: 1000 noiseless round trips (worst f_r err {:.2e}, worst Q err {:.2e})",
        worst_f, worst_q
    );
}

#[test]
fn criterion_07_noise_monte_carlo() {
    let truth = NotchParams::new(500e6, 5000.0, 50_000.0, 0.2, 0.8, 1.0, 30e-9).unwrap();
    let grid = centered_grid(&truth, 5.0, 2001);
    let mut ok_f = 0;
    let mut ok_qi = 0;
    for seed in 0..100 {
        let trace = synthesize_trace(&truth, &grid, 0.01 * truth.amplitude, seed).unwrap();
        let fit = extract_notch(&trace).unwrap();
        if (fit.params.f_r / truth.f_r - 1.0).abs() <= 1e-5 {
            ok_f += 1;
        }
        if (fit.q_internal / truth.q_internal() - 1.0).abs() <= 0.05 {
            ok_qi += 1;
        }
    }
    assert!(ok_f >= 95, "f_r within 1e-5 for only {ok_f}/100 seeds");
    assert!(ok_qi >= 95, "Q_i within 5% for only {ok_qi}/100 seeds");
    println!(
        "criterion 07 PASS: sigma = 0.01a, 100 seeds -> f_r ok {ok_f}/100, Q_i ok {ok_qi}/100"
    );
}

#[test]
fn criterion_08_photon_number_identities() {
    let (f_r, q_l, q_e) = (290.5e6, 4545.0, 50_000.0);
    let base = photon_metrics(f_r, q_l, q_e, 1e-15).unwrap();

    // Exact identity: probing at the single-photon power gives <n> = 1.
    let unit = photon_metrics(f_r, q_l, q_e, base.single_photon_power_watts).unwrap();
    assert_eq!(unit.mean_photons, 1.0);

    // Linearity over six decades of input power.
    for k in 0..=6 {
        let p = 1e-18 * 10f64.powi(k);
        let n = photon_metrics(f_r, q_l, q_e, p).unwrap().mean_photons;
        let expected = p / base.single_photon_power_watts;
        assert!(
            (n / expected - 1.0).abs() <= 1e-12,
            "linearity broke at 10^{k}: {n} vs {expected}"
        );
    }
    println!("criterion 08 PASS: single-photon identity exact; <n> linear over 6 decades");
}

#[test]
fn criterion_09_tls_fit_round_trips() {
    let truth = TlsParams::new(500e6, 3e-4, 1.0).unwrap();
    let temps: Vec<f64> = (0..20)
        .map(|i| 0.025 + (0.5 - 0.025) * i as f64 / 19.0)
        .collect();
    let clean: Vec<f64> = temps
        .iter()
        .map(|t| tls_frequency(*t, &truth).unwrap())
        .collect();

    // Noiseless recovery to 1e-10 relative.
    let dataset = TemperatureDataset::new(
        temps
            .iter()
            .zip(&clean)
            .map(|(t, f)| TemperatureRow {
                temperature_k: *t,
                f_r_hz: *f,
                sigma_f_hz: None,
            })
            .collect(),
    )
    .unwrap();
    let fit = fit_tls(&dataset, 1.0, None).unwrap();
    assert!(
        (fit.f0 / truth.f0 - 1.0).abs() <= 1e-10,
        "noiseless f0 error {:.2e}",
        (fit.f0 / truth.f0 - 1.0).abs()
    );
    assert!(
        (fit.delta0 / truth.delta0 - 1.0).abs() <= 1e-10,
        "noiseless delta0 error {:.2e}",
        (fit.delta0 / truth.delta0 - 1.0).abs()
    );

    // 1 kHz Gaussian frequency noise, 100 seeds.
    let mut ok = 0;
    let mut f0_near_base = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<TemperatureRow> = temps
            .iter()
            .zip(&clean)
            .map(|(t, f)| {
                let noise: f64 = StandardNormal.sample(&mut rng);
                TemperatureRow {
                    temperature_k: *t,
                    f_r_hz: f + 1e3 * noise,
                    sigma_f_hz: None,
                }
            })
            .collect();
        let noisy = TemperatureDataset::new(rows).unwrap();
        let fit = fit_tls(&noisy, 1.0, None).unwrap();
        let f0_ok = (fit.f0 / truth.f0 - 1.0).abs() <= 10e-6;
        let d0_ok = (fit.delta0 / truth.delta0 - 1.0).abs() <= 0.02;
        if f0_ok && d0_ok {
            ok += 1;
        }
        if (fit.f0 / clean[0] - 1.0).abs() < 0.001 {
            f0_near_base += 1;
        }
    }
    assert!(
        ok >= 95,
        "noisy recovery within bounds for only {ok}/100 seeds"
    );
    assert_eq!(
        f0_near_base, 100,
        "fitted f0 strayed more than 0.1% from the base-temperature frequency"
    );
    println!(
        "criterion 09 PASS: noiseless 1e-10 recovery; noisy ok {ok}/100; f0 within 0.1% of base"
    );
}

/// Adaptive-Simpson quadrature of the defining elliptic integral; fully
/// independent of the AGM implementation.
fn ellipk_quadrature(k: f64) -> f64 {
    fn integrand(k2: f64, theta: f64) -> f64 {
        1.0 / (1.0 - k2 * theta.sin().powi(2)).sqrt()
    }
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn adapt(k2: f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = integrand(k2, lm);
        let frm = integrand(k2, rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        if depth == 0 || (left + right - whole).abs() <= 1e-15 * whole.abs() {
            left + right + (left + right - whole) / 15.0
        } else {
            adapt(k2, a, m, fa, flm, fm, left, depth - 1)
                + adapt(k2, m, b, fm, frm, fb, right, depth - 1)
        }
    }
    let k2 = k * k;
    let (a, b) = (0.0, std::f64::consts::FRAC_PI_2);
    let (fa, fb) = (integrand(k2, a), integrand(k2, b));
    let m = 0.5 * (a + b);
    let fm = integrand(k2, m);
    adapt(k2, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 44)
}

/// Digamma via the analytic derivative of the 9-term Lanczos (g = 7)
/// log-gamma approximation: an algorithm family independent of the
/// recurrence-plus-Bernoulli implementation.
fn digamma_lanczos(z: Complex64) -> Complex64 {
    #[allow(clippy::excessive_precision)] // published coefficient set
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    // ln Gamma(z) = ln(2 pi)/2 + (z - 1/2) ln t - t + ln A(z),
    // t = z + 6.5, A(z) = c0 + sum_i c_i / (z - 1 + i).
    let t = z + 6.5;
    let mut a = Complex64::new(COEFFS[0], 0.0);
    let mut da = Complex64::new(0.0, 0.0);
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        let denom = z + (i as f64 - 1.0);
        a += c / denom;
        da -= c / (denom * denom);
    }
    t.ln() + (z - 0.5) / t - 1.0 + da / a
}

#[test]
fn criterion_10_special_function_oracles() {
    // Elliptic integral vs quadrature on 100 random moduli.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_k: f64 = 0.0;
    for _ in 0..100 {
        let k: f64 = rng.gen::<f64>();
        let reference = ellipk_quadrature(k);
        let err = (ellipk(k).unwrap() - reference).abs() / reference;
        worst_k = worst_k.max(err);
    }
    assert!(
        worst_k <= 1e-12,
        "worst ellipk relative error {worst_k:.2e}"
    );

    // Oracle self-checks before it judges the implementation.
    let psi_one = digamma_lanczos(Complex64::new(1.0, 0.0));
    assert!((psi_one.re + 0.577_215_664_901_532_9).abs() < 1e-12);
    let tanh_identity = |y: f64| std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * y).tanh();
    assert!((digamma_lanczos(Complex64::new(0.5, 2.0)).im - tanh_identity(2.0)).abs() < 1e-12);

    // Digamma over the model's argument range 1/2 + iy, y in [1e-3, 1e3].
    let mut worst_psi: f64 = 0.0;
    for i in 0..=600 {
        let y = 1e-3 * 10f64.powf(6.0 * i as f64 / 600.0);
        let z = Complex64::new(0.5, y);
        let err = (digamma(z).unwrap() - digamma_lanczos(z)).norm();
        worst_psi = worst_psi.max(err);
    }
    assert!(
        worst_psi <= 1e-10,
        "worst digamma absolute error {worst_psi:.2e}"
    );
    println!(
        "criterion 10 PASS: ellipk within {worst_k:.2e} of quadrature; digamma within {worst_psi:.2e} of Lanczos"
    );
}

#[test]
fn criterion_11_loss_tangent_bracket() {
    // Internal quality factors spanning the low- and high-power saturation
    // values map onto the loss-tangent bracket 4.3e-4 down to 1.2e-4.
    let tan_low_q: f64 = 1.0 / 2.3e3;
    let tan_high_q: f64 = 1.0 / 8.5e3;
    assert!(
        (tan_low_q - 4.3e-4).abs() <= 0.05e-4,
        "1/2300 = {tan_low_q:.4e}"
    );
    assert!(
        (tan_high_q - 1.2e-4).abs() <= 0.05e-4,
        "1/8500 = {tan_high_q:.4e}"
    );

    // Monotone mapping keeps every intermediate Q inside the bracket.
    for i in 0..=20 {
        let q_i = 2.3e3 + (8.5e3 - 2.3e3) * i as f64 / 20.0;
        let tan_delta = 1.0 / q_i;
        assert!(tan_delta <= tan_low_q && tan_delta >= tan_high_q);
    }
    println!(
        "criterion 11 PASS: Q_i 2.3e3..8.5e3 maps to tan(delta) {tan_low_q:.3e}..{tan_high_q:.3e}"
    );
}
