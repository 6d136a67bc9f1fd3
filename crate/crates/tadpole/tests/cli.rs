//! End-to-end tests of the `tadpole` binary: subcommand round trips, file
//! outputs, determinism, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tadpole"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn table1() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/table1.csv")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_lists_subcommands_with_unit_flags() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in [
        "design",
        "predict",
        "calibrate",
        "synth",
        "fit",
        "tls-fit",
        "sweep",
        "report",
    ] {
        assert!(text.contains(sub), "help missing subcommand {sub}");
    }
    let design_help = stdout(&run(&["design", "--help"]));
    for flag in [
        "--target-frequency-mhz",
        "--c0-ff-per-um2",
        "--inductance-nh",
        "--width-um",
    ] {
        assert!(design_help.contains(flag), "design help missing {flag}");
    }
}

#[test]
fn design_reproduces_reference_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("design.json");
    let out = run(&[
        "design",
        "--target-frequency-mhz",
        "286.8",
        "--c0-ff-per-um2",
        "1.39",
        "--inductance-nh",
        "1.0706",
        "--c-cpw-pf",
        "0.26",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let record = read_json(&path);
    let area = record["area_um2"].as_f64().unwrap();
    assert!((area - 206_721.0).abs() / 206_721.0 < 1e-3, "area {area}");
    let z_c = record["z_c_ohm"].as_f64().unwrap();
    assert!((z_c - 1.93).abs() < 0.01, "z_c {z_c}");
    assert_eq!(record["inductance_source"], "override");
}

#[test]
fn design_without_override_uses_analytic_inductance_and_notes_it() {
    let out = run(&[
        "design",
        "--target-frequency-mhz",
        "286.8",
        "--c0-ff-per-um2",
        "1.39",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let l_nh = record["inductance_nh"].as_f64().unwrap();
    assert!((l_nh - 0.8473).abs() < 0.001, "analytic L {l_nh} nH");
    assert_eq!(record["inductance_source"], "cpw-analytic");
    assert!(!record["notes"].as_array().unwrap().is_empty());
}

#[test]
fn design_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = run(&[
            "design",
            "--target-frequency-mhz",
            "450",
            "--c0-ff-per-um2",
            "1.39",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn validation_error_exits_one_with_json_on_stderr() {
    let out = run(&[
        "design",
        "--target-frequency-mhz=-5",
        "--c0-ff-per-um2",
        "1.39",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["exit_code"], 1);
    assert_eq!(err["error"]["kind"], "validation");

    // Infeasible target: stray capacitance alone exceeds the required total.
    let out = run(&[
        "design",
        "--target-frequency-mhz",
        "99000",
        "--c0-ff-per-um2",
        "1.39",
        "--inductance-nh",
        "1.0",
        "--c-cpw-pf",
        "0.26",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_input_file_exits_three() {
    let out = run(&["fit", "--input", "/nonexistent/trace.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn report_with_zero_inputs_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["report", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn calibrate_bundled_table_recovers_reference_c0() {
    let out = run(&[
        "calibrate",
        "--data",
        table1().to_str().unwrap(),
        "--inductance-nh",
        "1.0706",
        "--c-cpw-pf",
        "0.26",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c0 = record["c0_ff_per_um2"].as_f64().unwrap();
    assert!((c0 - 1.39).abs() <= 0.05, "c0 {c0} outside 1.39 +- 0.05");
}

#[test]
fn synth_then_fit_round_trips_noiselessly() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let fit_json = dir.path().join("fit.json");
    let out = run(&[
        "synth",
        "--f-r-mhz",
        "500",
        "--q-loaded",
        "5000",
        "--q-ext",
        "50000",
        "--phi-rad",
        "0.2",
        "--amplitude",
        "0.8",
        "--alpha-rad",
        "1.0",
        "--delay-ns",
        "30",
        "--sigma",
        "0",
        "--power-dbm",
        "-120",
        "--output",
        trace.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = run(&[
        "fit",
        "--input",
        trace.to_str().unwrap(),
        "--output",
        fit_json.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let record = read_json(&fit_json);
    let f_r = record["params"]["f_r"].as_f64().unwrap();
    let q_l = record["params"]["q_loaded"].as_f64().unwrap();
    let q_i = record["q_internal"].as_f64().unwrap();
    assert!((f_r / 500e6 - 1.0).abs() < 1e-6, "f_r {f_r}");
    assert!((q_l / 5000.0 - 1.0).abs() < 1e-6, "q_loaded {q_l}");
    assert!((q_i / 5543.28 - 1.0).abs() < 1e-4, "q_internal {q_i}");
    assert!(record["photon"]["mean_photons"].as_f64().unwrap() > 0.0);
}

#[test]
fn fit_reads_touchstone_and_crops() {
    // Synthesize via the library, export as .s2p by hand, then fit.
    let params =
        tadpole::s21::NotchParams::new(480e6, 4000.0, 40_000.0, 0.1, 1.0, 0.0, 5e-9).unwrap();
    let grid = tadpole::s21::centered_grid(&params, 6.0, 1501);
    let trace = tadpole::s21::synthesize_trace(&params, &grid, 0.0, 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.s2p");
    let mut body = String::from("! exported two-port data\n# HZ S RI R 50\n");
    for (f, z) in trace.freq_hz().iter().zip(trace.s21()) {
        body.push_str(&format!("{f} 0 0 {} {} 0 0 0 0\n", z.re, z.im));
    }
    std::fs::write(&path, body).unwrap();

    let out = run(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--f-min-mhz",
        "479.4",
        "--f-max-mhz",
        "480.6",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let f_r = record["params"]["f_r"].as_f64().unwrap();
    assert!((f_r / 480e6 - 1.0).abs() < 1e-6, "f_r {f_r}");
}

#[test]
fn tls_fit_recovers_generated_parameters() {
    let truth = tadpole::tls::TlsParams::new(600e6, 2e-4, 1.0).unwrap();
    let mut csv = String::from("temperature_k,f_r_hz\n");
    for i in 0..16 {
        let t = 0.03 + 0.03 * i as f64;
        csv.push_str(&format!(
            "{t},{}\n",
            tadpole::tls::tls_frequency(t, &truth).unwrap()
        ));
    }
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("temps.csv");
    std::fs::write(&data, csv).unwrap();

    let fit_json = dir.path().join("tls.json");
    let out = run(&[
        "tls-fit",
        "--data",
        data.to_str().unwrap(),
        "--output",
        fit_json.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let record = read_json(&fit_json);
    let f0 = record["f0"].as_f64().unwrap();
    let delta0 = record["delta0"].as_f64().unwrap();
    assert!((f0 / 600e6 - 1.0).abs() < 1e-9);
    assert!((delta0 / 2e-4 - 1.0).abs() < 1e-7);
}

#[test]
fn sweep_and_report_produce_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();

    // Two synthetic traces at different powers.
    let mut trace_paths = Vec::new();
    for (i, power) in [("-140", 0), ("-120", 1)] {
        let path = dir.path().join(format!("p{power}.csv"));
        let out = run(&[
            "synth",
            "--f-r-mhz",
            "500",
            "--q-loaded",
            "5000",
            "--q-ext",
            "50000",
            "--sigma",
            "0.002",
            "--seed",
            &power.to_string(),
            "--power-dbm",
            i,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        trace_paths.push(path);
    }

    let sweep_json = dir.path().join("sweep.json");
    let sweep_csv = dir.path().join("sweep.csv");
    let out = bin()
        .args([
            "sweep",
            "--output",
            sweep_json.to_str().unwrap(),
            "--csv",
            sweep_csv.to_str().unwrap(),
        ])
        .args(trace_paths.iter().map(|p| p.to_str().unwrap().to_string()))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&sweep_csv).unwrap();
    assert!(csv.starts_with("power_dbm,n_photon,q_i,q_i_sigma,q_e,q_e_sigma,tan_delta\n"));
    assert_eq!(csv.lines().count(), 3);

    // A fit JSON, a calibration JSON, and a TLS JSON to report on.
    let fit_json = dir.path().join("fit.json");
    let out = run(&[
        "fit",
        "--input",
        trace_paths[0].to_str().unwrap(),
        "--output",
        fit_json.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let cal_json = dir.path().join("cal.json");
    let out = run(&[
        "calibrate",
        "--data",
        table1().to_str().unwrap(),
        "--inductance-nh",
        "1.0706",
        "--c-cpw-pf",
        "0.26",
        "--output",
        cal_json.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let truth = tadpole::tls::TlsParams::new(600e6, 2e-4, 1.0).unwrap();
    let mut csv = String::from("temperature_k,f_r_hz\n");
    for i in 0..12 {
        let t = 0.03 + 0.04 * i as f64;
        csv.push_str(&format!(
            "{t},{}\n",
            tadpole::tls::tls_frequency(t, &truth).unwrap()
        ));
    }
    let temp_csv = dir.path().join("temps.csv");
    std::fs::write(&temp_csv, csv).unwrap();
    let tls_json = dir.path().join("tls.json");
    let out = run(&[
        "tls-fit",
        "--data",
        temp_csv.to_str().unwrap(),
        "--output",
        tls_json.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let report_dir = dir.path().join("report");
    let out = run(&[
        "report",
        "--out-dir",
        report_dir.to_str().unwrap(),
        fit_json.to_str().unwrap(),
        cal_json.to_str().unwrap(),
        sweep_json.to_str().unwrap(),
        tls_json.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let index = std::fs::read_to_string(report_dir.join("index.csv")).unwrap();
    assert!(index.starts_with("input,kind,output\n"));
    assert!(report_dir.join("notch_fits.csv").exists());
    assert!(report_dir.join("cal_calibration.csv").exists());
    assert!(report_dir.join("cal_frequency_vs_area.svg").exists());
    assert!(report_dir.join("sweep_power_sweep.csv").exists());
    assert!(report_dir.join("sweep_qi_vs_power.svg").exists());
    assert!(report_dir.join("tls_tls_fit.csv").exists());
    assert!(report_dir.join("tls_fr_vs_temperature.svg").exists());

    let svg = std::fs::read_to_string(report_dir.join("cal_frequency_vs_area.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn exit_code_mapping_matches_the_contract() {
    use tadpole::cli::exit_code;
    use tadpole::Error;
    assert_eq!(exit_code(&Error::Domain("x".into())), 1);
    assert_eq!(exit_code(&Error::Config("x".into())), 1);
    assert_eq!(
        exit_code(&Error::FitNonConvergence {
            iterations: 200,
            rss: 1.0,
            params: vec![]
        }),
        2
    );
    assert_eq!(
        exit_code(&Error::Io {
            path: "p".into(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "gone")
        }),
        3
    );
}
