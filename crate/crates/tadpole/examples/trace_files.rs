//! Trace file I/O: write the canonical CSV with metadata, read it back,
//! and read a Touchstone `.s2p` export.
//!
//! ```bash
//! cargo run -p tadpole --example trace_files
//! ```

use tadpole::s21::{centered_grid, synthesize_trace, NotchParams};
use tadpole::trace::{read_trace, write_trace, TraceFormat};

fn main() -> tadpole::Result<()> {
    let params = NotchParams::new(350e6, 4500.0, 40_000.0, 0.0, 1.0, 0.0, 10e-9)?;
    let grid = centered_grid(&params, 5.0, 401);
    let mut trace = synthesize_trace(&params, &grid, 0.005, 11)?;
    trace.power_dbm = Some(-118.0);
    trace.temperature_k = Some(0.025);
    trace.label = Some("demo".into());

    let dir = std::env::temp_dir().join("tadpole_trace_demo");
    std::fs::create_dir_all(&dir).map_err(|e| tadpole::Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;

    // Canonical CSV: metadata comments, fixed header, 17 significant digits.
    let csv_path = dir.join("demo.csv");
    write_trace(&trace, &csv_path)?;
    let head: String = std::fs::read_to_string(&csv_path)
        .unwrap()
        .lines()
        .take(6)
        .collect::<Vec<_>>()
        .join("\n");
    println!("{} starts with:\n{head}\n", csv_path.display());

    let back = read_trace(&csv_path, TraceFormat::Csv)?;
    assert_eq!(back, trace);
    println!("CSV round trip: {} points, metadata preserved", back.len());

    // Touchstone: a hand-written .s2p in dB-angle format.
    let s2p_path = dir.join("demo.s2p");
    let mut body = String::from("! two-port export, S21 in the second pair\n# MHz S DB R 50\n");
    for row in [340.0, 345.0, 350.0, 355.0, 360.0] {
        body.push_str(&format!("{row} -40 0 -6.0206 45 -40 0 -40 0\n"));
    }
    std::fs::write(&s2p_path, body).map_err(|e| tadpole::Error::Io {
        path: s2p_path.display().to_string(),
        source: e,
    })?;
    let ts = read_trace(&s2p_path, TraceFormat::Touchstone)?;
    println!(
        "Touchstone read: {} points, S21[2] = {:.4} + {:.4}i (|.| = 0.5 from -6.02 dB)",
        ts.len(),
        ts.s21()[2].re,
        ts.s21()[2].im
    );
    Ok(())
}
