//! Frequency-domain transmission traces: the in-memory type plus CSV and
//! Touchstone readers and the CSV/JSON writers.
//!
//! CSV is the canonical interchange format:
//!
//! ```text
//! # label=resonator_a
//! # power_dbm=-116
//! # temperature_k=0.025
//! # rng=chacha8,seed=7,sigma=0.01
//! freq_hz,re,im
//! 4.9950000000000000e8,9.0999999999999998e-1,0.0000000000000000e0
//! ...
//! ```
//!
//! Comment lines carry optional metadata and may appear only before the
//! header. Values are written with 17 significant digits so that a
//! write/read round trip reproduces every f64 bit-exactly.

pub mod touchstone;

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{de::DeserializeOwned, Serialize};

use crate::error::{Error, Result};

/// Minimum number of points for a usable trace.
pub const MIN_POINTS: usize = 5;

/// A sampled complex transmission coefficient over frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTrace {
    freq_hz: Vec<f64>,
    s21: Vec<Complex64>,
    /// Probe power at the sample (dBm).
    pub power_dbm: Option<f64>,
    /// Sample temperature (K).
    pub temperature_k: Option<f64>,
    pub label: Option<String>,
    /// Provenance of synthetic noise (generator name, seed, sigma).
    pub rng: Option<String>,
}

impl FrequencyTrace {
    /// Validates and builds a trace: the grid must be strictly increasing
    /// with at least [`MIN_POINTS`] finite samples.
    pub fn new(freq_hz: Vec<f64>, s21: Vec<Complex64>) -> Result<Self> {
        if freq_hz.len() != s21.len() {
            return Err(Error::Config(format!(
                "grid has {} points but {} samples were supplied",
                freq_hz.len(),
                s21.len()
            )));
        }
        if freq_hz.len() < MIN_POINTS {
            return Err(Error::Config(format!(
                "trace needs at least {MIN_POINTS} points, got {}",
                freq_hz.len()
            )));
        }
        for (i, f) in freq_hz.iter().enumerate() {
            if !f.is_finite() {
                return Err(Error::Domain(format!(
                    "row {}: frequency is not finite",
                    i + 1
                )));
            }
            if i > 0 && *f <= freq_hz[i - 1] {
                return Err(Error::Domain(format!(
                    "row {}: frequency grid not strictly increasing ({} after {})",
                    i + 1,
                    f,
                    freq_hz[i - 1]
                )));
            }
        }
        for (i, z) in s21.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Domain(format!(
                    "row {}: sample is not finite",
                    i + 1
                )));
            }
        }
        Ok(FrequencyTrace {
            freq_hz,
            s21,
            power_dbm: None,
            temperature_k: None,
            label: None,
            rng: None,
        })
    }

    pub fn freq_hz(&self) -> &[f64] {
        &self.freq_hz
    }

    pub fn s21(&self) -> &[Complex64] {
        &self.s21
    }

    pub fn len(&self) -> usize {
        self.freq_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq_hz.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.freq_hz[self.len() - 1] - self.freq_hz[0]
    }

    /// Sub-trace restricted to `[f_min, f_max]`, metadata preserved.
    pub fn crop(&self, f_min: f64, f_max: f64) -> Result<FrequencyTrace> {
        let pairs: Vec<(f64, Complex64)> = self
            .freq_hz
            .iter()
            .zip(&self.s21)
            .filter(|(f, _)| **f >= f_min && **f <= f_max)
            .map(|(f, z)| (*f, *z))
            .collect();
        let mut out = FrequencyTrace::new(
            pairs.iter().map(|(f, _)| *f).collect(),
            pairs.iter().map(|(_, z)| *z).collect(),
        )
        .map_err(|e| {
            Error::Config(format!(
                "crop to [{f_min}, {f_max}] leaves too few points: {e}"
            ))
        })?;
        out.power_dbm = self.power_dbm;
        out.temperature_k = self.temperature_k;
        out.label = self.label.clone();
        out.rng = self.rng.clone();
        Ok(out)
    }
}

/// Supported trace file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    /// Touchstone v1 (`.s1p` single parameter or `.s2p` S21 columns).
    Touchstone,
}

impl TraceFormat {
    /// Guess the format from a path extension; defaults to CSV.
    pub fn from_path(path: &Path) -> TraceFormat {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("s1p") | Some("s2p") => TraceFormat::Touchstone,
            _ => TraceFormat::Csv,
        }
    }
}

/// Reads a trace file in the given format.
pub fn read_trace(path: &Path, format: TraceFormat) -> Result<FrequencyTrace> {
    match format {
        TraceFormat::Csv => read_csv(path),
        TraceFormat::Touchstone => touchstone::read(path),
    }
}

fn read_csv(path: &Path) -> Result<FrequencyTrace> {
    let content =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let name = path.display().to_string();

    let mut freq = Vec::new();
    let mut s21 = Vec::new();
    let mut meta: Vec<(String, String)> = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in content.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if saw_header {
                return Err(Error::parse(
                    &name,
                    lineno,
                    "metadata comments must precede the header",
                ));
            }
            if let Some((k, v)) = comment.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if !saw_header {
            if line != "freq_hz,re,im" {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("expected header 'freq_hz,re,im', got '{line}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                &name,
                lineno,
                format!("expected 3 comma-separated values, got {}", fields.len()),
            ));
        }
        let mut vals = [0.0_f64; 3];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(&name, lineno, format!("'{field}' is not a number")))?;
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(&name, lineno, "non-finite value"));
        }
        if let Some(prev) = freq.last() {
            if vals[0] <= *prev {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!(
                        "frequency grid not strictly increasing ({} after {prev})",
                        vals[0]
                    ),
                ));
            }
        }
        freq.push(vals[0]);
        s21.push(Complex64::new(vals[1], vals[2]));
    }

    if !saw_header {
        return Err(Error::parse(&name, 1, "missing 'freq_hz,re,im' header"));
    }
    let mut trace = FrequencyTrace::new(freq, s21).map_err(|e| match e {
        Error::Config(msg) | Error::Domain(msg) => Error::parse(&name, 1, msg),
        other => other,
    })?;
    for (k, v) in meta {
        match k.as_str() {
            "power_dbm" => {
                trace.power_dbm = Some(v.parse().map_err(|_| {
                    Error::parse(&name, 1, format!("power_dbm '{v}' is not a number"))
                })?)
            }
            "temperature_k" => {
                trace.temperature_k = Some(v.parse().map_err(|_| {
                    Error::parse(&name, 1, format!("temperature_k '{v}' is not a number"))
                })?)
            }
            "label" => trace.label = Some(v),
            "rng" => trace.rng = Some(v),
            _ => {} // unknown keys are ignored for forward compatibility
        }
    }
    Ok(trace)
}

/// Writes a trace as canonical CSV (17 significant digits).
pub fn write_trace(trace: &FrequencyTrace, path: &Path) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::Config("refusing to write an empty trace".into()));
    }
    let mut out = String::new();
    if let Some(label) = &trace.label {
        let _ = writeln!(out, "# label={label}");
    }
    if let Some(p) = trace.power_dbm {
        let _ = writeln!(out, "# power_dbm={}", fmt_full(p));
    }
    if let Some(t) = trace.temperature_k {
        let _ = writeln!(out, "# temperature_k={}", fmt_full(t));
    }
    if let Some(rng) = &trace.rng {
        let _ = writeln!(out, "# rng={rng}");
    }
    out.push_str("freq_hz,re,im\n");
    for (f, z) in trace.freq_hz.iter().zip(&trace.s21) {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_full(*f),
            fmt_full(z.re),
            fmt_full(z.im)
        );
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Formats an f64 with 17 significant digits (lossless round trip).
pub(crate) fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes any result structure as pretty JSON.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    std::fs::write(path, json + "\n").map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads a JSON result structure back.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let content =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&content)?)
}
