//! Touchstone v1 reader (`.s1p` and `.s2p`).
//!
//! `.s1p` files carry one parameter per row; `.s2p` files carry the four
//! two-port parameters in S11 S21 S12 S22 order, of which the S21 pair is
//! extracted. The option line (`# HZ S RI R 50` and variants) selects the
//! frequency unit and the RI/MA/DB number format; defaults are GHz, S, MA.
//! Touchstone v2 keyword blocks (`[Version]`, ...) are rejected.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trace::FrequencyTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NumberFormat {
    RealImag,
    MagnitudeAngle,
    DbAngle,
}

impl NumberFormat {
    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            NumberFormat::RealImag => Complex64::new(a, b),
            NumberFormat::MagnitudeAngle => Complex64::from_polar(a, b.to_radians()),
            NumberFormat::DbAngle => Complex64::from_polar(10_f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

/// Reads a Touchstone v1 file; the port count comes from the extension.
pub fn read(path: &Path) -> Result<FrequencyTrace> {
    let name = path.display().to_string();
    let ports = match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("s1p") => 1,
        Some("s2p") => 2,
        other => {
            return Err(Error::Config(format!(
                "unsupported Touchstone extension {:?} for {name}; expected .s1p or .s2p",
                other.unwrap_or("")
            )))
        }
    };
    let values_per_row = 1 + 2 * ports * ports;

    let content = std::fs::read_to_string(path).map_err(|e| Error::io(name.clone(), e))?;

    let mut unit_scale = 1e9; // GHz default
    let mut format = NumberFormat::MagnitudeAngle;
    let mut saw_option_line = false;
    let mut saw_data = false;
    let mut freq = Vec::new();
    let mut s21 = Vec::new();

    for (idx, raw) in content.lines().enumerate() {
        let lineno = idx + 1;
        // Strip trailing comments.
        let line = match raw.find('!') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            return Err(Error::parse(
                &name,
                lineno,
                format!("Touchstone v2 keyword '{line}' is not supported (v1 only)"),
            ));
        }
        if let Some(options) = line.strip_prefix('#') {
            if saw_data {
                return Err(Error::parse(&name, lineno, "option line after data"));
            }
            if saw_option_line {
                return Err(Error::parse(&name, lineno, "repeated option line"));
            }
            saw_option_line = true;
            let mut tokens = options.split_whitespace().peekable();
            while let Some(tok) = tokens.next() {
                match tok.to_ascii_uppercase().as_str() {
                    "HZ" => unit_scale = 1.0,
                    "KHZ" => unit_scale = 1e3,
                    "MHZ" => unit_scale = 1e6,
                    "GHZ" => unit_scale = 1e9,
                    "RI" => format = NumberFormat::RealImag,
                    "MA" => format = NumberFormat::MagnitudeAngle,
                    "DB" => format = NumberFormat::DbAngle,
                    "S" => {}
                    "Y" | "Z" | "G" | "H" => {
                        return Err(Error::parse(
                            &name,
                            lineno,
                            format!("parameter type '{tok}' is not supported, only S"),
                        ))
                    }
                    "R" => {
                        // Reference impedance: value consumed and ignored.
                        if tokens.next().is_none() {
                            return Err(Error::parse(&name, lineno, "R without a value"));
                        }
                    }
                    other => {
                        return Err(Error::parse(
                            &name,
                            lineno,
                            format!("unknown option token '{other}'"),
                        ))
                    }
                }
            }
            continue;
        }

        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != values_per_row {
            return Err(Error::parse(
                &name,
                lineno,
                format!(
                    "expected {values_per_row} values for a {ports}-port row, got {}",
                    fields.len()
                ),
            ));
        }
        let mut vals = Vec::with_capacity(values_per_row);
        for field in &fields {
            vals.push(
                field.parse::<f64>().map_err(|_| {
                    Error::parse(&name, lineno, format!("'{field}' is not a number"))
                })?,
            );
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(&name, lineno, "non-finite value"));
        }
        saw_data = true;
        let f = vals[0] * unit_scale;
        if let Some(prev) = freq.last() {
            if f <= *prev {
                return Err(Error::parse(
                    &name,
                    lineno,
                    format!("frequency grid not strictly increasing ({f} after {prev})"),
                ));
            }
        }
        // One-port: the single parameter. Two-port: S21 is the second pair.
        let (a, b) = if ports == 1 {
            (vals[1], vals[2])
        } else {
            (vals[3], vals[4])
        };
        freq.push(f);
        s21.push(format.decode(a, b));
    }

    FrequencyTrace::new(freq, s21).map_err(|e| match e {
        Error::Config(msg) | Error::Domain(msg) => Error::parse(&name, 1, msg),
        other => other,
    })
}
