//! Design and characterization toolkit for low-characteristic-impedance
//! lumped-element ("tadpole") superconducting resonators: a short coplanar
//! waveguide strip shorted to ground at one end and shunted by a large
//! parallel-plate capacitor at the other.
//!
//! The crate covers the full workflow:
//!
//! - [`cpw`] — analytic CPW transmission-line parameters via conformal
//!   mapping (complete elliptic integrals, per-length L and C, wavelength
//!   and size-ratio utilities).
//! - [`lumped`] — the LC resonator model: resonance frequency,
//!   characteristic impedance, inverse design, and calibration of the
//!   capacitance per unit area against measured (area, frequency) data.
//! - [`trace`] — frequency-trace I/O: canonical CSV, Touchstone v1 readers,
//!   JSON result output.
//! - [`s21`] — the notch-type transmission forward model, single and
//!   multiplexed, with seedable synthetic noise.
//! - [`notch`] — the extraction pipeline: delay removal, algebraic circle
//!   fit, phase fit, quality factors with 1-sigma uncertainties, photon
//!   metrics, and power-sweep analysis.
//! - [`tls`] — two-level-system physics: complex digamma, the
//!   frequency-versus-temperature model, the loss-tangent law, and the
//!   (f0, delta0) fit.
//! - [`plot`] — a minimal SVG emitter for report plots.
//! - [`cli`] — the `tadpole` command-line front end.
//!
//! Each capability has a runnable example under `examples/`; start with
//! `design_resonator` and `synth_and_fit`.
//!
//! All public operations are pure functions of their inputs (aside from
//! explicit file I/O) and safe to call concurrently.

pub mod cli;
pub mod constants;
pub mod cpw;
pub mod error;
pub mod fit;
pub mod lumped;
pub mod notch;
pub mod plot;
pub mod s21;
pub mod tls;
pub mod trace;

pub use error::{Error, Result};
