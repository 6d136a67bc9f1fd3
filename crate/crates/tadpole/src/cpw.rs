//! Analytic coplanar-waveguide transmission-line parameters.
//!
//! A CPW cross section (center conductor of width `w`, gaps `s` to the ground
//! planes) has closed-form per-unit-length capacitance and inductance from
//! conformal mapping:
//!
//! ```text
//! k0   = w / (w + 2 s)          k0' = sqrt(1 - k0^2)
//! C_l  = 4 eps0 eps_eff K(k0) / K(k0')
//! L_l  = (mu0 / 4) K(k0') / K(k0)
//! ```
//!
//! where `K` is the complete elliptic integral of the first kind in the
//! modulus convention. The quasi-static effective permittivity for a thick
//! substrate is `eps_eff = (eps_r + 1) / 2`; an explicit override is accepted
//! for values obtained from electromagnetic simulation or measurement.

use crate::constants::{SPEED_OF_LIGHT, VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};

/// Cross-sectional and longitudinal geometry of a CPW strip.
#[derive(Debug, Clone, PartialEq)]
pub struct CpwGeometry {
    /// Center-conductor width (m).
    pub width: f64,
    /// Gap between center conductor and ground plane (m).
    pub gap: f64,
    /// Strip length (m).
    pub length: f64,
    /// Substrate relative permittivity.
    pub eps_r: f64,
    /// Effective permittivity override; when `None` the quasi-static
    /// half-space value `(eps_r + 1) / 2` is used.
    pub eps_eff_override: Option<f64>,
}

impl CpwGeometry {
    pub fn new(width: f64, gap: f64, length: f64, eps_r: f64) -> Result<Self> {
        let geom = CpwGeometry {
            width,
            gap,
            length,
            eps_r,
            eps_eff_override: None,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// Returns the same geometry with an explicit effective permittivity.
    pub fn with_eps_eff(mut self, eps_eff: f64) -> Result<Self> {
        self.eps_eff_override = Some(eps_eff);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::Domain(format!(
                "CPW width must be > 0, got {}",
                self.width
            )));
        }
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::Domain(format!(
                "CPW gap must be > 0, got {}",
                self.gap
            )));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::Domain(format!(
                "CPW length must be > 0, got {}",
                self.length
            )));
        }
        if !(self.eps_r >= 1.0 && self.eps_r.is_finite()) {
            return Err(Error::Domain(format!(
                "substrate permittivity must be >= 1, got {}",
                self.eps_r
            )));
        }
        if let Some(e) = self.eps_eff_override {
            if !(e >= 1.0 && e.is_finite()) {
                return Err(Error::Domain(format!(
                    "effective permittivity override must be >= 1, got {e}"
                )));
            }
        }
        Ok(())
    }

    /// Effective permittivity used by all line-parameter calculations.
    pub fn eps_eff(&self) -> f64 {
        self.eps_eff_override.unwrap_or((self.eps_r + 1.0) / 2.0)
    }
}

/// Per-unit-length transmission-line parameters of a CPW cross section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlineParams {
    /// Capacitance per unit length (F/m).
    pub c_per_length: f64,
    /// Inductance per unit length (H/m).
    pub l_per_length: f64,
    /// Effective relative permittivity.
    pub eps_eff: f64,
    /// Line impedance sqrt(L_l / C_l) (ohm).
    pub z0: f64,
    /// Phase velocity 1 / sqrt(L_l C_l) (m/s).
    pub phase_velocity: f64,
}

/// Complete elliptic integral of the first kind, modulus convention.
///
/// `K(k) = integral_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta)`, evaluated
/// by arithmetic-geometric mean iteration, which converges quadratically:
/// `K(k) = pi / (2 AGM(1, sqrt(1 - k^2)))`. Iteration stops when the two
/// mean iterates agree to machine precision.
pub fn ellipk(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) || !k.is_finite() {
        return Err(Error::Domain(format!(
            "elliptic modulus must satisfy 0 <= k < 1, got {k}"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= f64::EPSILON * an {
            return Ok(std::f64::consts::PI / (2.0 * an));
        }
        a = an;
        b = bn;
    }
    Ok(std::f64::consts::PI / (2.0 * a))
}

/// Per-unit-length line parameters of the given cross section.
pub fn line_params(geom: &CpwGeometry) -> Result<TlineParams> {
    geom.validate()?;
    let eps_eff = geom.eps_eff();
    let k0 = geom.width / (geom.width + 2.0 * geom.gap);
    let k0p = (1.0 - k0 * k0).sqrt();
    let big_k = ellipk(k0)?;
    let big_kp = ellipk(k0p)?;
    let c_per_length = 4.0 * VACUUM_PERMITTIVITY * eps_eff * big_k / big_kp;
    let l_per_length = VACUUM_PERMEABILITY / 4.0 * big_kp / big_k;
    Ok(TlineParams {
        c_per_length,
        l_per_length,
        eps_eff,
        z0: (l_per_length / c_per_length).sqrt(),
        phase_velocity: 1.0 / (l_per_length * c_per_length).sqrt(),
    })
}

/// Total inductance and capacitance `(L, C)` of a CPW strip of the given
/// length: the per-unit-length parameters scaled by `length`.
pub fn strip_lc(geom: &CpwGeometry) -> Result<(f64, f64)> {
    let params = line_params(geom)?;
    Ok((
        params.l_per_length * geom.length,
        params.c_per_length * geom.length,
    ))
}

/// Free-space-referred wavelength of a mode at `f_r` on a line with the given
/// effective permittivity: `lambda0 = c / (f_r sqrt(eps_eff))`.
pub fn mode_wavelength(f_r: f64, eps_eff: f64) -> Result<f64> {
    if !(f_r > 0.0 && f_r.is_finite()) {
        return Err(Error::Domain(format!("frequency must be > 0, got {f_r}")));
    }
    if !(eps_eff >= 1.0 && eps_eff.is_finite()) {
        return Err(Error::Domain(format!(
            "effective permittivity must be >= 1, got {eps_eff}"
        )));
    }
    Ok(SPEED_OF_LIGHT / (f_r * eps_eff.sqrt()))
}

/// Ratio of a resonator's total physical length to the mode wavelength.
/// Small values indicate a structure deep in the lumped-element regime; a
/// shorted quarter-wave line would sit at 1/4.
pub fn size_ratio(l_tot: f64, lambda0: f64) -> Result<f64> {
    if !(l_tot > 0.0 && l_tot.is_finite()) {
        return Err(Error::Domain(format!(
            "total length must be > 0, got {l_tot}"
        )));
    }
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::Domain(format!(
            "wavelength must be > 0, got {lambda0}"
        )));
    }
    Ok(l_tot / lambda0)
}
