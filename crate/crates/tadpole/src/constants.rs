//! Physical constants (SI units).
//!
//! `VACUUM_PERMITTIVITY` is derived as `1/(MU0*C0^2)` rather than taken from
//! the measured CODATA value so that the conformal-mapping identity
//! `L_l * C_l = mu0 * eps0 * eps_eff` holds to machine precision. The
//! difference from the measured value is below 1e-9 relative, far under any
//! tolerance used in this crate.

/// Speed of light in vacuum (m/s, exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability (H/m), classic defined value 4*pi*1e-7.
pub const VACUUM_PERMEABILITY: f64 = 4.0e-7 * std::f64::consts::PI;

/// Vacuum permittivity (F/m), derived from `MU0` and `C0`.
pub const VACUUM_PERMITTIVITY: f64 = 1.0 / (VACUUM_PERMEABILITY * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// Planck constant (J s, exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Boltzmann constant (J/K, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
