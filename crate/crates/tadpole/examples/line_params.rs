//! CPW transmission-line analytics: per-unit-length parameters from the
//! conformal-mapping formulas, and how the strip totals scale with length.
//!
//! ```bash
//! cargo run -p tadpole --example line_params
//! ```

use tadpole::cpw::{line_params, mode_wavelength, size_ratio, strip_lc, CpwGeometry};

fn main() -> tadpole::Result<()> {
    // Standard cross section: 10 um center conductor, 6 um gaps, on
    // high-resistivity silicon.
    let geom = CpwGeometry::new(10e-6, 6e-6, 2000e-6, 11.9)?;
    let p = line_params(&geom)?;
    println!("cross section w = 10 um, s = 6 um, eps_r = 11.9");
    println!("  eps_eff        = {:.4}", p.eps_eff);
    println!("  C per length   = {:.2} pF/m", p.c_per_length * 1e12);
    println!("  L per length   = {:.2} nH/m", p.l_per_length * 1e9);
    println!("  Z0             = {:.2} ohm", p.z0);
    println!("  phase velocity = {:.4e} m/s", p.phase_velocity);

    let (l_total, c_total) = strip_lc(&geom)?;
    println!("\n2000 um strip totals:");
    println!(
        "  L = {:.4} nH, C = {:.4} pF",
        l_total * 1e9,
        c_total * 1e12
    );

    // An effective-permittivity override stands in for a simulated or
    // measured value when the quasi-static estimate is not good enough.
    let overridden = CpwGeometry::new(10e-6, 6e-6, 2000e-6, 11.9)?.with_eps_eff(6.45)?;
    println!(
        "  with eps_eff override 6.45: C = {:.4} pF",
        strip_lc(&overridden)?.1 * 1e12
    );

    // How far below a quarter-wave resonator the lumped design sits.
    println!("\nsize ratio of a 2.12 mm tadpole vs frequency:");
    for f_mhz in [290.5_f64, 559.8, 1099.1] {
        let lambda0 = mode_wavelength(f_mhz * 1e6, p.eps_eff)?;
        println!(
            "  {:7.1} MHz: l_tot / lambda0 = {:.4} (quarter-wave sits at 0.25)",
            f_mhz,
            size_ratio(2.12e-3, lambda0)?
        );
    }
    Ok(())
}
