//! Inverse design: pick the parallel-plate-capacitor area that places a
//! tadpole resonator at a target frequency, then check the forward model.
//!
//! ```bash
//! cargo run -p tadpole --example design_resonator
//! ```

use tadpole::cpw::{mode_wavelength, size_ratio, strip_lc, CpwGeometry};
use tadpole::lumped::{characteristic_impedance, required_area, resonance_frequency, LumpedModel};

fn main() -> tadpole::Result<()> {
    let c0 = 1.39e-3; // capacitance per unit area, F/m^2 (= 1.39 fF/um^2)
    let geom = CpwGeometry::new(10e-6, 6e-6, 2000e-6, 11.9)?.with_eps_eff(6.45)?;
    let (l_analytic, c_cpw) = strip_lc(&geom)?;

    println!(
        "strip: L = {:.4} nH, C_cpw = {:.4} pF",
        l_analytic * 1e9,
        c_cpw * 1e12
    );
    println!(
        "\n{:>10} {:>14} {:>10} {:>12}",
        "target", "A_PPC (um^2)", "Z_c (ohm)", "l/lambda0"
    );
    for f_mhz in [290.0_f64, 450.0, 700.0, 1100.0] {
        let f = f_mhz * 1e6;
        let area = required_area(f, l_analytic, c0, c_cpw)?;
        let model = LumpedModel::new(l_analytic, c0 * area, c_cpw)?;
        let ratio = size_ratio(
            geom.length + area.sqrt(),
            mode_wavelength(f, geom.eps_eff())?,
        )?;
        // The forward model closes the loop on the solved area.
        assert!((resonance_frequency(&model) / f - 1.0).abs() < 1e-12);
        println!(
            "{:>7.0} MHz {:>14.0} {:>10.2} {:>12.4}",
            f_mhz,
            area * 1e12,
            characteristic_impedance(&model),
            ratio
        );
    }

    // Asking for the impossible: a frequency whose total capacitance budget
    // is below the stray capacitance alone.
    match required_area(50e9, l_analytic, c0, c_cpw) {
        Err(e) => println!("\n50 GHz target: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
