//! Nearest and next-nearest exchange versus dot spacing, then the dielectric
//! constant that would make the nearest coupling 8 μeV.

use gnrqc::exchange::{
    calibrate_epsilon, coupling_sweep, CoulombParams, SweepSettings, PAPER_J1_EV,
};

fn main() -> gnrqc::Result<()> {
    let settings = SweepSettings::default();
    let params = CoulombParams::default();
    let sweep = coupling_sweep(7, 6, &[8, 12, 16, 18], &params, &settings)?;
    for w in &sweep.warnings {
        eprintln!("{w}");
    }
    println!(
        "{:>3} {:>12} {:>12} {:>10}",
        "D", "J1 (eV)", "J2 (eV)", "J1/J2"
    );
    for r in &sweep.table.rows {
        println!(
            "{:>3} {:>12.4e} {:>12.4e} {:>10.3e}",
            r.spacing_d,
            r.j1,
            r.j2,
            r.ratio()
        );
    }

    let cal = calibrate_epsilon(7, 6, 18, PAPER_J1_EV, params.onsite_u, &settings)?;
    println!(
        "J1(D=18) = {:.3e} eV at epsilon=1; epsilon = {:.4e} gives {:.0e} eV ({})",
        cal.j1_unscreened,
        cal.epsilon,
        cal.target_j1,
        if cal.physical {
            "physical"
        } else {
            "not physical"
        }
    );
    Ok(())
}
