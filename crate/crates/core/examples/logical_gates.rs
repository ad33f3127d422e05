//! X̄, Z̄ and the compiled CNOT, with their durations.

use gnrqc::exchange::PAPER_J1_EV;
use gnrqc::spinchain::{
    cnot_gate, xbar_gate, zbar_gate, zbar_pi_time, zeeman_splitting, CnotParams, Convention,
    XbarTiming,
};

fn main() -> gnrqc::Result<()> {
    let j1 = PAPER_J1_EV;
    let timing = XbarTiming::new(j1);
    println!(
        "X flip at J1 = 8 μeV: {:.4} ns (J1 S·S) or {:.4} ns (J1 σ·σ)",
        timing.sigma_convention * 1e9,
        timing.spin_convention * 1e9
    );

    let x = xbar_gate(j1, std::f64::consts::FRAC_PI_2, Convention::Sigma)?;
    println!(
        "X:  F = {:.12}, distance {:.1e}",
        x.fidelity, x.unitary_distance
    );

    let b = 0.02;
    let z = zbar_gate(zeeman_splitting(b), zbar_pi_time(b))?;
    println!(
        "Z:  F = {:.12}, {:.4} ns at {b} T",
        z.fidelity,
        z.duration * 1e9
    );

    let cnot = cnot_gate(&CnotParams::new(j1))?;
    println!(
        "CNOT: F = {:.12}, distance {:.1e}, {:.3} ns",
        cnot.report.fidelity,
        cnot.report.unitary_distance,
        cnot.report.duration * 1e9
    );
    for (label, t) in &cnot.steps {
        println!("  {label:<22} {:.4} ns", t * 1e9);
    }
    println!("logical truth table |amplitude|:");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| format!("{:.3}", cnot.logical[(r, c)].norm()))
            .collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
