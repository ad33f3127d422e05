//! Bang-bang cycles: a differential field leaks an L1 qubit, and cycling the
//! pulses faster suppresses the one-cycle error quadratically.

use gnrqc::spinchain::{
    build_chain_hamiltonian, decode, encode, run_decoupling_cycle, Flavor, Layout, PulseSchedule,
    HBAR_EV_S,
};

fn main() -> gnrqc::Result<()> {
    let j = 2e-6;
    let layout = Layout::periodic(1);
    let h = build_chain_hamiltonian(&[j], &[0.25 * j, -0.25 * j])?;
    let zero = encode(Flavor::L1, false);

    let printed = PulseSchedule::two_pulse(0, Flavor::L1, 1e-11)?;
    println!("program:\n{}", printed.to_text());

    let mut last: Option<f64> = None;
    for wt in [0.02, 0.01, 0.005] {
        let cycle = wt * HBAR_EV_S / j;
        let sched = PulseSchedule::two_pulse(0, Flavor::L1, cycle)?;
        let out = run_decoupling_cycle(&zero, &h, &sched, &layout)?;
        let error = (1.0 - out.fidelity(&zero)).max(0.0).sqrt();
        let d = decode(Flavor::L1, &out)?;
        let ratio = last.map_or(String::new(), |p| format!("  ratio {:.3}", p / error));
        println!(
            "J tau_c/hbar = {wt:<6} error amplitude {error:.4e}  p1 {:.2e}{ratio}",
            d.p1
        );
        last = Some(error);
    }
    Ok(())
}
