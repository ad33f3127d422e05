//! Exchange-driven swap of two spins and the singlet-triplet spectrum.

use gnrqc::spinchain::{build_chain_hamiltonian, evolve, Propagator, SpinState, HBAR_EV_S};

fn main() -> gnrqc::Result<()> {
    let j = 2e-6;
    let h = build_chain_hamiltonian(&[j], &[])?;
    let levels = Propagator::new(&h.matrix());
    println!(
        "levels / J: {:?}",
        levels
            .energies()
            .iter()
            .map(|e| (e / j).round())
            .collect::<Vec<_>>()
    );

    // |↑↓⟩ ↔ |↓↑⟩ with period πħ/(2J).
    let up_down = SpinState::from_spins("ud")?;
    let down_up = SpinState::from_spins("du")?;
    let period = std::f64::consts::PI * HBAR_EV_S / (2.0 * j);
    for k in 0..=8 {
        let t = period * k as f64 / 8.0;
        let psi = evolve(&up_down, &h, t)?;
        println!(
            "t = {:6.3} ns  P(↓↑) = {:.4}",
            t * 1e9,
            psi.fidelity(&down_up)
        );
    }

    // Three spins: the middle one entangles with the ends.
    let chain = build_chain_hamiltonian(&[j, j], &[])?;
    let psi = evolve(&SpinState::from_spins("udu")?, &chain, period / 3.0)?;
    println!(
        "3-spin chain: entropy of first spin {:.4} bits",
        psi.entanglement_entropy(1)
    );
    Ok(())
}
