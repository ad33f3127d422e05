//! X̄ fidelity when the real coupling misses the nominal one by δ.

use gnrqc::exchange::PAPER_J1_EV;
use gnrqc::experiment::float_range;
use gnrqc::spinchain::{fidelity_sweep, fit_power_law, xbar_fidelity_closed_form, Convention};

fn main() -> gnrqc::Result<()> {
    let angle = std::f64::consts::FRAC_PI_2;
    let deltas = float_range(-0.1, 0.1, 0.02);
    let points = fidelity_sweep(PAPER_J1_EV, angle, &deltas, Convention::Sigma)?;
    println!(
        "{:>6} {:>14} {:>14} {:>14}",
        "delta", "F", "cos^2(θδ)", "state F"
    );
    for p in &points {
        println!(
            "{:>6.2} {:>14.10} {:>14.10} {:>14.10}",
            p.delta,
            p.fidelity,
            xbar_fidelity_closed_form(angle, p.delta),
            p.state_fidelity
        );
    }
    let xs: Vec<f64> = points.iter().map(|p| p.delta).collect();
    let ys: Vec<f64> = points.iter().map(|p| 1.0 - p.fidelity).collect();
    println!(
        "1 - F ~ |δ|^{:.4}",
        fit_power_law(&xs, &ys).unwrap_or(f64::NAN)
    );
    Ok(())
}
