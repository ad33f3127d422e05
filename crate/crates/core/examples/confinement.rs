//! Which widths bind a state in the zigzag junction, and how deep.

use gnrqc::lattice::{classify_width, GNRGeometry};
use gnrqc::tightbinding::{analyze_device, lead_band_gap};
use gnrqc::DEFAULT_TAU_EV;

fn main() -> gnrqc::Result<()> {
    let tau = DEFAULT_TAU_EV;
    println!(
        "{:>2} {:>2} {:>15} {:>9} {:>9} {:>6} {:>9}",
        "N", "L", "lead", "E0", "gap", "loc", "lead gap"
    );
    for n in 5..=9 {
        for l in [3, 5, 7] {
            let dev = analyze_device(&GNRGeometry::new(n, l, 1, 1), tau)?;
            let r = &dev.report;
            let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
            println!(
                "{n:>2} {l:>2} {:>15} {:>9} {:>9} {:>6.3} {:>9.4}",
                format!("{:?}", classify_width(n).kind),
                fmt(r.e0),
                fmt(r.gap),
                r.localization_fraction,
                lead_band_gap(n, tau)
            );
        }
    }
    Ok(())
}
