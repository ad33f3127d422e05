//! Local density of states at the bound level of an N=7 dot.

use gnrqc::lattice::GNRGeometry;
use gnrqc::tightbinding::{analyze_device, default_broadening, ldos};
use gnrqc::DEFAULT_TAU_EV;

fn main() -> gnrqc::Result<()> {
    let dev = analyze_device(&GNRGeometry::new(7, 6, 1, 1), DEFAULT_TAU_EV)?;
    let e0 = dev.report.e0.expect("N=7 confines");
    let map = ldos(&dev.spectrum, e0, default_broadening(DEFAULT_TAU_EV))?;

    let dot: std::collections::HashSet<usize> = dev.lattice.dot_masks[0].iter().copied().collect();
    let total: f64 = map.iter().sum();
    let inside: f64 = dot.iter().map(|&i| map[i]).sum();
    println!(
        "E0 = {e0:.5} eV, {} sites, {:.1}% of the LDOS sits on the junction",
        map.len(),
        100.0 * inside / total
    );

    let mut order: Vec<usize> = (0..map.len()).collect();
    order.sort_by(|&a, &b| map[b].total_cmp(&map[a]));
    println!("brightest sites:");
    for &i in &order[..8] {
        let s = &dev.lattice.sites[i];
        let tag = if dot.contains(&i) { "junction" } else { "" };
        println!(
            "  {i:>4} ({:7.2}, {:6.2}) {:?}  {:.4e} {tag}",
            s.position[0], s.position[1], s.sublattice, map[i]
        );
    }
    Ok(())
}
