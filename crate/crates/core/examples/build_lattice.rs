//! Builds a two-dot Z-kink ribbon and writes it in the plain-text format.
//!
//! cargo run --example build_lattice -- 7 6 18 2

use gnrqc::lattice::{build_device, classify_width, parse_lattice_text, GNRGeometry};

fn main() -> gnrqc::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let [n, l, d, dots] = match args[..] {
        [n, l, d, k] => [n, l, d, k],
        _ => [7, 6, 18, 2],
    };
    let geom = GNRGeometry::new(n, l, d, dots);
    let lattice = build_device(&geom)?;
    let class = classify_width(n);
    println!(
        "N={n} L={l} D={d}: {:?} lead, {} sites, {} bonds",
        class.kind,
        lattice.len(),
        lattice.bonds.len()
    );
    for (k, mask) in lattice.dot_masks.iter().enumerate() {
        println!("  dot {k}: {} sites", mask.len());
    }
    let [dx, dy] = geom.kink_translation();
    println!("kink-to-kink translation: ({dx:.3}, {dy:.3}) Å");

    let text = lattice.to_text();
    let back = parse_lattice_text(&text)?;
    assert_eq!(back.sites.len(), lattice.len());
    println!("text form: {} lines, first three:", text.lines().count());
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}
