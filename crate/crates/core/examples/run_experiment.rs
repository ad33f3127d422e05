//! Drives the sweep layer from code: config text, overrides, output files.

use gnrqc::experiment::{run_to_dir, Command, ExperimentConfig};

fn main() -> gnrqc::Result<()> {
    let mut config = ExperimentConfig::from_text(
        "# confinement of the two confining widths\n\
         n_values = 7,9\n\
         l_values = 3..5\n",
    )?;
    config.out = std::env::temp_dir().join("gnrqc-example");
    config.set("svg", "true")?;

    let (output, paths) = run_to_dir(Command::Spectrum, &config)?;
    for n in &output.notes {
        println!("{n}");
    }
    print!("{}", output.file("confinement.csv").unwrap_or_default());
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}
