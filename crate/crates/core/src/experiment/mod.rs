//! Reproducible sweeps that turn a config into CSV files.
//!
//! Each command computes every output in memory first and only then writes,
//! so a failed solve or an empty sweep leaves no partial files. Every output
//! directory also gets `config.txt` (the resolved config) and `manifest.txt`
//! (SHA-256 of each file).

mod config;
pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use config::{float_range, ExperimentConfig, KEYS};

use crate::error::{Error, Result};
use crate::exchange::{
    calibrate_epsilon, coupling_point, CoulombParams, CouplingRow, CouplingTable, SweepSettings,
};
use crate::format_sig9;
use crate::lattice::GNRGeometry;
use crate::spinchain::{
    cnot_gate, fidelity_sweep, gate_reports_csv, zbar_gate, zbar_pi_time, zeeman_splitting,
    CnotParams, XbarTiming,
};
use crate::tightbinding::{
    analyze_device_with, default_broadening, ldos, ldos_csv, localization_fractions, spectrum_csv,
    ConfinementOptions,
};
use svg::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Ldos,
    Couplings,
    Gates,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Ldos => "ldos",
            Command::Couplings => "couplings",
            Command::Gates => "gates",
        }
    }
}

/// Files produced by a command, in write order, plus human-readable notes.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }

    fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

/// Runs `cmd` on a worker pool sized by `config.workers`.
pub fn run(cmd: Command, config: &ExperimentConfig) -> Result<RunOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    pool.install(|| match cmd {
        Command::Spectrum => cmd_spectrum(config),
        Command::Ldos => cmd_ldos(config),
        Command::Couplings => cmd_couplings(config),
        Command::Gates => cmd_gates(config),
    })
}

/// Runs `cmd` and writes its files into `config.out`.
pub fn run_to_dir(cmd: Command, config: &ExperimentConfig) -> Result<(RunOutput, Vec<PathBuf>)> {
    let output = run(cmd, config)?;
    let paths = write_outputs(&config.out, config, &output)?;
    Ok((output, paths))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes the command files, `config.txt` and `manifest.txt`.
pub fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    output: &RunOutput,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let echo = config.to_echo();
    let mut manifest = String::new();
    let mut paths = Vec::new();
    for (name, contents) in output
        .files
        .iter()
        .map(|(n, c)| (n.as_str(), c.as_str()))
        .chain([("config.txt", echo.as_str())])
    {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        let _ = writeln!(manifest, "{}  {name}", sha256_hex(contents.as_bytes()));
        paths.push(path);
    }
    let path = dir.join("manifest.txt");
    std::fs::write(&path, manifest)?;
    paths.push(path);
    Ok(paths)
}

fn non_empty<T>(v: &[T], what: &str) -> Result<()> {
    if v.is_empty() {
        Err(Error::EmptySweep(format!("{what} is empty")))
    } else {
        Ok(())
    }
}

fn confinement_options(c: &ExperimentConfig) -> ConfinementOptions {
    ConfinementOptions {
        threshold: c.threshold,
        halo: c.halo,
        ..Default::default()
    }
}

fn opt_sig9(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), format_sig9)
}

/// One row per `(N, L)` with a single dot: `N,L,E0_eV,gap_eV,localization,confined`.
pub fn cmd_spectrum(c: &ExperimentConfig) -> Result<RunOutput> {
    non_empty(&c.n_values, "n_values")?;
    non_empty(&c.l_values, "l_values")?;
    let grid: Vec<(usize, usize)> = c
        .n_values
        .iter()
        .flat_map(|&n| c.l_values.iter().map(move |&l| (n, l)))
        .collect();
    let opts = confinement_options(c);
    let reports = grid
        .par_iter()
        .map(|&(n, l)| {
            let geom = GNRGeometry::new(n, l, c.spacing_d, 1).with_lead_length(c.lead_length);
            analyze_device_with(&geom, c.tau, &opts).map(|d| d.report)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut csv = String::from("N,L,E0_eV,gap_eV,localization,confined\n");
    for (&(n, l), r) in grid.iter().zip(&reports) {
        let _ = writeln!(
            csv,
            "{n},{l},{},{},{},{}",
            opt_sig9(r.e0),
            opt_sig9(r.gap),
            format_sig9(r.localization_fraction),
            r.confined
        );
    }
    let mut out = RunOutput::default();
    out.add("confinement.csv", csv);
    let confined = reports.iter().filter(|r| r.confined).count();
    out.notes
        .push(format!("{} geometries, {confined} confined", grid.len()));
    if c.svg {
        let series: Vec<Series> = c
            .n_values
            .iter()
            .map(|&n| Series {
                label: format!("N={n}"),
                points: grid
                    .iter()
                    .zip(&reports)
                    .filter(|((gn, _), r)| *gn == n && r.confined)
                    .map(|(&(_, l), r)| (l as f64, r.e0.unwrap_or(f64::NAN)))
                    .collect(),
            })
            .filter(|s| !s.points.is_empty())
            .collect();
        out.add(
            "confinement.svg",
            svg::line_plot("Confined level", "L", "E0 (eV)", &series, false),
        );
    }
    Ok(out)
}

/// LDOS map and spectrum of one device.
pub fn cmd_ldos(c: &ExperimentConfig) -> Result<RunOutput> {
    let geom = GNRGeometry::new(c.width_n, c.dot_length_l, c.spacing_d, c.n_dots)
        .with_lead_length(c.lead_length);
    let opts = confinement_options(c);
    let dev = analyze_device_with(&geom, c.tau, &opts)?;
    let energy = match (c.energy, dev.report.e0) {
        (Some(e), _) => e,
        (None, Some(e0)) => e0,
        (None, None) => {
            return Err(Error::NotConfined {
                found: 0,
                needed: 1,
            });
        }
    };
    let eta = c.eta.unwrap_or_else(|| default_broadening(c.tau));
    let map = ldos(&dev.spectrum, energy, eta)?;
    let region = dev.lattice.all_dots_region(opts.halo);
    let loc = localization_fractions(&dev.spectrum, &region, opts.degeneracy_tolerance);

    let mut out = RunOutput::default();
    out.add("ldos.csv", ldos_csv(&dev.lattice, &map));
    out.add("spectrum.csv", spectrum_csv(&dev.spectrum, &loc));
    out.notes.push(format!(
        "{} sites, LDOS at {} eV with broadening {} eV",
        dev.lattice.len(),
        format_sig9(energy),
        format_sig9(eta)
    ));
    if c.svg {
        let pts: Vec<(f64, f64, f64)> = dev
            .lattice
            .sites
            .iter()
            .zip(&map)
            .map(|(s, &v)| (s.position[0], s.position[1], v))
            .collect();
        out.add(
            "ldos.svg",
            svg::heat_map("Local density of states", "x", "y", &pts, 2.0),
        );
    }
    Ok(out)
}

/// `J1(D)`, `J2(D)` table and, with `calibrate`, the dielectric constant that
/// reproduces `target_j1` at `(width_n, dot_length_l, spacing_d)`.
///
/// The table uses the calibrated ε when it is physical (`ε ≥ 1`) and the
/// configured ε otherwise.
pub fn cmd_couplings(c: &ExperimentConfig) -> Result<RunOutput> {
    non_empty(&c.d_values, "d_values")?;
    let settings = SweepSettings {
        lead_length: c.lead_length,
        tau: c.tau,
    };
    let mut params = CoulombParams::new(c.epsilon, c.onsite_u)?;
    let mut out = RunOutput::default();

    if c.calibrate {
        let cal = calibrate_epsilon(
            c.width_n,
            c.dot_length_l,
            c.spacing_d,
            c.target_j1,
            c.onsite_u,
            &settings,
        )?;
        if cal.physical {
            params.dielectric_epsilon = cal.epsilon;
        }
        let mut rep = String::new();
        let _ = writeln!(rep, "N = {}", c.width_n);
        let _ = writeln!(rep, "L = {}", c.dot_length_l);
        let _ = writeln!(rep, "D = {}", c.spacing_d);
        let _ = writeln!(rep, "target_J1_eV = {}", format_sig9(cal.target_j1));
        let _ = writeln!(rep, "onsite_U_eV = {}", format_sig9(cal.onsite_u));
        let _ = writeln!(
            rep,
            "J1_at_epsilon_1_eV = {}",
            format_sig9(cal.j1_unscreened)
        );
        let _ = writeln!(rep, "calibrated_epsilon = {}", format_sig9(cal.epsilon));
        let _ = writeln!(rep, "physical = {}", cal.physical);
        let _ = writeln!(
            rep,
            "table_epsilon = {}",
            format_sig9(params.dielectric_epsilon)
        );
        out.notes.push(format!(
            "epsilon = {} reproduces J1 = {} eV{}",
            format_sig9(cal.epsilon),
            format_sig9(cal.target_j1),
            if cal.physical {
                ""
            } else {
                " (unphysical, below 1; table kept at configured epsilon)"
            }
        ));
        out.add("calibration.txt", rep);
    }

    let results: Vec<Result<CouplingRow>> = c
        .d_values
        .par_iter()
        .map(|&d| coupling_point(c.width_n, c.dot_length_l, d, &params, &settings))
        .collect();
    let mut rows = Vec::new();
    for (&d, r) in c.d_values.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(
                e
                @ (Error::NotConfined { .. } | Error::Delocalized { .. } | Error::EmptyDot { .. }),
            ) => out.notes.push(format!("skipped D={d}: {e}")),
            Err(e) => return Err(e),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptySweep("no spacing produced a coupling".into()));
    }
    let table = CouplingTable { rows, params };
    if c.svg {
        let pick = |f: fn(&CouplingRow) -> f64| {
            table
                .rows
                .iter()
                .map(|r| (r.spacing_d as f64, f(r)))
                .collect()
        };
        let series = [
            Series {
                label: "J1".into(),
                points: pick(|r| r.j1),
            },
            Series {
                label: "J2".into(),
                points: pick(|r| r.j2),
            },
        ];
        out.files.insert(
            0,
            (
                "couplings.svg".into(),
                svg::line_plot("Exchange coupling", "D", "J (eV)", &series, true),
            ),
        );
    }
    out.files
        .insert(0, ("couplings.csv".into(), table.to_csv()));
    Ok(out)
}

/// X̄ fidelity sweep over `deltas` (plus seeded random samples), one Z̄ π
/// rotation at `zbar_field`, the compiled CNOT, and a timing report.
pub fn cmd_gates(c: &ExperimentConfig) -> Result<RunOutput> {
    non_empty(&c.deltas, "deltas")?;
    if !(c.j1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "j1 = {} must be > 0",
            c.j1
        )));
    }
    let mut deltas = c.deltas.clone();
    let n_grid = deltas.len();
    if c.delta_samples > 0 {
        let lo = c.deltas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        deltas.extend((0..c.delta_samples).map(|_| {
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        }));
    }
    let points = deltas
        .par_chunks(1)
        .map(|d| fidelity_sweep(c.j1, c.angle, d, c.convention).map(|v| v[0]))
        .collect::<Result<Vec<_>>>()?;

    let zeeman = zeeman_splitting(c.zbar_field);
    let t_z = zbar_pi_time(c.zbar_field);
    let zbar = zbar_gate(zeeman, t_z)?;
    let cnot = cnot_gate(&CnotParams {
        j1: c.j1,
        convention: c.convention,
        zbar_field: c.zbar_field,
        hadamard_field: c.hadamard_field,
    })?;

    let mut rows: Vec<(String, f64, f64, f64)> = points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            (
                if k < n_grid { "Xbar" } else { "Xbar_sampled" }.to_string(),
                p.delta,
                p.fidelity,
                p.duration,
            )
        })
        .collect();
    rows.push(("Zbar".into(), 0.0, zbar.fidelity, zbar.duration));
    rows.push((
        "CNOT".into(),
        0.0,
        cnot.report.fidelity,
        cnot.report.duration,
    ));

    let timing = XbarTiming::new(c.j1);
    let mut rep = String::new();
    let _ = writeln!(rep, "J1_eV = {}", format_sig9(c.j1));
    let _ = writeln!(
        rep,
        "xbar_flip_ns_sigma_convention = {}",
        format_sig9(timing.sigma_convention * 1e9)
    );
    let _ = writeln!(
        rep,
        "xbar_flip_ns_spin_convention = {}",
        format_sig9(timing.spin_convention * 1e9)
    );
    let _ = writeln!(
        rep,
        "xbar_flip_brackets_0.2ns = {}",
        timing.brackets(0.2e-9)
    );
    let _ = writeln!(rep, "zbar_field_T = {}", format_sig9(c.zbar_field));
    let _ = writeln!(rep, "zbar_pi_ns = {}", format_sig9(t_z * 1e9));
    let _ = writeln!(rep, "cnot_ns = {}", format_sig9(cnot.report.duration * 1e9));
    let _ = writeln!(
        rep,
        "cnot_unitary_distance = {}",
        format_sig9(cnot.report.unitary_distance)
    );
    for (label, t) in &cnot.steps {
        let _ = writeln!(rep, "cnot_step {label} = {} ns", format_sig9(t * 1e9));
    }

    let mut out = RunOutput::default();
    out.add("gates.csv", gate_reports_csv(&rows));
    out.add("timing.txt", rep);
    out.notes.push(format!(
        "X flip {} ns (sigma) / {} ns (spin), Z pi {} ns, CNOT {} ns",
        format_sig9(timing.sigma_convention * 1e9),
        format_sig9(timing.spin_convention * 1e9),
        format_sig9(t_z * 1e9),
        format_sig9(cnot.report.duration * 1e9)
    ));
    if c.svg {
        let mut pts: Vec<(f64, f64)> = points[..n_grid]
            .iter()
            .map(|p| (p.delta, p.fidelity))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let series = [Series {
            label: "Xbar".into(),
            points: pts,
        }];
        out.add(
            "fidelity.svg",
            svg::line_plot("Xbar fidelity", "delta J / J", "F", &series, false),
        );
    }
    Ok(out)
}
