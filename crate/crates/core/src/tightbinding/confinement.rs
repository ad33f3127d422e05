use std::fmt::Write as _;

use super::solver::{solve_dense, solve_shift_invert, IterativeOptions, DENSE_LIMIT};
use super::{assemble, Spectrum};
use crate::error::{Error, Result};
use crate::format_sig9;
use crate::lattice::{build_device, GNRGeometry, Lattice};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Bonds added around each dot mask when measuring localization.
pub const DEFAULT_HALO: usize = 2;

/// Energies with `|E| <= ZERO_MODE_TOLERANCE · τ` count as zero modes.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-6;

/// Band gap of an infinite armchair ribbon with `n` dimer rows.
///
/// The transverse modes are `2τ cos(pπ/(n+1))`, so the gap is
/// `2τ · min_p |1 + 2cos(pπ/(n+1))|`.
pub fn lead_band_gap(n: usize, tau: f64) -> f64 {
    let m = (1..=n)
        .map(|p| (1.0 + 2.0 * (p as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).abs())
        .fold(f64::INFINITY, f64::min);
    2.0 * tau * m
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinementOptions {
    pub threshold: f64,
    pub halo: usize,
    /// Eigenvalues closer than this (in units of τ) share a degenerate block.
    pub degeneracy_tolerance: f64,
}

impl Default for ConfinementOptions {
    fn default() -> Self {
        ConfinementOptions {
            threshold: DEFAULT_THRESHOLD,
            halo: DEFAULT_HALO,
            degeneracy_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfinementReport {
    /// Lowest confined positive energy.
    pub e0: Option<f64>,
    /// Distance from `e0` to the next higher eigenvalue.
    pub gap: Option<f64>,
    /// Localization of the `e0` state, or of the lowest positive level when
    /// nothing is confined.
    pub localization_fraction: f64,
    pub confined: bool,
    /// Band gap of the leads; confined levels lie inside `(0, lead_gap/2)`.
    pub lead_gap: f64,
    /// Spectrum indices of every confined positive level, ascending.
    pub confined_indices: Vec<usize>,
}

impl ConfinementReport {
    /// The mirrored hole level.
    pub fn hole_e0(&self) -> Option<f64> {
        self.e0.map(|e| -e)
    }
}

/// Localization weight of every eigenpair inside `region`.
///
/// Within a degenerate block the weight is `Tr(P_block M)/dim`, which does not
/// depend on how the block happens to be rotated.
pub fn localization_fractions(
    spectrum: &Spectrum,
    region: &[bool],
    degeneracy_tolerance: f64,
) -> Vec<f64> {
    let raw: Vec<f64> = (0..spectrum.len())
        .map(|k| {
            spectrum
                .eigenvectors
                .column(k)
                .iter()
                .zip(region)
                .filter(|(_, &inside)| inside)
                .map(|(a, _)| a * a)
                .sum()
        })
        .collect();
    let tol = degeneracy_tolerance * spectrum.hopping_tau;
    let mut out = raw.clone();
    let mut start = 0;
    while start < raw.len() {
        let mut end = start + 1;
        while end < raw.len() && spectrum.eigenvalues[end] - spectrum.eigenvalues[end - 1] <= tol {
            end += 1;
        }
        let mean = raw[start..end].iter().sum::<f64>() / (end - start) as f64;
        for v in &mut out[start..end] {
            *v = mean.clamp(0.0, 1.0);
        }
        start = end;
    }
    out
}

pub fn confinement_report(lattice: &Lattice, spectrum: &Spectrum) -> Result<ConfinementReport> {
    confinement_report_with(lattice, spectrum, &ConfinementOptions::default())
}

/// Finds the lowest positive level that is both dot-localized and inside the
/// lead band gap.
pub fn confinement_report_with(
    lattice: &Lattice,
    spectrum: &Spectrum,
    opts: &ConfinementOptions,
) -> Result<ConfinementReport> {
    let tau = spectrum.hopping_tau;
    let lead_gap = lead_band_gap(lattice.geometry.width_n, tau);
    let edge = lead_gap / 2.0;
    let zero = ZERO_MODE_TOLERANCE * tau;
    let top = spectrum
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |m, &e| m.max(e));
    if !spectrum.complete && top <= edge {
        return Err(Error::InvalidParameter(format!(
            "spectrum reaches only {top:.4} eV, below the lead band edge {edge:.4} eV"
        )));
    }
    let region = lattice.all_dots_region(opts.halo);
    let loc = localization_fractions(spectrum, &region, opts.degeneracy_tolerance);

    let confined_indices: Vec<usize> = (0..spectrum.len())
        .filter(|&k| {
            let e = spectrum.eigenvalues[k];
            e > zero && e < edge && loc[k] >= opts.threshold
        })
        .collect();
    let first_positive = (0..spectrum.len()).find(|&k| spectrum.eigenvalues[k] > zero);

    let report = match confined_indices.first() {
        Some(&k) => {
            let e0 = spectrum.eigenvalues[k];
            let tol = opts.degeneracy_tolerance * tau;
            let gap = spectrum
                .eigenvalues
                .iter()
                .find(|&&e| e > e0 + tol)
                .map(|&e| e - e0);
            ConfinementReport {
                e0: Some(e0),
                gap,
                localization_fraction: loc[k],
                confined: true,
                lead_gap,
                confined_indices,
            }
        }
        None => ConfinementReport {
            e0: None,
            gap: None,
            localization_fraction: first_positive.map_or(0.0, |k| loc[k]),
            confined: false,
            lead_gap,
            confined_indices,
        },
    };
    Ok(report)
}

/// Lattice, spectrum and confinement report of one device.
#[derive(Debug, Clone)]
pub struct DeviceAnalysis {
    pub lattice: Lattice,
    pub spectrum: Spectrum,
    pub report: ConfinementReport,
}

/// Builds and solves a device with enough levels for [`confinement_report`].
pub fn analyze_device(geom: &GNRGeometry, tau: f64) -> Result<DeviceAnalysis> {
    analyze_device_with(geom, tau, &ConfinementOptions::default())
}

pub fn analyze_device_with(
    geom: &GNRGeometry,
    tau: f64,
    opts: &ConfinementOptions,
) -> Result<DeviceAnalysis> {
    let lattice = build_device(geom)?;
    let h = assemble(&lattice, tau)?;
    let spectrum = if h.dimension < DENSE_LIMIT {
        solve_dense(&h)
    } else {
        let edge = lead_band_gap(geom.width_n, tau) / 2.0;
        let mut k = 32.min(h.dimension);
        loop {
            let s = solve_shift_invert(&h, k, &IterativeOptions::default())?;
            let top = s
                .eigenvalues
                .iter()
                .fold(f64::NEG_INFINITY, |m, &e| m.max(e));
            if top > edge || k == h.dimension {
                break s;
            }
            k = (2 * k).min(h.dimension);
        }
    };
    let report = confinement_report_with(&lattice, &spectrum, opts)?;
    Ok(DeviceAnalysis {
        lattice,
        spectrum,
        report,
    })
}

/// Lorentzian-broadened local density of states at `energy`.
pub fn ldos(spectrum: &Spectrum, energy: f64, eta: f64) -> Result<Vec<f64>> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "broadening {eta} must be > 0"
        )));
    }
    let n = spectrum.dimension();
    let mut out = vec![0.0; n];
    for (k, &e) in spectrum.eigenvalues.iter().enumerate() {
        let w = eta / std::f64::consts::PI / ((energy - e).powi(2) + eta * eta);
        for (o, a) in out.iter_mut().zip(spectrum.eigenvectors.column(k).iter()) {
            *o += w * a * a;
        }
    }
    Ok(out)
}

/// Default LDOS broadening for hopping `tau`.
pub fn default_broadening(tau: f64) -> f64 {
    0.02 * tau
}

pub fn spectrum_csv(spectrum: &Spectrum, localization: &[f64]) -> String {
    let mut out = String::from("index,energy_eV,localization_fraction\n");
    for (k, (&e, &l)) in spectrum.eigenvalues.iter().zip(localization).enumerate() {
        let _ = writeln!(out, "{k},{},{}", format_sig9(e), format_sig9(l));
    }
    out
}

pub fn ldos_csv(lattice: &Lattice, values: &[f64]) -> String {
    let mut out = String::from("site,x,y,ldos\n");
    for (s, &v) in lattice.sites.iter().zip(values) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.index,
            format_sig9(s.position[0]),
            format_sig9(s.position[1]),
            format_sig9(v)
        );
    }
    out
}
