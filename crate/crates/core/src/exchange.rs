//! Exchange couplings between dot-localized orbitals.
//!
//! Orbitals are point charges on the carbon sites, so the exchange integral
//! becomes the lattice sum
//!
//! ```text
//! J = Σ_ij ρ_i V_ij ρ_j,   ρ_i = φ1(i) φ2(i),
//! V_ij = k_e / (ε r_ij) for i ≠ j,   V_ii = U.
//! ```
//!
//! The spin chain uses `J1` as the coefficient of `S1·S2`; its σ-convention
//! coupling is `J1 / 4`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format_sig9;
use crate::lattice::{GNRGeometry, Lattice};
use crate::tightbinding::{analyze_device, DeviceAnalysis, Spectrum, DEFAULT_HALO};

/// `e² / (4πε₀)` in eV·Å.
pub const COULOMB_CONSTANT_EV_A: f64 = 14.3996;
pub const DEFAULT_ONSITE_U_EV: f64 = 9.3;

/// Coupling the kernel is calibrated against, in eV.
pub const PAPER_J1_EV: f64 = 8e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    pub coulomb_constant: f64,
    pub dielectric_epsilon: f64,
    pub onsite_u: f64,
}

impl Default for CoulombParams {
    fn default() -> Self {
        CoulombParams {
            coulomb_constant: COULOMB_CONSTANT_EV_A,
            dielectric_epsilon: 1.0,
            onsite_u: DEFAULT_ONSITE_U_EV,
        }
    }
}

impl CoulombParams {
    pub fn new(dielectric_epsilon: f64, onsite_u: f64) -> Result<Self> {
        let p = CoulombParams {
            dielectric_epsilon,
            onsite_u,
            ..Default::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.onsite_u > 0.0 && self.onsite_u.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "onsite_U = {} must be > 0",
                self.onsite_u
            )));
        }
        if !(self.dielectric_epsilon >= 1.0 && self.dielectric_epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dielectric epsilon = {} must be >= 1",
                self.dielectric_epsilon
            )));
        }
        if !(self.coulomb_constant > 0.0) {
            return Err(Error::InvalidParameter(
                "coulomb constant must be > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbital {
    pub amplitudes: Vec<f64>,
    pub home_dot: usize,
    /// Weight on the home dot plus its halo.
    pub localization: f64,
}

impl Orbital {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn overlap(&self, other: &Orbital) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// One orbital per dot, built from the lowest confined levels.
///
/// The confined subspace is rotated into eigenvectors of the projected
/// position operator along the ribbon, which for two dots reproduces the
/// bonding/antibonding recombination `(ψ+ ± ψ−)/√2`. Orbitals are ordered by
/// mean position and each is signed so its largest amplitude is positive.
pub fn localized_orbitals(
    lattice: &Lattice,
    spectrum: &Spectrum,
    confined: &[usize],
) -> Result<Vec<Orbital>> {
    let n_dots = lattice.dot_masks.len();
    if confined.len() < n_dots {
        return Err(Error::NotConfined {
            found: confined.len(),
            needed: n_dots,
        });
    }
    let cols = &confined[..n_dots];
    let s = spectrum.eigenvectors.select_columns(cols);
    let x: Vec<f64> = lattice.sites.iter().map(|site| site.position[0]).collect();
    let mut xs = s.clone();
    for (i, mut row) in xs.row_iter_mut().enumerate() {
        row *= x[i];
    }
    let proj = s.transpose() * xs;
    let proj = (&proj + proj.transpose()) * 0.5;
    let eig = SymmetricEigen::new(proj);
    let mut order: Vec<usize> = (0..n_dots).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let rotated: DMatrix<f64> = &s * eig.eigenvectors.select_columns(&order);

    let mut orbitals = Vec::with_capacity(n_dots);
    for (dot, col) in rotated.column_iter().enumerate() {
        let mut amplitudes: Vec<f64> = col.iter().copied().collect();
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        let peak = amplitudes
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        let sign = if peak < 0.0 { -1.0 } else { 1.0 };
        for a in &mut amplitudes {
            *a *= sign / norm;
        }
        let region = lattice.dot_region(dot, DEFAULT_HALO);
        let localization: f64 = amplitudes
            .iter()
            .zip(&region)
            .filter(|(_, &inside)| inside)
            .map(|(a, _)| a * a)
            .sum();
        if localization < 0.5 {
            return Err(Error::Delocalized {
                dot,
                fraction: localization,
                threshold: 0.5,
            });
        }
        orbitals.push(Orbital {
            amplitudes,
            home_dot: dot,
            localization,
        });
    }
    Ok(orbitals)
}

/// `(φ1, φ2)` of a two-dot device.
pub fn localized_pair(
    lattice: &Lattice,
    spectrum: &Spectrum,
    confined: &[usize],
) -> Result<(Orbital, Orbital)> {
    if lattice.dot_masks.len() != 2 {
        return Err(Error::InvalidGeometry(format!(
            "expected a two-dot device, got {} dots",
            lattice.dot_masks.len()
        )));
    }
    let mut v = localized_orbitals(lattice, spectrum, confined)?;
    let phi2 = v.pop().unwrap();
    let phi1 = v.pop().unwrap();
    Ok((phi1, phi2))
}

/// The on-site and off-site pieces of the exchange sum for unit kernel
/// constants: `J = U · onsite + (k_e/ε) · coulomb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeParts {
    pub onsite: f64,
    pub coulomb: f64,
}

impl ExchangeParts {
    pub fn energy(&self, params: &CoulombParams) -> f64 {
        params.onsite_u * self.onsite
            + params.coulomb_constant / params.dielectric_epsilon * self.coulomb
    }
}

pub fn exchange_parts(phi1: &Orbital, phi2: &Orbital, lattice: &Lattice) -> ExchangeParts {
    let rho: Vec<f64> = phi1
        .amplitudes
        .iter()
        .zip(&phi2.amplitudes)
        .map(|(a, b)| a * b)
        .collect();
    let pos: Vec<[f64; 2]> = lattice.sites.iter().map(|s| s.position).collect();
    let onsite = rho.iter().map(|r| r * r).sum();
    // Per-row partial sums are gathered in order, then added serially, so
    // the result does not depend on the worker count.
    let rows: Vec<f64> = (0..rho.len())
        .into_par_iter()
        .map(|i| {
            let (xi, yi) = (pos[i][0], pos[i][1]);
            let mut s = 0.0;
            for j in 0..rho.len() {
                if j != i {
                    let r = (pos[j][0] - xi).hypot(pos[j][1] - yi);
                    s += rho[j] / r;
                }
            }
            rho[i] * s
        })
        .collect();
    ExchangeParts {
        onsite,
        coulomb: rows.iter().sum(),
    }
}

pub fn exchange_integral(
    phi1: &Orbital,
    phi2: &Orbital,
    lattice: &Lattice,
    params: &CoulombParams,
) -> f64 {
    let rho: Vec<f64> = phi1
        .amplitudes
        .iter()
        .zip(&phi2.amplitudes)
        .map(|(a, b)| a * b)
        .collect();
    let pos: Vec<[f64; 2]> = lattice.sites.iter().map(|s| s.position).collect();
    let k = params.coulomb_constant / params.dielectric_epsilon;
    let u = params.onsite_u;
    let rows: Vec<f64> = (0..rho.len())
        .into_par_iter()
        .map(|i| {
            let (xi, yi) = (pos[i][0], pos[i][1]);
            let mut s = 0.0;
            for j in 0..rho.len() {
                let v = if j == i {
                    u
                } else {
                    k / (pos[j][0] - xi).hypot(pos[j][1] - yi)
                };
                s += v * rho[j];
            }
            rho[i] * s
        })
        .collect();
    rows.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRow {
    pub width_n: usize,
    pub dot_length_l: usize,
    pub spacing_d: usize,
    pub j1: f64,
    pub j2: f64,
    pub epsilon: f64,
    pub onsite_u: f64,
}

impl CouplingRow {
    pub fn ratio(&self) -> f64 {
        self.j1 / self.j2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    pub rows: Vec<CouplingRow>,
    pub params: CoulombParams,
}

impl CouplingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,L,D,J1_eV,J2_eV,ratio,epsilon,onsite_U_eV\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.width_n,
                r.dot_length_l,
                r.spacing_d,
                format_sig9(r.j1),
                format_sig9(r.j2),
                format_sig9(r.ratio()),
                format_sig9(r.epsilon),
                format_sig9(r.onsite_u)
            );
        }
        out
    }

    pub fn row(&self, d: usize) -> Option<&CouplingRow> {
        self.rows.iter().find(|r| r.spacing_d == d)
    }
}

/// Device settings shared by every point of a coupling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub lead_length: usize,
    pub tau: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            lead_length: crate::lattice::DEFAULT_LEAD_LENGTH,
            tau: crate::DEFAULT_TAU_EV,
        }
    }
}

fn solved_orbitals(geom: &GNRGeometry, tau: f64) -> Result<(DeviceAnalysis, Vec<Orbital>)> {
    let dev = analyze_device(geom, tau)?;
    let orbitals = localized_orbitals(&dev.lattice, &dev.spectrum, &dev.report.confined_indices)?;
    Ok((dev, orbitals))
}

/// Kernel-independent sums for `J1` (2-dot device) and `J2` (dots 1 and 3 of
/// a 3-dot device) at one spacing.
pub fn coupling_parts(
    n: usize,
    l: usize,
    d: usize,
    settings: &SweepSettings,
) -> Result<(ExchangeParts, ExchangeParts)> {
    let geom = GNRGeometry::new(n, l, d, 2).with_lead_length(settings.lead_length);
    let (dev2, orb2) = solved_orbitals(&geom, settings.tau)?;
    let j1 = exchange_parts(&orb2[0], &orb2[1], &dev2.lattice);
    let (dev3, orb3) = solved_orbitals(&geom.with_dots(3), settings.tau)?;
    let j2 = exchange_parts(&orb3[0], &orb3[2], &dev3.lattice);
    Ok((j1, j2))
}

pub fn coupling_point(
    n: usize,
    l: usize,
    d: usize,
    params: &CoulombParams,
    settings: &SweepSettings,
) -> Result<CouplingRow> {
    let (p1, p2) = coupling_parts(n, l, d, settings)?;
    Ok(CouplingRow {
        width_n: n,
        dot_length_l: l,
        spacing_d: d,
        j1: p1.energy(params),
        j2: p2.energy(params),
        epsilon: params.dielectric_epsilon,
        onsite_u: params.onsite_u,
    })
}

/// Result of [`coupling_sweep`]: rows in `d_range` order plus one warning per
/// skipped spacing.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub table: CouplingTable,
    pub warnings: Vec<String>,
}

/// `J1(D)` and `J2(D)` over `d_range`. Spacings whose devices do not confine
/// enough levels are skipped with a warning.
pub fn coupling_sweep(
    n: usize,
    l: usize,
    d_range: &[usize],
    params: &CoulombParams,
    settings: &SweepSettings,
) -> Result<SweepOutcome> {
    if d_range.is_empty() {
        return Err(Error::EmptySweep("no spacings given".into()));
    }
    params.validate()?;
    let results: Vec<Result<CouplingRow>> = d_range
        .par_iter()
        .map(|&d| coupling_point(n, l, d, params, settings))
        .collect();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (&d, r) in d_range.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(
                e
                @ (Error::NotConfined { .. } | Error::Delocalized { .. } | Error::EmptyDot { .. }),
            ) => warnings.push(format!("skipping N={n} L={l} D={d}: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(SweepOutcome {
        table: CouplingTable {
            rows,
            params: *params,
        },
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Dielectric constant reproducing the target exactly.
    pub epsilon: f64,
    /// Whether `epsilon >= 1`.
    pub physical: bool,
    pub target_j1: f64,
    pub onsite_u: f64,
    /// `J1` at `ε = 1`.
    pub j1_unscreened: f64,
    pub parts: ExchangeParts,
}

/// Solves `J1(ε) = target` with `U` held fixed.
///
/// `J1(ε) = U·a + k_e·b/ε` is monotone in `ε`, so the root is closed-form.
pub fn calibrate_epsilon(
    n: usize,
    l: usize,
    d: usize,
    target_j1: f64,
    onsite_u: f64,
    settings: &SweepSettings,
) -> Result<Calibration> {
    if !(target_j1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target J1 = {target_j1} must be > 0"
        )));
    }
    let geom = GNRGeometry::new(n, l, d, 2).with_lead_length(settings.lead_length);
    let (dev, orb) = solved_orbitals(&geom, settings.tau)?;
    let parts = exchange_parts(&orb[0], &orb[1], &dev.lattice);
    calibrate_from_parts(parts, target_j1, onsite_u)
}

pub fn calibrate_from_parts(
    parts: ExchangeParts,
    target_j1: f64,
    onsite_u: f64,
) -> Result<Calibration> {
    let base = CoulombParams {
        onsite_u,
        ..Default::default()
    };
    let remainder = target_j1 - onsite_u * parts.onsite;
    let epsilon = COULOMB_CONSTANT_EV_A * parts.coulomb / remainder;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "no positive dielectric constant gives J1 = {target_j1:.3e} eV with U = {onsite_u} eV"
        )));
    }
    Ok(Calibration {
        epsilon,
        physical: epsilon >= 1.0,
        target_j1,
        onsite_u,
        j1_unscreened: parts.energy(&base),
        parts,
    })
}
