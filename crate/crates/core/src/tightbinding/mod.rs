//! Nearest-neighbour π-orbital Hamiltonian, near-zero eigensolvers and
//! confinement analysis.

mod banded;
mod confinement;
mod solver;

pub use banded::BandedLu;
pub use confinement::{
    analyze_device, analyze_device_with, confinement_report, confinement_report_with,
    default_broadening, ldos, ldos_csv, lead_band_gap, localization_fractions, spectrum_csv,
    ConfinementOptions, ConfinementReport, DeviceAnalysis, DEFAULT_HALO, DEFAULT_THRESHOLD,
    ZERO_MODE_TOLERANCE,
};
pub use solver::{solve_dense, solve_near_zero, solve_shift_invert, IterativeOptions, DENSE_LIMIT};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Sparse symmetric hopping matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub dimension: usize,
    pub hopping_tau: f64,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl Hamiltonian {
    /// Builds `-tau` on every listed bond.
    pub fn from_bonds(dimension: usize, bonds: &[(usize, usize)], tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau = {tau} must be > 0")));
        }
        let mut pairs = Vec::with_capacity(2 * bonds.len());
        for &(i, j) in bonds {
            if i == j || i >= dimension || j >= dimension {
                return Err(Error::InvalidParameter(format!("bad bond ({i}, {j})")));
            }
            pairs.push((i, j));
            pairs.push((j, i));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut row_ptr = vec![0usize; dimension + 1];
        for &(i, _) in &pairs {
            row_ptr[i + 1] += 1;
        }
        for i in 0..dimension {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = pairs.iter().map(|&(_, j)| j).collect();
        let values = vec![-tau; pairs.len()];
        Ok(Hamiltonian {
            dimension,
            hopping_tau: tau,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dimension).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(p) => self.values[self.row_ptr[i] + p],
            Err(_) => 0.0,
        }
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.dimension) {
            *yi = (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(|p| self.values[p] * x[self.col_idx[p]])
                .sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.entries()
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }
}

pub fn assemble(lattice: &Lattice, tau: f64) -> Result<Hamiltonian> {
    Hamiltonian::from_bonds(lattice.len(), &lattice.bonds, tau)
}

/// Eigenpairs sorted by ascending energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// One column per eigenvalue.
    pub eigenvectors: DMatrix<f64>,
    /// `‖Hψ − Eψ‖` per pair.
    pub residuals: Vec<f64>,
    pub hopping_tau: f64,
    /// True when every eigenpair of the matrix is present.
    pub complete: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.eigenvectors.nrows()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &r| m.max(r))
    }

    /// Largest `|⟨ψ_a|ψ_b⟩ − δ_ab|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.eigenvectors.transpose() * &self.eigenvectors;
        let mut worst = 0.0f64;
        for a in 0..g.nrows() {
            for b in 0..g.ncols() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g[(a, b)] - target).abs());
            }
        }
        worst
    }
}

pub(crate) fn residual_norms(h: &Hamiltonian, values: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
    let n = h.dimension;
    let mut hx = vec![0.0; n];
    values
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let col: Vec<f64> = vectors.column(k).iter().copied().collect();
            h.apply(&col, &mut hx);
            hx.iter()
                .zip(&col)
                .map(|(a, b)| (a - e * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}
