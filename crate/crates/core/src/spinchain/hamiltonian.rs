use nalgebra::{DVector, SymmetricEigen};

use super::ops::{embed, heisenberg, pauli, Axis, Operator, C64};
use super::state::SpinState;
use super::HBAR_EV_S;
use crate::error::{Error, Result};

/// Largest register handled by exact diagonalization.
pub const MAX_QUBITS: usize = 12;

/// `H = Σ J_i σ_i·σ_{i+1} + Σ K_i σ_i·σ_{i+2} + Σ b_i·σ_i / 2` (eV).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainHamiltonian {
    pub couplings: Vec<f64>,
    /// Next-nearest couplings, empty unless a sensitivity study adds them.
    pub next_nearest: Vec<f64>,
    /// Per-qubit field `(b_x, b_y, b_z)` as a splitting in eV.
    pub fields: Vec<[f64; 3]>,
}

/// Nearest-neighbour chain with z splittings `zeeman` (empty means none).
pub fn build_chain_hamiltonian(couplings: &[f64], zeeman: &[f64]) -> Result<ChainHamiltonian> {
    let n = couplings.len() + 1;
    if n > MAX_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "{n} qubits exceeds {MAX_QUBITS}"
        )));
    }
    if !zeeman.is_empty() && zeeman.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} Zeeman terms for {n} qubits",
            zeeman.len()
        )));
    }
    let fields = (0..n)
        .map(|i| [0.0, 0.0, zeeman.get(i).copied().unwrap_or(0.0)])
        .collect();
    Ok(ChainHamiltonian {
        couplings: couplings.to_vec(),
        next_nearest: Vec::new(),
        fields,
    })
}

impl ChainHamiltonian {
    /// `n` uncoupled qubits without fields.
    pub fn free(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "{n} qubits outside 1..={MAX_QUBITS}"
            )));
        }
        build_chain_hamiltonian(&vec![0.0; n - 1], &[])
    }

    pub fn n_qubits(&self) -> usize {
        self.fields.len()
    }

    pub fn zeeman(&self) -> Vec<f64> {
        self.fields.iter().map(|f| f[2]).collect()
    }

    pub fn with_next_nearest(mut self, k: &[f64]) -> Result<Self> {
        if k.len() + 2 != self.n_qubits() {
            return Err(Error::InvalidParameter(format!(
                "{} next-nearest terms for {} qubits",
                k.len(),
                self.n_qubits()
            )));
        }
        self.next_nearest = k.to_vec();
        Ok(self)
    }

    pub fn with_field(mut self, qubit: usize, axis: Axis, splitting: f64) -> Self {
        let a = match axis {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        };
        self.fields[qubit][a] = splitting;
        self
    }

    pub fn scaled_couplings(&self, factor: f64) -> Self {
        let mut h = self.clone();
        for j in &mut h.couplings {
            *j *= factor;
        }
        h
    }

    pub fn matrix(&self) -> Operator {
        let n = self.n_qubits();
        let dim = 1usize << n;
        let mut h = Operator::zeros(dim, dim);
        for (i, &j) in self.couplings.iter().enumerate() {
            if j != 0.0 {
                h += heisenberg(i, i + 1, n) * C64::new(j, 0.0);
            }
        }
        for (i, &k) in self.next_nearest.iter().enumerate() {
            if k != 0.0 {
                h += heisenberg(i, i + 2, n) * C64::new(k, 0.0);
            }
        }
        for (i, f) in self.fields.iter().enumerate() {
            for (a, &axis) in Axis::ALL.iter().enumerate() {
                if f[a] != 0.0 {
                    h += embed(&pauli(axis), i, n) * C64::new(f[a] / 2.0, 0.0);
                }
            }
        }
        h
    }
}

/// `exp(−iHt/ħ)` from one Hermitian eigendecomposition.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: Operator,
}

impl Propagator {
    pub fn new(h: &Operator) -> Self {
        let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        Propagator {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn unitary(&self, t: f64) -> Operator {
        let phases = DVector::from_iterator(
            self.energies.len(),
            self.energies
                .iter()
                .map(|&e| C64::from_polar(1.0, -e * t / HBAR_EV_S)),
        );
        let mut scaled = self.vectors.clone();
        for (c, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[c];
        }
        scaled * self.vectors.adjoint()
    }

    pub fn apply(&self, state: &SpinState, t: f64) -> SpinState {
        let coeffs = self.vectors.adjoint() * &state.amplitudes;
        let rotated = DVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&self.energies)
                .map(|(c, &e)| c * C64::from_polar(1.0, -e * t / HBAR_EV_S)),
        );
        SpinState {
            n_qubits: state.n_qubits,
            amplitudes: &self.vectors * rotated,
        }
    }
}

/// Exact evolution of `state` for `t` seconds.
pub fn evolve(state: &SpinState, h: &ChainHamiltonian, t: f64) -> Result<SpinState> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be >= 0")));
    }
    if state.n_qubits != h.n_qubits() {
        return Err(Error::InvalidParameter(format!(
            "state has {} qubits, Hamiltonian {}",
            state.n_qubits,
            h.n_qubits()
        )));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    Ok(Propagator::new(&h.matrix()).apply(state, t))
}
