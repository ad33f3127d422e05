use nalgebra::DVector;

use super::ops::{Operator, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Pure state of `n` qubits over the tensor basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    pub n_qubits: usize,
    pub amplitudes: DVector<C64>,
}

impl SpinState {
    /// Basis state from spins, `true` meaning down (`|1⟩`).
    pub fn basis(bits: &[bool]) -> Self {
        let n = bits.len();
        let index = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        let mut amplitudes = DVector::from_element(1 << n, ZERO);
        amplitudes[index] = ONE;
        SpinState {
            n_qubits: n,
            amplitudes,
        }
    }

    /// Basis state from a string of `u`/`d` (or `0`/`1`).
    pub fn from_spins(spins: &str) -> Result<Self> {
        let bits = spins
            .chars()
            .map(|c| match c {
                'u' | '0' | '↑' => Ok(false),
                'd' | '1' | '↓' => Ok(true),
                _ => Err(Error::InvalidParameter(format!("bad spin `{c}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self::basis(&bits))
    }

    /// Normalizes the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: DVector<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let norm = amplitudes.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("zero state".into()));
        }
        Ok(SpinState {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes: amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &SpinState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply(&self, op: &Operator) -> SpinState {
        SpinState {
            n_qubits: self.n_qubits,
            amplitudes: op * &self.amplitudes,
        }
    }

    pub fn expectation(&self, op: &Operator) -> C64 {
        self.amplitudes.dotc(&(op * &self.amplitudes))
    }

    pub fn tensor(&self, other: &SpinState) -> SpinState {
        SpinState {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Schmidt coefficients across the cut after the first `k` qubits.
    pub fn schmidt_coefficients(&self, k: usize) -> Vec<f64> {
        let rows = 1usize << k;
        let cols = self.dim() / rows;
        let m = nalgebra::DMatrix::from_fn(rows, cols, |r, c| self.amplitudes[r * cols + c]);
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Von Neumann entropy (nats) across the cut after the first `k` qubits.
    pub fn entanglement_entropy(&self, k: usize) -> f64 {
        self.schmidt_coefficients(k)
            .iter()
            .map(|s| s * s)
            .filter(|&p| p > 1e-300)
            .map(|p| -p * p.ln())
            .sum()
    }
}
