//! Two-qubit decoherence-free encodings.
//!
//! * L1: `|0⟩ = |↑↓⟩`, `|1⟩ = |↓↑⟩`.
//! * L2: the same pattern in the σx basis, `|0⟩ = |+⟩|−⟩`, `|1⟩ = |−⟩|+⟩`.
//! * L3: the same pattern in the σy basis, `|0⟩ = |+i⟩|−i⟩`, `|1⟩ = |−i⟩|+i⟩`.
//!
//! L2 and L3 are L1 conjugated by `V ⊗ V` with `V = H` or `V = S H`, and
//! their logical operators are obtained by the same conjugation.

use super::ops::{embed, hadamard, identity, kron, pauli, phase_s, Axis, Operator, C64};
use super::state::SpinState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    L1,
    L2,
    L3,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::L1, Flavor::L2, Flavor::L3];

    /// Axis of the flavor's pulse set (`G^z`, `G^x`, `G^y`).
    pub fn axis(self) -> Axis {
        match self {
            Flavor::L1 => Axis::Z,
            Flavor::L2 => Axis::X,
            Flavor::L3 => Axis::Y,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Flavor::L1 => "L1",
            Flavor::L2 => "L2",
            Flavor::L3 => "L3",
        }
    }

    /// Single-qubit rotation taking z eigenstates to this flavor's basis.
    pub fn basis_rotation(self) -> Operator {
        match self {
            Flavor::L1 => identity(2),
            Flavor::L2 => hadamard(),
            Flavor::L3 => phase_s() * hadamard(),
        }
    }

    pub fn pair_rotation(self) -> Operator {
        let v = self.basis_rotation();
        kron(&v, &v)
    }
}

/// Encoded basis state of one pair.
pub fn encode(flavor: Flavor, bit: bool) -> SpinState {
    let z = SpinState::basis(&[bit, !bit]);
    z.apply(&flavor.pair_rotation())
}

/// Populations of the two code states and the weight outside the code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decoded {
    pub p0: f64,
    pub p1: f64,
    pub leakage: f64,
}

/// Decodes a two-qubit state.
pub fn decode(flavor: Flavor, state: &SpinState) -> Result<Decoded> {
    if state.n_qubits != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected 2 qubits, got {}",
            state.n_qubits
        )));
    }
    decode_pair(flavor, state, 0)
}

/// Decodes the pair starting at qubit `first` of a larger register.
pub fn decode_pair(flavor: Flavor, state: &SpinState, first: usize) -> Result<Decoded> {
    if first + 2 > state.n_qubits {
        return Err(Error::InvalidParameter(format!(
            "pair at {first} outside a {}-qubit register",
            state.n_qubits
        )));
    }
    let n = state.n_qubits;
    let norm = state.norm().powi(2);
    let pop = |bit: bool| {
        let b = encode(flavor, bit);
        let proj = &b.amplitudes * b.amplitudes.adjoint();
        state.expectation(&embed(&proj, first, n)).re / norm
    };
    let (p0, p1) = (pop(false), pop(true));
    Ok(Decoded {
        p0,
        p1,
        leakage: (1.0 - p0 - p1).max(0.0),
    })
}

/// Projector onto a pair's code space (4×4).
pub fn code_projector(flavor: Flavor) -> Operator {
    let a = encode(flavor, false).amplitudes;
    let b = encode(flavor, true).amplitudes;
    &a * a.adjoint() + &b * b.adjoint()
}

/// `(X̄, Z̄)` of one pair as 4×4 operators.
pub fn logical_operators(flavor: Flavor) -> (Operator, Operator) {
    let half = C64::new(0.5, 0.0);
    let (x, y, z) = (pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z));
    let xbar = (kron(&x, &x) + kron(&y, &y)) * half;
    let zbar = (kron(&z, &identity(2)) - kron(&identity(2), &z)) * half;
    let v = flavor.pair_rotation();
    (&v * xbar * v.adjoint(), &v * zbar * v.adjoint())
}

/// Logical register: pair `k` occupies qubits `2k, 2k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub flavors: Vec<Flavor>,
}

impl Layout {
    /// `L1 L2 L3 L1 …` with `n_logical` pairs.
    pub fn periodic(n_logical: usize) -> Self {
        Layout {
            flavors: (0..n_logical).map(|k| Flavor::ALL[k % 3]).collect(),
        }
    }

    pub fn n_pairs(&self) -> usize {
        self.flavors.len()
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.flavors.len()
    }

    pub fn flavor(&self, pair: usize) -> Result<Flavor> {
        self.flavors.get(pair).copied().ok_or_else(|| {
            Error::InvalidParameter(format!(
                "no pair {pair} in a {}-pair layout",
                self.n_pairs()
            ))
        })
    }

    /// Product of encoded basis states.
    pub fn encode(&self, bits: &[bool]) -> Result<SpinState> {
        if bits.len() != self.n_pairs() {
            return Err(Error::InvalidParameter(format!(
                "{} bits for {} logical qubits",
                bits.len(),
                self.n_pairs()
            )));
        }
        let mut state = encode(self.flavors[0], bits[0]);
        for (f, &b) in self.flavors.iter().zip(bits).skip(1) {
            state = state.tensor(&encode(*f, b));
        }
        Ok(state)
    }

    /// Logical basis states in binary order (pair 0 most significant).
    pub fn logical_basis(&self) -> Vec<SpinState> {
        let k = self.n_pairs();
        (0..1usize << k)
            .map(|m| {
                let bits: Vec<bool> = (0..k).map(|p| (m >> (k - 1 - p)) & 1 == 1).collect();
                self.encode(&bits).expect("bit count matches layout")
            })
            .collect()
    }

    /// Projector onto the product code space.
    pub fn code_projector(&self) -> Operator {
        let mut p = code_projector(self.flavors[0]);
        for f in &self.flavors[1..] {
            p = kron(&p, &code_projector(*f));
        }
        p
    }

    /// `(X̄, Z̄)` of `pair`, embedded in the full register.
    pub fn logical_operators(&self, pair: usize) -> Result<(Operator, Operator)> {
        let (x, z) = logical_operators(self.flavor(pair)?);
        let n = self.n_qubits();
        Ok((embed(&x, 2 * pair, n), embed(&z, 2 * pair, n)))
    }
}
