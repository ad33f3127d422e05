//! Z-shaped graphene nanoribbon quantum dots, end to end.
//!
//! The crate follows one device from geometry to gates:
//!
//! * [`lattice`] builds finite honeycomb ribbons with a chain of Z-kinks and
//!   marks the zigzag junction ("dot") of each kink.
//! * [`tightbinding`] assembles the nearest-neighbour π-orbital Hamiltonian,
//!   diagonalizes it near zero energy and decides whether a junction binds a
//!   state.
//! * [`exchange`] turns the bound states of multi-dot devices into localized
//!   orbitals and evaluates the lattice exchange integral between them.
//! * [`spinchain`] simulates the resulting always-on Heisenberg qubit chain:
//!   two-spin decoherence-free encodings, bang-bang decoupling cycles and the
//!   logical X̄, Z̄, W and CNOT gates.
//! * [`experiment`] wires the layers into reproducible sweeps that write CSV
//!   files; the `gnrqc` binary is a thin front end over it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exchange;
pub mod experiment;
pub mod lattice;
pub mod spinchain;
pub mod tightbinding;

pub use error::{Error, Result};

pub use exchange::{CoulombParams, CouplingTable, Orbital};
pub use lattice::{build_device, classify_width, GNRGeometry, Lattice, RibbonClass, RibbonKind};
pub use tightbinding::{assemble, confinement_report, ConfinementReport, Hamiltonian, Spectrum};

/// Default first-neighbour hopping of graphene, in eV.
pub const DEFAULT_TAU_EV: f64 = 2.7;

/// Formats a float with 9 significant digits in scientific notation.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{x:.8e}")
}
