//! Dense complex operators on a register of qubits.
//!
//! Qubit 0 is the leftmost tensor factor, so it maps to the most significant
//! bit of a basis index. Spin up is `|0⟩` (σz = +1).

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type Operator = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

pub fn identity(dim: usize) -> Operator {
    Operator::identity(dim, dim)
}

pub fn pauli(axis: Axis) -> Operator {
    match axis {
        Axis::X => Operator::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => Operator::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Axis::Z => Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

pub fn hadamard() -> Operator {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Operator::from_row_slice(2, 2, &[s, s, s, -s])
}

pub fn phase_s() -> Operator {
    Operator::from_row_slice(2, 2, &[ONE, ZERO, ZERO, I])
}

pub fn kron(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}

/// `op` acting on `site` of an `n`-qubit register.
pub fn embed(op: &Operator, site: usize, n: usize) -> Operator {
    let d = op.nrows();
    let left = 1usize << site;
    let right = (1usize << n) / (left * d);
    let mut out = identity(left).kronecker(op);
    out = out.kronecker(&identity(right));
    out
}

/// `a` on site `i` times `b` on site `j` (`i != j`).
pub fn embed_two(a: &Operator, i: usize, b: &Operator, j: usize, n: usize) -> Operator {
    embed(a, i, n) * embed(b, j, n)
}

/// `σ_i · σ_j = xx + yy + zz`.
pub fn heisenberg(i: usize, j: usize, n: usize) -> Operator {
    Axis::ALL
        .iter()
        .map(|&a| embed_two(&pauli(a), i, &pauli(a), j, n))
        .fold(Operator::zeros(1 << n, 1 << n), |acc, t| acc + t)
}

pub fn dagger(a: &Operator) -> Operator {
    a.adjoint()
}

/// Largest singular value.
pub fn op_norm(a: &Operator) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |m, &s| m.max(s))
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
    a * b + b * a
}

pub fn is_hermitian(a: &Operator, tol: f64) -> bool {
    (a - a.adjoint()).iter().all(|z| z.norm() <= tol)
}

pub fn scale(a: &Operator, s: f64) -> Operator {
    a * C64::new(s, 0.0)
}
