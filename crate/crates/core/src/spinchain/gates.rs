//! Logical gates, their timing and fidelity.
//!
//! Rotations are `exp(−iθĀ)`. On the L1 code space the pair exchange
//! `J(σ·σ)` equals `J(2X̄ − 1)`, so recoupling for a time `t` rotates by
//! `θ = 2Jt/ħ`; a differential splitting `ΔE` rotates `Z̄` by `θ = ΔE t/(2ħ)`.

use std::fmt::Write as _;

use super::encoding::{Flavor, Layout};
use super::hamiltonian::{build_chain_hamiltonian, ChainHamiltonian, Propagator};
use super::ops::{embed, identity, pauli, Axis, Operator, C64, I, ONE, ZERO};
use super::pulses::{decoupling_group, group_average, recoupling_group, AveragingGroup};
use super::state::SpinState;
use super::{G_FACTOR, HBAR_EV_S, MU_B_EV_PER_T};
use crate::error::{Error, Result};
use crate::format_sig9;

/// Which coupling multiplies `σ·σ` in the chain Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `J1 S·S`, i.e. `(J1/4) σ·σ`.
    Sigma,
    /// `J1 σ·σ`.
    Spin,
}

impl Convention {
    /// Coefficient of `σ·σ` for an exchange integral `j1`.
    pub fn pauli_coupling(self, j1: f64) -> f64 {
        match self {
            Convention::Sigma => j1 / 4.0,
            Convention::Spin => j1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Convention::Sigma => "sigma",
            Convention::Spin => "spin",
        }
    }
}

/// `g μ_B B` in eV.
pub fn zeeman_splitting(field_tesla: f64) -> f64 {
    G_FACTOR * MU_B_EV_PER_T * field_tesla
}

/// `Δt = πħ/(4J)` for the X̄ flip.
pub fn xbar_flip_time(j1: f64, convention: Convention) -> f64 {
    std::f64::consts::PI * HBAR_EV_S / (4.0 * convention.pauli_coupling(j1))
}

/// Time of a Bloch π rotation of Z̄ (`θ = π/2`) when the two dots differ in
/// splitting by `g μ_B B`: `πħ/(g μ_B B)`.
pub fn zbar_pi_time(field_tesla: f64) -> f64 {
    std::f64::consts::PI * HBAR_EV_S / zeeman_splitting(field_tesla)
}

/// Flip times under both conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XbarTiming {
    pub j1: f64,
    pub sigma_convention: f64,
    pub spin_convention: f64,
}

impl XbarTiming {
    pub fn new(j1: f64) -> Self {
        XbarTiming {
            j1,
            sigma_convention: xbar_flip_time(j1, Convention::Sigma),
            spin_convention: xbar_flip_time(j1, Convention::Spin),
        }
    }

    pub fn brackets(&self, t: f64) -> bool {
        let lo = self.sigma_convention.min(self.spin_convention);
        let hi = self.sigma_convention.max(self.spin_convention);
        lo <= t && t <= hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub target: String,
    pub fidelity: f64,
    /// Seconds.
    pub duration: f64,
    /// Operator-norm distance on the code space after removing the global
    /// phase.
    pub unitary_distance: f64,
}

/// `⟨a|U|b⟩` over the given code basis.
pub fn restrict(u: &Operator, basis: &[SpinState]) -> Operator {
    let d = basis.len();
    Operator::from_fn(d, d, |a, b| {
        basis[a].amplitudes.dotc(&(u * &basis[b].amplitudes))
    })
}

/// `|Tr(B† A)|² / d²` for code-space blocks `A` (actual) and `B` (ideal).
pub fn process_fidelity(actual: &Operator, ideal: &Operator) -> f64 {
    let d = ideal.nrows() as f64;
    (ideal.adjoint() * actual).trace().norm_sqr() / (d * d)
}

/// `‖A − e^{iφ} B‖` with `φ = arg Tr(B† A)`.
pub fn unitary_distance(actual: &Operator, ideal: &Operator) -> f64 {
    let tr = (ideal.adjoint() * actual).trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { ONE };
    super::ops::op_norm(&(actual - ideal * phase))
}

fn report(target: &str, actual: &Operator, ideal: &Operator, duration: f64) -> GateReport {
    GateReport {
        target: target.to_string(),
        fidelity: process_fidelity(actual, ideal).min(1.0),
        duration,
        unitary_distance: unitary_distance(actual, ideal),
    }
}

/// `exp(−iθσ)` for a 2×2 Pauli matrix.
pub fn pauli_rotation(axis: Axis, theta: f64) -> Operator {
    identity(2) * C64::new(theta.cos(), 0.0) - pauli(axis) * (I * theta.sin())
}

/// Recoupled exchange of one L1 pair: synchronous pulses `{I, U_z}` leave
/// `J σ·σ` intact.
fn recoupled_pair_unitary(j_pauli: f64, t: f64) -> Operator {
    let h = build_chain_hamiltonian(&[j_pauli], &[])
        .expect("two qubits")
        .matrix();
    let group = AveragingGroup::on_pair(&recoupling_group(Flavor::L1), 0, 2);
    Propagator::new(&group_average(&h, &[group])).unitary(t)
}

fn l1_basis() -> Vec<SpinState> {
    Layout::periodic(1).logical_basis()
}

/// X̄ rotation by `angle` via recoupled exchange with nominal coupling
/// `j1` and the actual coupling scaled by `1 + delta`.
pub fn xbar_gate_with_delta(
    j1: f64,
    angle: f64,
    delta: f64,
    convention: Convention,
) -> Result<GateReport> {
    if !(j1 > 0.0) {
        return Err(Error::InvalidParameter(format!("J = {j1} must be > 0")));
    }
    let j = convention.pauli_coupling(j1);
    // exp(−i(θ + π)X̄) = −exp(−iθX̄), so every angle runs in [0, π).
    let t = angle.rem_euclid(std::f64::consts::PI) * HBAR_EV_S / (2.0 * j);
    let u = recoupled_pair_unitary(j * (1.0 + delta), t);
    let actual = restrict(&u, &l1_basis());
    let ideal = pauli_rotation(Axis::X, angle);
    Ok(report("Xbar", &actual, &ideal, t))
}

pub fn xbar_gate(j1: f64, angle: f64, convention: Convention) -> Result<GateReport> {
    xbar_gate_with_delta(j1, angle, 0.0, convention)
}

/// Z̄ rotation of an L1 pair from a differential splitting `ΔE` (eV)
/// applied for `t` seconds: `+ΔE/2` on the first dot, `−ΔE/2` on the second.
pub fn zbar_gate(zeeman_difference: f64, t: f64) -> Result<GateReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be > 0")));
    }
    let h = build_chain_hamiltonian(&[0.0], &[zeeman_difference / 2.0, -zeeman_difference / 2.0])?;
    let u = Propagator::new(&h.matrix()).unitary(t);
    let theta = zeeman_difference * t / (2.0 * HBAR_EV_S);
    let actual = restrict(&u, &l1_basis());
    Ok(report("Zbar", &actual, &pauli_rotation(Axis::Z, theta), t))
}

/// State fidelity of the X̄ gate on `|0⟩_L`.
pub fn xbar_state_fidelity(j1: f64, angle: f64, delta: f64, convention: Convention) -> f64 {
    let j = convention.pauli_coupling(j1);
    let t = angle.rem_euclid(std::f64::consts::PI) * HBAR_EV_S / (2.0 * j);
    let u = recoupled_pair_unitary(j * (1.0 + delta), t);
    let basis = l1_basis();
    let out = basis[0].apply(&u);
    let ideal = pauli_rotation(Axis::X, angle);
    let target = SpinState {
        n_qubits: 2,
        amplitudes: &basis[0].amplitudes * ideal[(0, 0)] + &basis[1].amplitudes * ideal[(1, 0)],
    };
    out.fidelity(&target)
}

/// Closed form of the X̄ process fidelity: `cos²(θδ)`.
pub fn xbar_fidelity_closed_form(angle: f64, delta: f64) -> f64 {
    (angle * delta).cos().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityPoint {
    pub delta: f64,
    pub fidelity: f64,
    pub state_fidelity: f64,
    pub duration: f64,
}

/// X̄ fidelity for each relative coupling error in `deltas`, timed for the
/// nominal coupling.
pub fn fidelity_sweep(
    j1: f64,
    angle: f64,
    deltas: &[f64],
    convention: Convention,
) -> Result<Vec<FidelityPoint>> {
    if deltas.is_empty() {
        return Err(Error::EmptySweep("no coupling deviations given".into()));
    }
    deltas
        .iter()
        .map(|&delta| {
            let r = xbar_gate_with_delta(j1, angle, delta, convention)?;
            Ok(FidelityPoint {
                delta,
                fidelity: r.fidelity,
                state_fidelity: xbar_state_fidelity(j1, angle, delta, convention),
                duration: r.duration,
            })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log |x|`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.abs() > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.abs().ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn gate_reports_csv(rows: &[(String, f64, f64, f64)]) -> String {
    let mut out = String::from("gate,delta_J,fidelity,duration_ns\n");
    for (gate, delta, fidelity, duration) in rows {
        let _ = writeln!(
            out,
            "{gate},{},{},{}",
            format_sig9(*delta),
            format_sig9(*fidelity),
            format_sig9(duration * 1e9)
        );
    }
    out
}

/// Control settings for the compiled CNOT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnotParams {
    pub j1: f64,
    pub convention: Convention,
    /// Field used for Z̄ rotations, tesla.
    pub zbar_field: f64,
    /// Field used for physical Hadamards, tesla.
    pub hadamard_field: f64,
}

impl CnotParams {
    pub fn new(j1: f64) -> Self {
        CnotParams {
            j1,
            convention: Convention::Sigma,
            zbar_field: 0.02,
            hadamard_field: 0.1,
        }
    }
}

/// One piece of the compiled sequence: evolution under `hamiltonian` for
/// `duration` seconds.
#[derive(Debug, Clone)]
pub struct CnotStep {
    pub label: String,
    pub duration: f64,
    kind: StepKind,
}

#[derive(Debug, Clone, Copy)]
enum StepKind {
    /// Field term only; exchange is held off by decoupling.
    Field {
        zbar_l1: f64,
        zbar_l2: f64,
        hadamard_l2: f64,
    },
    /// L2 pair recoupled, L1 decoupled.
    RecoupleL2,
    /// Both pairs pulsed synchronously with `G^z`.
    SynchronousZ,
}

#[derive(Debug, Clone)]
pub struct CnotProgram {
    pub params: CnotParams,
    pub steps: Vec<CnotStep>,
    /// Closing Z̄ angles on L1 and L2.
    pub closing: (f64, f64),
}

impl CnotProgram {
    pub fn duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }
}

#[derive(Debug, Clone)]
pub struct CnotReport {
    pub report: GateReport,
    /// 4×4 logical unitary in the basis `|L1 L2⟩`.
    pub logical: Operator,
    pub steps: Vec<(String, f64)>,
}

const CNOT_LAYOUT_PAIRS: usize = 2;

fn field_hamiltonian(zbar_l1: f64, zbar_l2: f64, hadamard_l2: f64) -> Operator {
    let n = 2 * CNOT_LAYOUT_PAIRS;
    let half = |x: f64| C64::new(x / 2.0, 0.0);
    let mut h = Operator::zeros(1 << n, 1 << n);
    let z = pauli(Axis::Z);
    let x = pauli(Axis::X);
    if zbar_l1 != 0.0 {
        h += (embed(&z, 0, n) - embed(&z, 1, n)) * half(zbar_l1 / 2.0);
    }
    if zbar_l2 != 0.0 {
        h += (embed(&x, 2, n) - embed(&x, 3, n)) * half(zbar_l2 / 2.0);
    }
    if hadamard_l2 != 0.0 {
        let axis = (&x + &z) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        h += (embed(&axis, 2, n) + embed(&axis, 3, n)) * half(hadamard_l2);
    }
    h
}

fn step_hamiltonian(kind: StepKind, chain: &Operator, layout: &Layout) -> Operator {
    let n = layout.n_qubits();
    match kind {
        StepKind::Field {
            zbar_l1,
            zbar_l2,
            hadamard_l2,
        } => field_hamiltonian(zbar_l1, zbar_l2, hadamard_l2),
        StepKind::RecoupleL2 => group_average(
            chain,
            &[
                AveragingGroup::on_pair(&decoupling_group(Flavor::L1), 0, n),
                AveragingGroup::on_pair(&recoupling_group(Flavor::L2), 1, n),
            ],
        ),
        StepKind::SynchronousZ => group_average(
            chain,
            &[AveragingGroup::synchronous(
                &decoupling_group(Flavor::L1),
                &[0, 1],
                n,
            )],
        ),
    }
}

fn run_steps(steps: &[CnotStep], chain: &ChainHamiltonian, layout: &Layout) -> Operator {
    let hchain = chain.matrix();
    let mut u = identity(1 << layout.n_qubits());
    for s in steps {
        let h = step_hamiltonian(s.kind, &hchain, layout);
        u = Propagator::new(&h).unitary(s.duration) * u;
    }
    u
}

fn zbar_step(label: &str, theta: f64, l1: bool, field: f64) -> CnotStep {
    let de = zeeman_splitting(field);
    let theta = theta.rem_euclid(std::f64::consts::PI);
    let duration = 2.0 * HBAR_EV_S * theta / de;
    let kind = if l1 {
        StepKind::Field {
            zbar_l1: de,
            zbar_l2: 0.0,
            hadamard_l2: 0.0,
        }
    } else {
        StepKind::Field {
            zbar_l1: 0.0,
            zbar_l2: de,
            hadamard_l2: 0.0,
        }
    };
    CnotStep {
        label: label.to_string(),
        duration,
        kind,
    }
}

fn logical_hadamard_l2(p: &CnotParams) -> Vec<CnotStep> {
    let quarter = std::f64::consts::FRAC_PI_4;
    let j = p.convention.pauli_coupling(p.j1);
    vec![
        zbar_step("Zbar(L2) pi/4", quarter, false, p.zbar_field),
        CnotStep {
            label: "Xbar(L2) pi/4".into(),
            duration: quarter * HBAR_EV_S / (2.0 * j),
            kind: StepKind::RecoupleL2,
        },
        zbar_step("Zbar(L2) pi/4", quarter, false, p.zbar_field),
    ]
}

fn physical_hadamards(p: &CnotParams) -> CnotStep {
    let de = zeeman_splitting(p.hadamard_field);
    CnotStep {
        label: "H(x)H on L2 qubits".into(),
        duration: std::f64::consts::PI * HBAR_EV_S / de,
        kind: StepKind::Field {
            zbar_l1: 0.0,
            zbar_l2: 0.0,
            hadamard_l2: de,
        },
    }
}

fn nominal_chain(p: &CnotParams) -> Result<ChainHamiltonian> {
    let j = p.convention.pauli_coupling(p.j1);
    build_chain_hamiltonian(&[j; 2 * CNOT_LAYOUT_PAIRS - 1], &[])
}

/// `CNOT(L1 → L2)` as `(I ⊗ H) · CZ · (I ⊗ H)` with
/// `CZ ∝ W(π/4) · exp(−iπ/4 Z̄1) · exp(−iπ/4 Z̄2)`.
///
/// W runs with L2 mapped to the L1 encoding by physical Hadamards and both
/// pairs pulsed synchronously, leaving `J(z0z1 + z1z2 + z2z3)`, which is
/// `−2J − J Z̄1Z̄2` on the code space. The closing Z̄ angles are read off the
/// simulated W block, which must be diagonal with a CZ-type phase pattern.
pub fn compile_cnot(p: &CnotParams) -> Result<CnotProgram> {
    if !(p.j1 > 0.0 && p.zbar_field > 0.0 && p.hadamard_field > 0.0) {
        return Err(Error::InvalidParameter("J1 and fields must be > 0".into()));
    }
    let layout = Layout::periodic(CNOT_LAYOUT_PAIRS);
    let j = p.convention.pauli_coupling(p.j1);
    let w = CnotStep {
        label: "W(pi/4)".into(),
        duration: std::f64::consts::FRAC_PI_4 * HBAR_EV_S / j,
        kind: StepKind::SynchronousZ,
    };
    let core = vec![physical_hadamards(p), w, physical_hadamards(p)];
    let u = run_steps(&core, &nominal_chain(p)?, &layout);
    let block = restrict(&u, &layout.logical_basis());

    let off = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .fold(0.0f64, |m, (a, b)| m.max(block[(a, b)].norm()));
    if off > 1e-6 {
        return Err(Error::Compilation(format!(
            "W block is not diagonal (off-diagonal {off:.3e})"
        )));
    }
    let phi: Vec<f64> = (0..4).map(|k| block[(k, k)].arg()).collect();
    let pattern = (phi[0] - phi[1] - phi[2] + phi[3] - std::f64::consts::PI)
        .rem_euclid(2.0 * std::f64::consts::PI);
    let mismatch = pattern.min(2.0 * std::f64::consts::PI - pattern);
    if mismatch > 1e-6 {
        return Err(Error::Compilation(format!(
            "W phases leave a residual {mismatch:.3e} rad that local Z̄ rotations cannot cancel"
        )));
    }
    let a = (phi[0] - phi[2]) / 2.0;
    let b = (phi[0] - phi[1]) / 2.0;

    let mut steps = logical_hadamard_l2(p);
    steps.extend(core);
    steps.push(zbar_step("Zbar(L1) closing", a, true, p.zbar_field));
    steps.push(zbar_step("Zbar(L2) closing", b, false, p.zbar_field));
    steps.extend(logical_hadamard_l2(p));
    Ok(CnotProgram {
        params: *p,
        steps,
        closing: (a, b),
    })
}

/// Canonical CNOT with the first logical qubit as control.
pub fn cnot_matrix() -> Operator {
    let mut m = Operator::from_element(4, 4, ZERO);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Runs a compiled program on `chain` (nominal or perturbed couplings).
pub fn simulate_cnot(program: &CnotProgram, chain: &ChainHamiltonian) -> Result<CnotReport> {
    let layout = Layout::periodic(CNOT_LAYOUT_PAIRS);
    if chain.n_qubits() != layout.n_qubits() {
        return Err(Error::InvalidParameter(
            "CNOT runs on four physical qubits".into(),
        ));
    }
    let u = run_steps(&program.steps, chain, &layout);
    let logical = restrict(&u, &layout.logical_basis());
    Ok(CnotReport {
        report: report("CNOT", &logical, &cnot_matrix(), program.duration()),
        logical,
        steps: program
            .steps
            .iter()
            .map(|s| (s.label.clone(), s.duration))
            .collect(),
    })
}

/// Compiles and simulates the CNOT on nominal couplings.
pub fn cnot_gate(p: &CnotParams) -> Result<CnotReport> {
    let program = compile_cnot(p)?;
    simulate_cnot(&program, &nominal_chain(p)?)
}

/// CNOT fidelity with next-nearest couplings `ratio · J` added to the
/// physical chain while the program stays compiled for the nominal one.
pub fn cnot_with_next_nearest(p: &CnotParams, ratio: f64) -> Result<CnotReport> {
    let program = compile_cnot(p)?;
    let j = p.convention.pauli_coupling(p.j1);
    let chain = nominal_chain(p)?.with_next_nearest(&[j * ratio; 2 * CNOT_LAYOUT_PAIRS - 2])?;
    simulate_cnot(&program, &chain)
}
