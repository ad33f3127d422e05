//! Ideal bang-bang pulses, pulse programs and group averaging.
//!
//! `U_a = −σ^a ⊗ σ^a` and `R_a = −i I ⊗ σ^a` act on one pair. The pulses of a
//! flavor generate `{I, U, R, UR}` up to phase; averaging a Hamiltonian over
//! that group keeps only the terms the pulses cannot flip.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::encoding::{Flavor, Layout};
use super::hamiltonian::{ChainHamiltonian, Propagator};
use super::ops::{embed, identity, kron, pauli, Axis, Operator, C64, I};
use super::state::SpinState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseLabel {
    I,
    U(Axis),
    R(Axis),
}

impl PulseLabel {
    /// 4×4 pair operator.
    pub fn operator(self) -> Operator {
        match self {
            PulseLabel::I => identity(4),
            PulseLabel::U(a) => -kron(&pauli(a), &pauli(a)),
            PulseLabel::R(a) => kron(&identity(2), &pauli(a)) * (-I),
        }
    }

    pub fn allowed_for(self, flavor: Flavor) -> bool {
        match self {
            PulseLabel::I => true,
            PulseLabel::U(a) | PulseLabel::R(a) => a == flavor.axis(),
        }
    }
}

impl fmt::Display for PulseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseLabel::I => write!(f, "I"),
            PulseLabel::U(a) => write!(f, "U{}", a.label()),
            PulseLabel::R(a) => write!(f, "R{}", a.label()),
        }
    }
}

impl FromStr for PulseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axis = |c: &str| match c {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::InvalidParameter(format!("unknown pulse `{s}`"))),
        };
        match s {
            "I" => Ok(PulseLabel::I),
            _ if s.starts_with('U') && s.len() == 2 => Ok(PulseLabel::U(axis(&s[1..])?)),
            _ if s.starts_with('R') && s.len() == 2 => Ok(PulseLabel::R(axis(&s[1..])?)),
            _ => Err(Error::InvalidParameter(format!("unknown pulse `{s}`"))),
        }
    }
}

fn check_pulse(label: PulseLabel, pair: usize, layout: &Layout) -> Result<Flavor> {
    let flavor = layout.flavor(pair)?;
    if !label.allowed_for(flavor) {
        return Err(Error::InvalidPulse {
            label: label.to_string(),
            pair,
            flavor: flavor.label().to_string(),
        });
    }
    Ok(flavor)
}

/// Applies an instantaneous pulse to `pair`.
pub fn apply_pulse(
    state: &SpinState,
    label: PulseLabel,
    pair: usize,
    layout: &Layout,
) -> Result<SpinState> {
    check_pulse(label, pair, layout)?;
    if state.n_qubits != layout.n_qubits() {
        return Err(Error::InvalidParameter(format!(
            "state has {} qubits, layout {}",
            state.n_qubits,
            layout.n_qubits()
        )));
    }
    Ok(state.apply(&embed(&label.operator(), 2 * pair, layout.n_qubits())))
}

/// `{I, U, R, UR}` of a flavor as pair operators.
pub fn decoupling_group(flavor: Flavor) -> Vec<Operator> {
    let u = PulseLabel::U(flavor.axis()).operator();
    let r = PulseLabel::R(flavor.axis()).operator();
    vec![identity(4), u.clone(), r.clone(), u * r]
}

/// `{I, U}`: pulses that commute with the pair's own exchange, used while
/// the pair is recoupled.
pub fn recoupling_group(flavor: Flavor) -> Vec<Operator> {
    vec![identity(4), PulseLabel::U(flavor.axis()).operator()]
}

/// Register-wide unitaries averaged over as one group.
#[derive(Debug, Clone)]
pub struct AveragingGroup {
    pub elements: Vec<Operator>,
}

impl AveragingGroup {
    /// `group` acting on a single pair.
    pub fn on_pair(group: &[Operator], pair: usize, n_qubits: usize) -> Self {
        AveragingGroup {
            elements: group.iter().map(|g| embed(g, 2 * pair, n_qubits)).collect(),
        }
    }

    /// Every element applied to all `pairs` at once (synchronous pulsing).
    pub fn synchronous(group: &[Operator], pairs: &[usize], n_qubits: usize) -> Self {
        let elements = group
            .iter()
            .map(|g| {
                pairs.iter().fold(identity(1 << n_qubits), |acc, &p| {
                    acc * embed(g, 2 * p, n_qubits)
                })
            })
            .collect();
        AveragingGroup { elements }
    }
}

/// `H̄ = Π_groups (1/|G|) Σ_g g† H g`, applied group by group.
pub fn group_average(h: &Operator, groups: &[AveragingGroup]) -> Operator {
    let mut out = h.clone();
    for group in groups {
        let norm = C64::new(1.0 / group.elements.len() as f64, 0.0);
        let mut acc = Operator::zeros(out.nrows(), out.ncols());
        for g in &group.elements {
            acc += g.adjoint() * &out * g;
        }
        out = acc * norm;
    }
    out
}

/// Independent decoupling of every pair with its own flavor group.
pub fn layout_decoupling(layout: &Layout) -> Vec<AveragingGroup> {
    let n = layout.n_qubits();
    layout
        .flavors
        .iter()
        .enumerate()
        .map(|(p, &f)| AveragingGroup::on_pair(&decoupling_group(f), p, n))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseEvent {
    /// Offset from the start of the cycle, seconds.
    pub time: f64,
    pub pair: usize,
    pub label: PulseLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    /// Seconds.
    pub cycle_time: f64,
    /// Sorted by time; simultaneous events on different pairs keep file order.
    pub events: Vec<PulseEvent>,
}

impl PulseSchedule {
    pub fn new(cycle_time: f64, mut events: Vec<PulseEvent>) -> Result<Self> {
        if !(cycle_time > 0.0 && cycle_time.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "cycle time {cycle_time} must be > 0"
            )));
        }
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        let s = PulseSchedule { cycle_time, events };
        s.check_times()?;
        Ok(s)
    }

    fn check_times(&self) -> Result<()> {
        let slack = 1e-12 * self.cycle_time;
        let mut last: Vec<(usize, f64)> = Vec::new();
        for e in &self.events {
            if !(e.time > 0.0) || e.time > self.cycle_time + slack {
                return Err(Error::InvalidSchedule(format!(
                    "event at {:.6e} s outside (0, {:.6e}]",
                    e.time, self.cycle_time
                )));
            }
            match last.iter_mut().find(|(p, _)| *p == e.pair) {
                Some((_, t)) if e.time <= *t => {
                    return Err(Error::InvalidSchedule(format!(
                        "pair {} has events out of order at {:.6e} s",
                        e.pair, e.time
                    )))
                }
                Some((_, t)) => *t = e.time,
                None => last.push((e.pair, e.time)),
            }
        }
        Ok(())
    }

    /// Checks every label against the pair's flavor.
    pub fn validate(&self, layout: &Layout) -> Result<()> {
        self.check_times()?;
        for e in &self.events {
            check_pulse(e.label, e.pair, layout)?;
        }
        Ok(())
    }

    /// `R, R` at half and full cycle on one pair.
    pub fn two_pulse(pair: usize, flavor: Flavor, cycle_time: f64) -> Result<Self> {
        let r = PulseLabel::R(flavor.axis());
        Self::new(
            cycle_time,
            vec![
                PulseEvent {
                    time: cycle_time / 2.0,
                    pair,
                    label: r,
                },
                PulseEvent {
                    time: cycle_time,
                    pair,
                    label: r,
                },
            ],
        )
    }

    /// `R, U, R, U` at quarter cycles, visiting the whole group.
    pub fn group_cycle(pair: usize, flavor: Flavor, cycle_time: f64) -> Result<Self> {
        Self::new(cycle_time, group_events(pair, flavor, cycle_time, 0.0))
    }

    /// `R, U, R, U` on every pair, each pair cycling four times faster than
    /// the one before it.
    pub fn nested(layout: &Layout, cycle_time: f64) -> Result<Self> {
        let mut events = Vec::new();
        for (p, &f) in layout.flavors.iter().enumerate() {
            let reps = 4usize.pow(p as u32);
            let sub = cycle_time / reps as f64;
            for r in 0..reps {
                events.extend(group_events(p, f, sub, r as f64 * sub));
            }
        }
        Self::new(cycle_time, events)
    }

    /// One event per line, `t_offset_ns pair_index label`, after a
    /// `cycle_ns <value>` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "cycle_ns {}", self.cycle_time * 1e9);
        for e in &self.events {
            let _ = writeln!(out, "{} {} {}", e.time * 1e9, e.pair, e.label);
        }
        out
    }

    /// Parses the text format. `#` starts a comment; without a `cycle_ns`
    /// line the cycle ends at the last event.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cycle = None;
        let mut events = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: ln + 1,
                message: m.to_string(),
            };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f[0] == "cycle_ns" {
                let v: f64 = f
                    .get(1)
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("bad cycle_ns"))?;
                cycle = Some(v * 1e-9);
                continue;
            }
            if f.len() != 3 {
                return Err(err("expected `t_offset_ns pair_index label`"));
            }
            let t: f64 = f[0].parse().map_err(|_| err("bad time"))?;
            let pair: usize = f[1].parse().map_err(|_| err("bad pair index"))?;
            let label: PulseLabel = f[2].parse().map_err(|_| err("bad pulse label"))?;
            events.push(PulseEvent {
                time: t * 1e-9,
                pair,
                label,
            });
        }
        let cycle = match cycle {
            Some(c) => c,
            None => events
                .iter()
                .map(|e| e.time)
                .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))))
                .ok_or_else(|| Error::InvalidSchedule("no events".into()))?,
        };
        Self::new(cycle, events)
    }
}

fn group_events(pair: usize, flavor: Flavor, cycle: f64, offset: f64) -> Vec<PulseEvent> {
    let (u, r) = (PulseLabel::U(flavor.axis()), PulseLabel::R(flavor.axis()));
    [r, u, r, u]
        .iter()
        .enumerate()
        .map(|(k, &label)| PulseEvent {
            time: offset + cycle * (k + 1) as f64 / 4.0,
            pair,
            label,
        })
        .collect()
}

/// One cycle of free evolution under `h` interleaved with the pulses.
pub fn run_decoupling_cycle(
    state: &SpinState,
    h: &ChainHamiltonian,
    schedule: &PulseSchedule,
    layout: &Layout,
) -> Result<SpinState> {
    schedule.validate(layout)?;
    if h.n_qubits() != layout.n_qubits() || state.n_qubits != layout.n_qubits() {
        return Err(Error::InvalidParameter(
            "state, Hamiltonian and layout sizes differ".into(),
        ));
    }
    let prop = Propagator::new(&h.matrix());
    run_cycle_with(state, &prop, schedule, layout)
}

/// As [`run_decoupling_cycle`] with a prepared propagator.
pub fn run_cycle_with(
    state: &SpinState,
    prop: &Propagator,
    schedule: &PulseSchedule,
    layout: &Layout,
) -> Result<SpinState> {
    let n = layout.n_qubits();
    let mut psi = state.clone();
    let mut now = 0.0;
    for e in &schedule.events {
        if e.time > now {
            psi = prop.apply(&psi, e.time - now);
            now = e.time;
        }
        psi = psi.apply(&embed(&e.label.operator(), 2 * e.pair, n));
    }
    if schedule.cycle_time > now {
        psi = prop.apply(&psi, schedule.cycle_time - now);
    }
    Ok(psi)
}
