use gnrqc::spinchain::ops::{embed, heisenberg, op_norm, pauli, Axis, Operator, C64};
use gnrqc::spinchain::{
    apply_pulse, build_chain_hamiltonian, decode, encode, evolve, Flavor, Layout, Propagator,
    PulseLabel, PulseSchedule, SpinState, HBAR_EV_S,
};
use proptest::prelude::*;

/// Kronecker product by explicit index arithmetic.
fn kron_oracle(a: &Operator, b: &Operator) -> Operator {
    let (ra, ca, rb, cb) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Operator::from_fn(ra * rb, ca * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

fn identity(d: usize) -> Operator {
    Operator::identity(d, d)
}

/// `exp(−iHt/ħ)` by scaling and squaring a truncated Taylor series.
fn expm_oracle(h: &Operator, t: f64) -> Operator {
    let a = h * C64::new(0.0, -t / HBAR_EV_S);
    let norm = op_norm(&a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = a * C64::new(0.5f64.powi(s), 0.0);
    let d = h.nrows();
    let mut term = identity(d);
    let mut sum = identity(d);
    for k in 1..30 {
        term = &term * &a * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

#[test]
fn embedding_matches_kronecker_products() {
    let (x, z) = (pauli(Axis::X), pauli(Axis::Z));
    let want = kron_oracle(&kron_oracle(&identity(2), &x), &identity(4));
    assert!(op_norm(&(embed(&x, 1, 4) - want)) < 1e-15);
    let zz = kron_oracle(&kron_oracle(&z, &identity(2)), &z);
    let xx = kron_oracle(&kron_oracle(&x, &identity(2)), &x);
    let y = pauli(Axis::Y);
    let yy = kron_oracle(&kron_oracle(&y, &identity(2)), &y);
    assert!(op_norm(&(heisenberg(0, 2, 3) - (xx + yy + zz))) < 1e-15);
}

#[test]
fn two_spin_singlet_triplet() {
    let j = 1.7e-6;
    let h = build_chain_hamiltonian(&[j], &[]).unwrap();
    let mut e = Propagator::new(&h.matrix()).energies().to_vec();
    e.sort_by(f64::total_cmp);
    for (got, want) in e.iter().zip([-3.0 * j, j, j, j]) {
        assert!((got - want).abs() < 1e-12 * j);
    }
}

#[test]
fn rabi_oscillation() {
    let b = 3e-6;
    let h = build_chain_hamiltonian(&[], &[])
        .unwrap()
        .with_field(0, Axis::X, b);
    let up = SpinState::from_spins("u").unwrap();
    let down = SpinState::from_spins("d").unwrap();
    for k in 1..6 {
        let t = k as f64 * 1e-10;
        let p = evolve(&up, &h, t).unwrap().fidelity(&down);
        let want = (b * t / (2.0 * HBAR_EV_S)).sin().powi(2);
        assert!((p - want).abs() < 1e-12);
    }
}

#[test]
fn decode_l2_of_all_up() {
    let d = decode(Flavor::L2, &SpinState::from_spins("uu").unwrap()).unwrap();
    assert!((d.p0 - 0.25).abs() < 1e-12 && (d.p1 - 0.25).abs() < 1e-12);
    assert!((d.leakage - 0.5).abs() < 1e-12);
}

#[test]
fn pulses_respect_operation_sets() {
    let layout = Layout::periodic(2);
    let s = layout.encode(&[false, true]).unwrap();
    assert!(apply_pulse(&s, PulseLabel::R(Axis::Z), 0, &layout).is_ok());
    assert!(apply_pulse(&s, PulseLabel::U(Axis::X), 0, &layout).is_err());
    assert!(apply_pulse(&s, PulseLabel::U(Axis::X), 1, &layout).is_ok());
    // Code-preserving: an allowed pulse keeps the state in the code space.
    let out = apply_pulse(&s, PulseLabel::U(Axis::X), 1, &layout).unwrap();
    let p = layout.code_projector();
    assert!((out.expectation(&p).re - 1.0).abs() < 1e-12);
}

#[test]
fn schedule_text_round_trip() {
    let layout = Layout::periodic(3);
    let sched = PulseSchedule::nested(&layout, 2e-9).unwrap();
    let back = PulseSchedule::parse(&sched.to_text()).unwrap();
    assert_eq!(back.events.len(), sched.events.len());
    for (a, b) in back.events.iter().zip(&sched.events) {
        assert_eq!((a.pair, a.label), (b.pair, b.label));
        assert!((a.time - b.time).abs() < 1e-18);
    }
    assert!(PulseSchedule::parse("cycle_ns 1\n0.5 0 Q\n").is_err());
    assert!(PulseSchedule::parse("cycle_ns 1\n0.5 0 Rz\n0.5 0 Rz\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn propagator_matches_taylor_series(
        js in prop::collection::vec(0.2f64..2.0, 3),
        bz in prop::collection::vec(-1.0f64..1.0, 4),
        t in 0.05f64..2.0,
    ) {
        let scale = 1e-6;
        let js: Vec<f64> = js.iter().map(|j| j * scale).collect();
        let bz: Vec<f64> = bz.iter().map(|b| b * scale).collect();
        let h = build_chain_hamiltonian(&js, &bz).unwrap().with_field(2, Axis::X, 0.3 * scale).matrix();
        let t = t * 1e-9;
        let u = Propagator::new(&h).unitary(t);
        prop_assert!(op_norm(&(&u - expm_oracle(&h, t))) < 1e-10);
        prop_assert!(op_norm(&(u.adjoint() * &u - identity(16))) < 1e-12);
    }

    #[test]
    fn evolution_composes_and_conserves(
        js in prop::collection::vec(0.2f64..2.0, 3),
        t1 in 0.0f64..1.0,
        t2 in 0.0f64..1.0,
        bits in prop::collection::vec(any::<bool>(), 4),
    ) {
        let js: Vec<f64> = js.iter().map(|j| j * 1e-6).collect();
        let chain = build_chain_hamiltonian(&js, &[1e-7, -2e-7, 0.0, 3e-7]).unwrap();
        let (t1, t2) = (t1 * 1e-9, t2 * 1e-9);
        let psi = SpinState::basis(&bits);
        let once = evolve(&psi, &chain, t1 + t2).unwrap();
        let twice = evolve(&evolve(&psi, &chain, t1).unwrap(), &chain, t2).unwrap();
        prop_assert!((once.inner(&twice).norm() - 1.0).abs() < 1e-12);
        prop_assert!((once.norm() - 1.0).abs() < 1e-12);

        let h = chain.matrix();
        prop_assert!((once.expectation(&h).re - psi.expectation(&h).re).abs() < 1e-18);
        let mut sz = Operator::zeros(16, 16);
        for q in 0..4 {
            sz += embed(&pauli(Axis::Z), q, 4);
        }
        prop_assert!((once.expectation(&sz).re - psi.expectation(&sz).re).abs() < 1e-10);
    }
}

#[test]
fn encodings_round_trip_through_every_flavor() {
    for f in Flavor::ALL {
        for bit in [false, true] {
            let d = decode(f, &encode(f, bit)).unwrap();
            let want = if bit { d.p1 } else { d.p0 };
            assert!((want - 1.0).abs() < 1e-12);
        }
    }
}
