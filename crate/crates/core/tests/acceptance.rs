//! The ten acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL` line with the measured values before asserting.

use gnrqc::exchange::{
    calibrate_epsilon, coupling_parts, exchange_integral, localized_orbitals, CoulombParams,
    SweepSettings, COULOMB_CONSTANT_EV_A, PAPER_J1_EV,
};
use gnrqc::experiment::{run, write_outputs, Command, ExperimentConfig};
use gnrqc::lattice::{build_device, GNRGeometry};
use gnrqc::spinchain::ops::{heisenberg, op_norm, Operator, C64};
use gnrqc::spinchain::{
    build_chain_hamiltonian, cnot_gate, encode, fidelity_sweep, fit_power_law,
    run_decoupling_cycle, xbar_state_fidelity, zbar_pi_time, CnotParams, Convention, Flavor,
    Layout, Propagator, PulseSchedule, SpinState, XbarTiming, HBAR_EV_S,
};
use gnrqc::tightbinding::{analyze_device, assemble, solve_dense};
use gnrqc::DEFAULT_TAU_EV as TAU;

fn verdict(k: usize, ok: bool, detail: &str) {
    println!(
        "criterion {k}: {} | {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {k} failed: {detail}");
}

#[test]
fn criterion_01_electron_hole_symmetry() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 5..=9 {
        for l in 3..=7 {
            for dots in [1, 2] {
                let lat = build_device(&GNRGeometry::new(n, l, 6, dots)).unwrap();
                let mut e = solve_dense(&assemble(&lat, TAU).unwrap()).eigenvalues;
                e.sort_by(f64::total_cmp);
                let m = e.len();
                worst = (0..m / 2)
                    .map(|k| (e[k] + e[m - 1 - k]).abs())
                    .fold(worst, f64::max);
                count += 1;
            }
        }
    }
    verdict(
        1,
        worst < 1e-9 * TAU,
        &format!("{count} devices, max |E_k + E_-k| = {worst:.2e} eV"),
    );
}

#[test]
fn criterion_02_confinement_classification() {
    let mut class_ok = true;
    let mut band_ok = true;
    let mut notes = Vec::new();
    for n in 5..=9 {
        for l in 3..=7 {
            let r = analyze_device(&GNRGeometry::new(n, l, 1, 1), TAU)
                .unwrap()
                .report;
            let must = n == 7 || (n == 9 && l <= 4);
            let never = matches!(n, 5 | 6 | 8);
            if (must && !r.confined) || (never && r.confined) {
                class_ok = false;
                notes.push(format!("N={n} L={l} confined={}", r.confined));
            }
            if must && r.confined {
                let (e0, gap) = (r.e0.unwrap(), r.gap.unwrap());
                let inside = |x: f64| (0.05..=0.2).contains(&x);
                if !(inside(e0) && inside(gap)) {
                    band_ok = false;
                    notes.push(format!("N={n} L={l} E0={e0:.3} gap={gap:.3}"));
                }
            }
        }
    }
    verdict(
        2,
        class_ok && band_ok,
        &format!(
            "classification {}, E0/gap in [0.05,0.2] eV {}; {}",
            ok(class_ok),
            ok(band_ok),
            notes.join(", ")
        ),
    );
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

#[test]
fn criterion_03_exchange_coupling() {
    let settings = SweepSettings::default();
    let (n, l) = (7, 6);
    let cal = calibrate_epsilon(n, l, 18, PAPER_J1_EV, 9.3, &settings).unwrap();
    let exact = {
        let p = CoulombParams {
            dielectric_epsilon: cal.epsilon,
            onsite_u: 9.3,
            ..Default::default()
        };
        (cal.parts.energy(&p) - PAPER_J1_EV).abs() <= 1e-9 * PAPER_J1_EV
    };
    // An unphysical ε (< 1) is reported but never used for the table.
    let eps = if cal.physical { cal.epsilon } else { 1.0 };
    let params = CoulombParams::new(eps, 9.3).unwrap();
    let ds: Vec<usize> = (8..=20).step_by(2).collect();
    let mut j1 = Vec::new();
    let mut ratio18 = 0.0;
    for &d in &ds {
        let (p1, p2) = coupling_parts(n, l, d, &settings).unwrap();
        j1.push(p1.energy(&params));
        if d == 18 {
            ratio18 = p1.energy(&params) / p2.energy(&params);
        }
    }
    let decreasing = j1.windows(2).all(|w| w[1] < w[0]);
    let j18 = j1[ds.iter().position(|&d| d == 18).unwrap()];
    let in_band = (0.8e-6..=80e-6).contains(&j18);
    let detail = format!(
        "decreasing {}, J1(18) = {:.3e} eV at epsilon {eps} (band [0.8, 80] ueV {}), J1/J2 = {ratio18:.2e} ({}), \
         calibrated epsilon = {:.4e} (physical: {}, exact: {})",
        ok(decreasing),
        j18,
        ok(in_band),
        ok(ratio18 >= 1e3),
        cal.epsilon,
        cal.physical,
        exact
    );
    verdict(3, decreasing && in_band && ratio18 >= 1e3 && exact, &detail);
}

#[test]
fn criterion_04_exchange_oracle() {
    let p = CoulombParams::default();
    let mut worst: f64 = 0.0;
    for g in [
        GNRGeometry::new(7, 6, 8, 2),
        GNRGeometry::new(7, 6, 12, 3),
        GNRGeometry::new(9, 3, 8, 2),
    ] {
        let dev = analyze_device(&g, TAU).unwrap();
        let orb =
            localized_orbitals(&dev.lattice, &dev.spectrum, &dev.report.confined_indices).unwrap();
        let pos: Vec<[f64; 2]> = dev.lattice.sites.iter().map(|s| s.position).collect();
        for b in 1..orb.len() {
            let (f1, f2) = (&orb[0].amplitudes, &orb[b].amplitudes);
            let mut slow = 0.0;
            for i in 0..pos.len() {
                for j in 0..pos.len() {
                    let v = if i == j {
                        p.onsite_u
                    } else {
                        COULOMB_CONSTANT_EV_A / (pos[i][0] - pos[j][0]).hypot(pos[i][1] - pos[j][1])
                    };
                    slow += f1[i] * f2[i] * v * f1[j] * f2[j];
                }
            }
            let fast = exchange_integral(&orb[0], &orb[b], &dev.lattice, &p);
            worst = worst.max((fast - slow).abs() / slow.abs());
        }
    }
    verdict(
        4,
        worst <= 1e-12,
        &format!("max relative deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_05_two_spin_analytics() {
    let j = 2e-6;
    let h = build_chain_hamiltonian(&[j], &[]).unwrap();
    let mut e = Propagator::new(&h.matrix()).energies().to_vec();
    e.sort_by(f64::total_cmp);
    let want = [-3.0 * j, j, j, j];
    let worst = e
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs() / j)
        .fold(0.0, f64::max);
    let matrix_ok = op_norm(&(h.matrix() - heisenberg(0, 1, 2) * C64::new(j, 0.0))) < 1e-12 * j;
    verdict(
        5,
        worst < 1e-12 && matrix_ok,
        &format!(
            "eigenvalues / J = {:?}, max error {worst:.1e}",
            e.iter().map(|x| x / j).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_06_logical_gates() {
    let f = xbar_state_fidelity(
        PAPER_J1_EV,
        std::f64::consts::FRAC_PI_2,
        0.0,
        Convention::Sigma,
    );
    let cnot = cnot_gate(&CnotParams::new(PAPER_J1_EV)).unwrap();
    let truth: Vec<usize> = (0..4)
        .map(|c| {
            (0..4)
                .max_by(|&a, &b| {
                    cnot.logical[(a, c)]
                        .norm()
                        .total_cmp(&cnot.logical[(b, c)].norm())
                })
                .unwrap()
        })
        .collect();
    let ok_x = f >= 1.0 - 1e-9;
    let ok_c = cnot.report.unitary_distance < 1e-9 && truth == [0, 1, 3, 2];
    verdict(
        6,
        ok_x && ok_c,
        &format!(
            "X flip fidelity 1 - {:.1e}, CNOT distance {:.2e}, truth table {truth:?}",
            1.0 - f,
            cnot.report.unitary_distance
        ),
    );
}

fn plus(flavor: Flavor) -> SpinState {
    let (a, b) = (encode(flavor, false), encode(flavor, true));
    SpinState::from_amplitudes((a.amplitudes + b.amplitudes) * C64::new(0.5f64.sqrt(), 0.0))
        .unwrap()
}

#[test]
fn criterion_07_decoupling_order() {
    let j = 2e-6;
    let wts = [0.02, 0.01, 0.005];

    // Intra: L1 under its own exchange plus a differential field, R_z R_z cycle.
    let one = Layout::periodic(1);
    let h1 = build_chain_hamiltonian(&[j], &[0.25 * j, -0.25 * j]).unwrap();
    let zero = encode(Flavor::L1, false);
    let intra: Vec<f64> = wts
        .iter()
        .map(|wt| {
            let s = PulseSchedule::two_pulse(0, Flavor::L1, wt * HBAR_EV_S / j).unwrap();
            let out = run_decoupling_cycle(&zero, &h1, &s, &one).unwrap();
            (1.0 - out.fidelity(&zero)).max(0.0).sqrt()
        })
        .collect();

    // Inter: L1-L2 chain with the boundary bond, nested cycles; leakage out of the code.
    let two = Layout::periodic(2);
    let h2 = build_chain_hamiltonian(&[j, j, j], &[]).unwrap();
    let psi = plus(Flavor::L1).tensor(&plus(Flavor::L2));
    let p = two.code_projector();
    let inter: Vec<f64> = wts
        .iter()
        .map(|wt| {
            let s = PulseSchedule::nested(&two, wt * HBAR_EV_S / j).unwrap();
            let out = run_decoupling_cycle(&psi, &h2, &s, &two).unwrap();
            (1.0 - out.expectation(&p).re).max(0.0).sqrt()
        })
        .collect();

    let ratios = |v: &[f64]| v.windows(2).map(|w| w[0] / w[1]).collect::<Vec<_>>();
    let (ri, rx) = (ratios(&intra), ratios(&inter));
    let good = ri
        .iter()
        .chain(&rx)
        .all(|&r| (4.0 / 1.5..=4.0 * 1.5).contains(&r));
    verdict(
        7,
        good,
        &format!(
            "intra {} ratios {ri:.3?}; inter {} ratios {rx:.3?}",
            sci(&intra),
            sci(&inter)
        ),
    );
}

fn sci(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.4e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Brute-force X̄ fidelity: the 4×4 `J(1+δ) σ·σ` written out by hand,
/// exponentiated by Taylor series, restricted to `|↑↓⟩, |↓↑⟩`.
fn xbar_oracle(j1: f64, angle: f64, delta: f64) -> f64 {
    let j = j1 / 4.0;
    let t = angle * HBAR_EV_S / (2.0 * j);
    let c = |x: f64| C64::new(x, 0.0);
    #[rustfmt::skip]
    let ss = Operator::from_row_slice(4, 4, &[
        c(1.0), c(0.0), c(0.0), c(0.0),
        c(0.0), c(-1.0), c(2.0), c(0.0),
        c(0.0), c(2.0), c(-1.0), c(0.0),
        c(0.0), c(0.0), c(0.0), c(1.0),
    ]);
    // −iHt/ħ has norm 3θ(1+δ)/2 < 3; 2^6 squarings keep the series short.
    let a = ss * C64::new(0.0, -j * (1.0 + delta) * t / HBAR_EV_S / 64.0);
    let mut term = Operator::identity(4, 4);
    let mut u = Operator::identity(4, 4);
    for k in 1..25 {
        term = &term * &a * c(1.0 / k as f64);
        u += &term;
    }
    for _ in 0..6 {
        u = &u * &u;
    }
    let block = Operator::from_fn(2, 2, |r, col| u[([1, 2][r], [1, 2][col])]);
    let (cs, sn) = (angle.cos(), angle.sin());
    let ideal = Operator::from_row_slice(
        2,
        2,
        &[c(cs), C64::new(0.0, -sn), C64::new(0.0, -sn), c(cs)],
    );
    (ideal.adjoint() * block).trace().norm_sqr() / 4.0
}

#[test]
fn criterion_08_fidelity_curve() {
    let angle = std::f64::consts::FRAC_PI_2;
    let deltas: Vec<f64> = (-5..=5).map(|k| k as f64 * 0.02).collect();
    let pts = fidelity_sweep(PAPER_J1_EV, angle, &deltas, Convention::Sigma).unwrap();
    let f0 = pts.iter().find(|p| p.delta == 0.0).unwrap().fidelity;
    let worst = pts
        .iter()
        .map(|p| (p.fidelity - xbar_oracle(PAPER_J1_EV, angle, p.delta)).abs())
        .fold(0.0, f64::max);
    let xs: Vec<f64> = pts.iter().map(|p| p.delta).collect();
    let ys: Vec<f64> = pts.iter().map(|p| 1.0 - p.fidelity).collect();
    let power = fit_power_law(&xs, &ys).unwrap();
    let good = (f0 - 1.0).abs() < 1e-12 && (power - 2.0).abs() <= 0.1 && worst < 1e-9;
    verdict(
        8,
        good,
        &format!("F(0) = {f0:.15}, exponent {power:.4}, max oracle deviation {worst:.1e}"),
    );
}

#[test]
fn criterion_09_timing_reports() {
    let out = run(Command::Gates, &ExperimentConfig::default()).unwrap();
    let rep = out.file("timing.txt").unwrap();
    print!("{rep}");
    let timing = XbarTiming::new(PAPER_J1_EV);
    let tz = zbar_pi_time(0.02);
    let printed = rep.contains("xbar_flip_ns_sigma_convention")
        && rep.contains("xbar_flip_ns_spin_convention");
    let good = printed && timing.brackets(0.2e-9) && (tz - 0.9e-9).abs() <= 0.2 * 0.9e-9;
    verdict(
        9,
        good,
        &format!(
            "X flip {:.4} ns / {:.4} ns brackets 0.2 ns: {}; Z pi time {:.4} ns",
            timing.sigma_convention * 1e9,
            timing.spin_convention * 1e9,
            timing.brackets(0.2e-9),
            tz * 1e9
        ),
    );
}

#[test]
fn criterion_10_reproducibility() {
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (cmd, set) in [
        (Command::Spectrum, vec![]),
        (Command::Gates, vec![("delta_samples", "6"), ("seed", "42")]),
        (Command::Couplings, vec![("d_values", "8,10,12")]),
        (Command::Ldos, vec![]),
    ] {
        let dirs: Vec<_> = [1usize, 4]
            .iter()
            .map(|&w| {
                let mut c = ExperimentConfig::default();
                for (k, v) in &set {
                    c.set(k, v).unwrap();
                }
                c.workers = w;
                let dir = tempfile::tempdir().unwrap();
                let out = run(cmd, &c).unwrap();
                write_outputs(dir.path(), &c, &out).unwrap();
                dir
            })
            .collect();
        for entry in std::fs::read_dir(dirs[0].path()).unwrap() {
            let name = entry.unwrap().file_name();
            let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&name)).unwrap();
            files += 1;
            if a != b {
                mismatches.push(format!("{}/{}", cmd.name(), name.to_string_lossy()));
            }
        }
    }
    verdict(
        10,
        mismatches.is_empty(),
        &format!("{files} files compared serial vs 4 workers, mismatches {mismatches:?}"),
    );
}
