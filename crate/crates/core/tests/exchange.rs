use gnrqc::exchange::{
    calibrate_from_parts, exchange_integral, exchange_parts, localized_orbitals, CoulombParams,
    Orbital, COULOMB_CONSTANT_EV_A,
};
use gnrqc::lattice::{build_device, GNRGeometry, Lattice};
use gnrqc::tightbinding::analyze_device;
use gnrqc::DEFAULT_TAU_EV as TAU;
use proptest::prelude::*;

/// `Σ_i Σ_j φ1(i) φ2(i) V(i,j) φ1(j) φ2(j)` written out literally.
fn naive(phi1: &[f64], phi2: &[f64], lat: &Lattice, p: &CoulombParams) -> f64 {
    let n = phi1.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = if i == j {
                p.onsite_u
            } else {
                let (a, b) = (lat.sites[i].position, lat.sites[j].position);
                COULOMB_CONSTANT_EV_A
                    / (p.dielectric_epsilon
                        * ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt())
            };
            total += phi1[i] * phi2[i] * v * phi1[j] * phi2[j];
        }
    }
    total
}

fn device_orbitals(g: &GNRGeometry) -> (Lattice, Vec<Orbital>) {
    let dev = analyze_device(g, TAU).unwrap();
    let orb =
        localized_orbitals(&dev.lattice, &dev.spectrum, &dev.report.confined_indices).unwrap();
    (dev.lattice, orb)
}

#[test]
fn matches_naive_double_sum_on_devices() {
    let p = CoulombParams::default();
    for g in [
        GNRGeometry::new(7, 6, 8, 2),
        GNRGeometry::new(9, 3, 6, 2),
        GNRGeometry::new(7, 4, 5, 3),
    ] {
        let (lat, orb) = device_orbitals(&g);
        let last = orb.len() - 1;
        for (a, b) in [(0, 1), (0, last)] {
            let fast = exchange_integral(&orb[a], &orb[b], &lat, &p);
            let slow = naive(&orb[a].amplitudes, &orb[b].amplitudes, &lat, &p);
            assert!(
                (fast - slow).abs() <= 1e-12 * slow.abs(),
                "{fast} vs {slow}"
            );
        }
    }
}

#[test]
fn orbitals_are_orthonormal_and_ordered() {
    let (lat, orb) = device_orbitals(&GNRGeometry::new(7, 6, 8, 3));
    assert_eq!(orb.len(), 3);
    for (a, oa) in orb.iter().enumerate() {
        assert_eq!(oa.home_dot, a);
        assert!(oa.localization >= 0.5);
        for (b, ob) in orb.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((oa.overlap(ob) - want).abs() < 1e-10);
        }
    }
    // The outer dots are images of each other: equal weight on their own junction.
    let weight = |o: &Orbital, k: usize| {
        lat.dot_masks[k]
            .iter()
            .map(|&i| o.amplitudes[i].powi(2))
            .sum::<f64>()
    };
    assert!((weight(&orb[0], 0) - weight(&orb[2], 2)).abs() < 1e-3);
}

#[test]
fn screening_scales_the_long_range_part() {
    let (lat, orb) = device_orbitals(&GNRGeometry::new(7, 6, 8, 2));
    let parts = exchange_parts(&orb[0], &orb[1], &lat);
    let j = |eps| {
        exchange_integral(
            &orb[0],
            &orb[1],
            &lat,
            &CoulombParams::new(eps, 9.3).unwrap(),
        )
    };
    for eps in [1.0, 2.0, 4.5] {
        let want = 9.3 * parts.onsite + COULOMB_CONSTANT_EV_A * parts.coulomb / eps;
        assert!((j(eps) - want).abs() < 1e-12 * want.abs());
    }
    assert!(j(1.0) > j(2.0));
}

#[test]
fn calibration_hits_its_target() {
    let (lat, orb) = device_orbitals(&GNRGeometry::new(7, 6, 8, 2));
    let parts = exchange_parts(&orb[0], &orb[1], &lat);
    let target = 9.3 * parts.onsite + COULOMB_CONSTANT_EV_A * parts.coulomb / 2.0;
    let cal = calibrate_from_parts(parts, target, 9.3).unwrap();
    assert!(cal.physical && (cal.epsilon - 2.0).abs() < 1e-9);
    let p = CoulombParams {
        dielectric_epsilon: cal.epsilon,
        onsite_u: 9.3,
        ..Default::default()
    };
    assert!((parts.energy(&p) - target).abs() < 1e-12 * target);
}

#[test]
fn invalid_params_are_rejected() {
    assert!(CoulombParams::new(0.5, 9.3).is_err());
    assert!(CoulombParams::new(1.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fast_sum_is_exact_and_symmetric(
        a in prop::collection::vec(-1.0f64..1.0, 64),
        b in prop::collection::vec(-1.0f64..1.0, 64),
        eps in 1.0f64..10.0,
    ) {
        let lat = build_device(&GNRGeometry::new(5, 2, 2, 1).with_lead_length(2)).unwrap();
        let n = lat.len().min(64);
        let pad = |v: &[f64]| {
            let mut out = vec![0.0; lat.len()];
            out[..n].copy_from_slice(&v[..n]);
            Orbital { amplitudes: out, home_dot: 0, localization: 1.0 }
        };
        let (oa, ob) = (pad(&a), pad(&b));
        let p = CoulombParams::new(eps, 9.3).unwrap();
        let fast = exchange_integral(&oa, &ob, &lat, &p);
        let slow = naive(&oa.amplitudes, &ob.amplitudes, &lat, &p);
        prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1e-300));
        prop_assert!((fast - exchange_integral(&ob, &oa, &lat, &p)).abs() <= 1e-12 * fast.abs().max(1e-300));
        prop_assert!(fast >= -1e-12 * slow.abs());
    }
}
