use gnrqc::lattice::{build_device, parse_lattice_text, GNRGeometry, Lattice, Sublattice};
use proptest::prelude::*;

/// Independent construction: sheet from lattice vectors, mask as explicit
/// convex quadrilaterals, O(n²) bonds, pruning by repeated full scans.
fn oracle_positions(g: &GNRGeometry) -> (Vec<[f64; 2]>, usize) {
    let b = g.bond_length;
    let h = 3f64.sqrt() / 2.0 * b;
    let offset = [
        0.0,
        h * if g.width_n.is_multiple_of(2) {
            1.5
        } else {
            1.0
        },
    ];

    // Centre-line path and per-segment widths.
    let lead = g.lead_length as f64 * 3.0 * b;
    let w = (g.width_n as f64 - 1.0) * h + 0.2;
    let mut legs = vec![([1.0, 0.0], lead, w)];
    for k in 0..g.n_dots {
        legs.push(([0.0, 1.0], g.dot_length_l as f64 * 3f64.sqrt() * b, 0.6 * w));
        let len = if k + 1 == g.n_dots {
            lead
        } else {
            g.spacing_d as f64 * 3.0 * b
        };
        legs.push(([1.0, 0.0], len, w));
    }
    let cut = [30f64.to_radians().cos(), 30f64.to_radians().sin()];
    let norm = |v: [f64; 2]| {
        let l = v[0].hypot(v[1]);
        [v[0] / l, v[1] / l]
    };
    let mut polys = Vec::new();
    let mut start = [0.0, 0.0];
    for (i, &(dir, len, width)) in legs.iter().enumerate() {
        let end = [start[0] + dir[0] * len, start[1] + dir[1] * len];
        let m0 = if i == 0 {
            cut
        } else {
            norm([legs[i - 1].0[0] + dir[0], legs[i - 1].0[1] + dir[1]])
        };
        let m1 = if i + 1 == legs.len() {
            cut
        } else {
            norm([legs[i + 1].0[0] + dir[0], legs[i + 1].0[1] + dir[1]])
        };
        let n = [-dir[1], dir[0]];
        let corner = |p: [f64; 2], m: [f64; 2], a: f64| {
            let t = -a * (n[0] * m[0] + n[1] * m[1]) / (dir[0] * m[0] + dir[1] * m[1]);
            [p[0] + a * n[0] + t * dir[0], p[1] + a * n[1] + t * dir[1]]
        };
        let half = width / 2.0;
        polys.push([
            corner(start, m0, -half),
            corner(end, m1, -half),
            corner(end, m1, half),
            corner(start, m0, half),
        ]);
        start = end;
    }
    let inside = |p: [f64; 2]| {
        polys.iter().any(|q| {
            (0..4).all(|k| {
                let (a, c) = (q[k], q[(k + 1) % 4]);
                (c[0] - a[0]) * (p[1] - a[1]) - (c[1] - a[1]) * (p[0] - a[0]) >= -1e-9
            })
        })
    };

    let reach = 400i64;
    let mut pts = Vec::new();
    for n1 in -reach..reach {
        for n2 in -reach..reach {
            let a = [
                offset[0] + 1.5 * b * (n1 + n2) as f64,
                offset[1] + h * (n1 - n2) as f64,
            ];
            for p in [a, [a[0] + b, a[1]]] {
                if inside(p) {
                    pts.push(p);
                }
            }
        }
    }
    let mut alive = vec![true; pts.len()];
    let near = |i: usize, j: usize| {
        let d = (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
        d < 1.01 * b
    };
    loop {
        let mut changed = false;
        for i in 0..pts.len() {
            if alive[i]
                && (0..pts.len())
                    .filter(|&j| j != i && alive[j] && near(i, j))
                    .count()
                    <= 1
            {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..pts.len()).filter(|&i| alive[i]).collect();
    let bonds = kept
        .iter()
        .flat_map(|&i| kept.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .filter(|&(i, j)| near(i, j))
        .count();
    let mut out: Vec<[f64; 2]> = kept.iter().map(|&i| pts[i]).collect();
    out.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    (out, bonds)
}

fn assert_matches_oracle(g: &GNRGeometry) {
    let lat = build_device(g).unwrap();
    let (pts, bonds) = oracle_positions(g);
    assert_eq!(lat.len(), pts.len(), "site count for {g:?}");
    assert_eq!(lat.bonds.len(), bonds, "bond count for {g:?}");
    for (s, p) in lat.sites.iter().zip(&pts) {
        assert!((s.position[0] - p[0]).abs() < 1e-9 && (s.position[1] - p[1]).abs() < 1e-9);
    }
}

#[test]
fn matches_brute_force_oracle_on_small_devices() {
    for g in [
        GNRGeometry::new(3, 1, 1, 1).with_lead_length(2),
        GNRGeometry::new(7, 3, 4, 1).with_lead_length(3),
        GNRGeometry::new(6, 2, 3, 2).with_lead_length(3),
        GNRGeometry::new(9, 2, 2, 2).with_lead_length(2),
    ] {
        assert_matches_oracle(&g);
    }
}

fn check_structure(lat: &Lattice) {
    let b = lat.geometry.bond_length;
    assert_eq!(lat.n_components(), 1);
    for &(i, j) in &lat.bonds {
        let (p, q) = (lat.sites[i].position, lat.sites[j].position);
        assert!(((p[0] - q[0]).hypot(p[1] - q[1]) - b).abs() < 1e-9);
        assert_ne!(lat.sites[i].sublattice, lat.sites[j].sublattice);
    }
    assert!(lat.degrees().iter().all(|&d| (2..=3).contains(&d)));
    for w in lat.sites.windows(2) {
        let (p, q) = (w[0].position, w[1].position);
        assert!(p[0] < q[0] - 1e-9 || ((p[0] - q[0]).abs() < 1e-9 && p[1] < q[1]));
    }
    let coloring = lat.bipartite_coloring().expect("honeycomb is bipartite");
    let flips = coloring
        .iter()
        .zip(&lat.sites)
        .filter(|(c, s)| **c != s.sublattice)
        .count();
    assert!(flips == 0 || flips == lat.len());
}

/// Dot `k + 1` is dot `k` shifted by one kink translation.
fn check_translation(lat: &Lattice) {
    let t = lat.geometry.kink_translation();
    let key = |p: [f64; 2]| ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64);
    for k in 0..lat.dot_masks.len().saturating_sub(1) {
        let mut a: Vec<_> = lat.dot_masks[k]
            .iter()
            .map(|&i| {
                key([
                    lat.sites[i].position[0] + t[0],
                    lat.sites[i].position[1] + t[1],
                ])
            })
            .collect();
        let mut b: Vec<_> = lat.dot_masks[k + 1]
            .iter()
            .map(|&i| key(lat.sites[i].position))
            .collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "dot {k} vs {}", k + 1);
    }
}

fn check_bounding_box(lat: &Lattice) {
    let g = &lat.geometry;
    let w = g.lead_width();
    let x_max = 2.0 * g.lead_length as f64 * g.armchair_period()
        + (g.n_dots as f64 - 1.0) * g.spacing_d as f64 * g.armchair_period();
    let y_max = g.n_dots as f64 * g.dot_length_l as f64 * g.zigzag_period();
    for s in &lat.sites {
        let [x, y] = s.position;
        assert!(x > -w && x < x_max + w, "x = {x}");
        assert!(y > -w && y < y_max + w, "y = {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn device_invariants(n in 5usize..=9, l in 2usize..=7, d in 2usize..=10, dots in 1usize..=3, lead in 2usize..=6) {
        let g = GNRGeometry::new(n, l, d, dots).with_lead_length(lead);
        let lat = build_device(&g).unwrap();
        check_structure(&lat);
        check_translation(&lat);
        check_bounding_box(&lat);
        prop_assert_eq!(&build_device(&g).unwrap().sites, &lat.sites);
        let parsed = parse_lattice_text(&lat.to_text()).unwrap();
        prop_assert_eq!(parsed.bonds, lat.bonds.clone());
        prop_assert_eq!(parsed.dot_masks, lat.dot_masks.clone());
        for (p, s) in parsed.sites.iter().zip(&lat.sites) {
            prop_assert!((p.position[0] - s.position[0]).abs() < 1e-8);
            prop_assert_eq!(p.sublattice, s.sublattice);
        }
    }
}

#[test]
fn sublattices_alternate_along_rows() {
    let lat = build_device(&GNRGeometry::new(7, 3, 4, 1)).unwrap();
    let a = lat
        .sites
        .iter()
        .filter(|s| s.sublattice == Sublattice::A)
        .count();
    assert!(a > 0 && a < lat.len());
}

#[test]
fn invalid_geometry_is_rejected() {
    assert!(build_device(&GNRGeometry::new(1, 3, 4, 1)).is_err());
    assert!(build_device(&GNRGeometry::new(7, 0, 4, 1)).is_err());
    assert!(build_device(&GNRGeometry::new(7, 3, 4, 0)).is_err());
}
