//! Randomized invariants over the full analysis pipeline: format round
//! trips, symmetry invariance, and the two census identities on thousands
//! of grown shapes.

use proptest::prelude::*;

use deephole::formulas;
use deephole::grid::{Polyomino, Transform};
use deephole::topology;

/// Deterministic fuzz corpus: every identity below must hold on each shape.
fn fuzz_shapes() -> impl Iterator<Item = Polyomino> {
    (0..10_000u64).map(|seed| {
        let n = 1 + (seed % 64) as usize;
        Polyomino::random(n, seed)
    })
}

#[test]
fn edge_census_identity_on_ten_thousand_shapes() {
    for p in fuzz_shapes() {
        let (s_o, s_i, c) = topology::edge_census(&p);
        assert_eq!(
            4 * p.n() as u64,
            s_o + s_i + 2 * c,
            "edge identity fails on {}",
            p.to_ascii()
        );
    }
}

#[test]
fn lattice_point_identity_on_all_deep_fuzz_shapes() {
    let mut all_deep_seen = 0;
    for p in fuzz_shapes() {
        let r = topology::analyze(&p);
        assert!(r.edge_census_ok);
        assert_eq!(r.b_tilde, r.s_o);
        if r.h_all == r.h_deep {
            assert_eq!(
                r.pick_ok,
                Some(true),
                "lattice-point identity fails on {}",
                p.to_ascii()
            );
            assert_eq!(r.b, r.s_o + r.s_i);
            for check in topology::verify_inequalities(&r).unwrap() {
                assert!(check.holds, "{} fails on {}", check.name, p.to_ascii());
            }
            if r.h_all > 0 {
                all_deep_seen += 1;
            }
        } else {
            assert_eq!(r.pick_ok, None);
        }
        for hole in &r.holes {
            assert!(hole.vertex_set.len() >= 4);
            assert!(!hole.cells.is_empty());
        }
    }
    assert!(
        all_deep_seen > 10,
        "fuzz corpus should contain shapes with deep holes (saw {all_deep_seen})"
    );
}

#[test]
fn sandwich_ratio_from_growth_rate() {
    // |f_n/n - 1/3| stays within the closed-form envelope.
    for n in (8..=1_000_000u64).step_by(997) {
        let f = formulas::f_of(n) as f64;
        let envelope =
            (16.0 / 9.0) * ((3 * n + 1) as f64).sqrt() / n as f64 + 65.0 / (9.0 * n as f64);
        assert!(
            (f / n as f64 - 1.0 / 3.0).abs() <= envelope + 1e-12,
            "n={n}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ascii_and_json_round_trip(n in 1usize..48, seed in any::<u64>()) {
        let p = Polyomino::random(n, seed);
        prop_assert_eq!(&Polyomino::parse_ascii(&p.to_ascii()).unwrap(), &p);
        prop_assert_eq!(&Polyomino::from_json(&p.to_json()).unwrap(), &p);
        prop_assert_eq!(&Polyomino::from_cells(p.cells().iter().copied()).unwrap(), &p);
        // Normalization pinned to the origin.
        prop_assert!(p.cells().iter().any(|c| c.x == 0));
        prop_assert!(p.cells().iter().any(|c| c.y == 0));
    }

    #[test]
    fn canonical_form_is_orbit_invariant(n in 1usize..32, seed in any::<u64>()) {
        let p = Polyomino::random(n, seed);
        let canon = p.canonical_form();
        prop_assert_eq!(&canon.canonical_form(), &canon);
        for t in Transform::ALL {
            prop_assert_eq!(&p.transformed(t).canonical_form(), &canon);
        }
    }

    #[test]
    fn deep_hole_count_is_symmetry_invariant(n in 8usize..40, seed in any::<u64>()) {
        let p = Polyomino::random(n, seed);
        let reference = topology::analyze(&p);
        for t in Transform::ALL {
            let r = topology::analyze(&p.transformed(t));
            prop_assert_eq!(r.h_deep, reference.h_deep);
            prop_assert_eq!(r.h_all, reference.h_all);
            prop_assert_eq!(r.b, reference.b);
            prop_assert_eq!(r.i, reference.i);
        }
    }
}
