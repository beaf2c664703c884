//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS line (visible with `--nocapture`). Every threshold is exact integer
//! arithmetic except where a criterion is inherently real-valued.
//!
//! Run with:
//!   cargo test -p deephole-cli --test acceptance -- --nocapture

use std::process::Command;

use deephole::constructor;
use deephole::formulas::{self, ExactResult};
use deephole::oracle;
use deephole::topology;

fn pass(id: u32, what: &str) {
    println!("acceptance criterion {id} ({what}): PASS");
}

/// h_n by exhaustive search: 0 for n ≤ 7, 1 for 8..=12, 2 for 13 and 14.
#[test]
fn criterion_1_small_n_exact_table() {
    let expected: &[(u32, u32)] = &[
        (1, 0),
        (2, 0),
        (3, 0),
        (4, 0),
        (5, 0),
        (6, 0),
        (7, 0),
        (8, 1),
        (9, 1),
        (10, 1),
        (11, 1),
        (12, 1),
        (13, 2),
        (14, 2),
    ];
    for &(n, h) in expected {
        let result = oracle::max_deep_holes(n, 4).unwrap();
        assert_eq!(result.h_max, h, "h_{n}");
        // The exhaustive truth always sits inside the certified verdict.
        let verdict = formulas::exact_h(n as u64);
        assert!(
            (verdict.lo()..=verdict.hi()).contains(&(result.h_max as u64)),
            "oracle escapes {verdict} at n={n}"
        );
    }
    pass(1, "small-n exact table by exhaustive oracle");
}

/// Enumeration counts for n = 1..9 match the independent naive enumerator.
#[test]
fn criterion_2_enumeration_counts() {
    let naive = oracle::naive_fixed_counts(9);
    assert_eq!(
        naive,
        [1, 2, 6, 19, 63, 216, 760, 2725, 9910],
        "naive reference enumerator"
    );
    for (i, &target) in naive.iter().enumerate() {
        let n = i as u32 + 1;
        let count = oracle::enumerate_fixed(n, |_| {}).unwrap();
        assert_eq!(count, target, "fixed count at n={n}");
    }
    pass(2, "enumeration counts vs naive enumerator, n = 1..9");
}

/// Every constructed shape for 8 ≤ n ≤ 2000 certifies: n cells, all holes
/// deep, deep count = f_n, lattice-point and edge identities exact.
#[test]
fn criterion_3_construction_certification() {
    let summary = constructor::verify_range(8, 2000).unwrap();
    assert_eq!(summary.first_failure, None, "certification failure");
    assert_eq!(summary.passes, 1993);
    pass(3, "construction certification 8..=2000");
}

/// Wherever the exact-value theorem applies (a ≤ 200), the construction
/// meets the refined integer upper bound.
#[test]
fn criterion_4_exact_value_theorem() {
    let mut covered = 0u64;
    for a in 0..=200u64 {
        let base = 12 * a * a + 20 * a + 8;
        for k in 0..=24 * a + 31 {
            let n = base + k;
            if !formulas::covered_by_theorem(n) {
                continue;
            }
            covered += 1;
            assert_eq!(
                formulas::f_of(n),
                formulas::upper_refined(n),
                "theorem-covered n={n} (a={a}, k={k}) is not exact"
            );
            assert!(formulas::exact_h(n).is_exact());
        }
    }
    assert_eq!(covered, 371_733, "theorem coverage at a <= 200");
    pass(4, "exact-value theorem: covered (a,k) meet the bound, a <= 200");
}

/// Named closed-form instances.
#[test]
fn criterion_5_named_instances() {
    for a in 0..=1000u64 {
        let n1 = 12 * a * a + 20 * a + 8;
        assert_eq!(formulas::f_of(n1), (2 * a + 1) * (2 * a + 1), "a={a}");
        let n2 = 12 * a * a + 32 * a + 21;
        assert_eq!(formulas::f_of(n2), (2 * a + 2) * (2 * a + 2), "a={a}");
    }
    assert_eq!(formulas::exact_h(44), ExactResult::Range { lo: 9, hi: 10 });
    assert_eq!(formulas::exact_h(56), ExactResult::Exact(13));
    pass(5, "named instances: corollaries to a = 1000, n = 44, n = 56");
}

/// Inequality suite on every all-deep shape with n ≤ 10 and on every
/// constructed extremal shape with n ≤ 2000, plus the (n-3)/5 baseline.
#[test]
fn criterion_6_inequality_suite() {
    let mut all_deep = 0u64;
    for n in 1..=10u32 {
        oracle::enumerate_fixed(n, |p| {
            let r = topology::analyze(p);
            assert!(r.edge_census_ok, "{}", p.to_ascii());
            if r.h_all != r.h_deep {
                return;
            }
            all_deep += 1;
            assert_eq!(r.pick_ok, Some(true), "{}", p.to_ascii());
            for check in topology::verify_inequalities(&r).unwrap() {
                assert!(check.holds, "{} fails on {}", check.name, p.to_ascii());
            }
        })
        .unwrap();
    }
    assert_eq!(all_deep, 48_416, "all-deep shapes with n <= 10");

    for n in 8..=2000u64 {
        let trace = constructor::construct(n).unwrap();
        let r = topology::analyze(&trace.polyomino);
        for check in topology::verify_inequalities(&r).unwrap() {
            assert!(check.holds, "{} fails on the extremal shape at n={n}", check.name);
        }
        assert!(
            formulas::f_of(n) >= (n - 3) / 5,
            "five-cell baseline fails at n={n}"
        );
    }
    pass(6, "inequalities on all-deep shapes (n <= 10) and constructions (n <= 2000)");
}

/// Minimum outer perimeter equals 2*ceil(2*sqrt(n)) for n = 1..10.
#[test]
fn criterion_7_minimal_perimeter() {
    let ceil_two_sqrt = |n: u64| {
        let t = (4 * n).isqrt();
        if t * t < 4 * n {
            t + 1
        } else {
            t
        }
    };
    for n in 1..=10u32 {
        let min = oracle::min_outer_perimeter(n).unwrap();
        assert_eq!(min, 2 * ceil_two_sqrt(n as u64), "n={n}");
    }
    pass(7, "minimal outer perimeter 2*ceil(2*sqrt(n)), n = 1..10");
}

/// Finite-n sandwich: closed lower bound ≤ f_n ≤ refined upper bound for
/// all 8 ≤ n ≤ 10^6 (floors by integer predicate), and f_n/n within
/// [1/3 - 0.02, 1/3] from 10^5 on.
#[test]
fn criterion_8_asymptotic_sandwich() {
    let mut prev_f = 0;
    let mut prev_u = 0;
    for n in 8..=1_000_000u64 {
        let f = formulas::f_of(n);
        let u = formulas::upper_refined(n);
        // f >= n/3 - (16/9)sqrt(3n+1) + 65/9, squared exactly:
        // 16*sqrt(3n+1) >= 3n + 65 - 9f.
        let rest = 3 * n as i64 + 65 - 9 * f as i64;
        assert!(
            rest <= 0 || 256 * (3 * n as i64 + 1) >= rest * rest,
            "closed lower bound fails at n={n}"
        );
        assert!(f <= u, "refined upper bound fails at n={n}");
        assert!(f >= prev_f && u >= prev_u, "monotonicity fails at n={n}");
        if n >= 100_000 {
            let ratio = f as f64 / n as f64;
            assert!(
                (1.0 / 3.0 - 0.02..=1.0 / 3.0).contains(&ratio),
                "ratio window fails at n={n}: {ratio}"
            );
        }
        prev_f = f;
        prev_u = u;
    }
    pass(8, "sandwich bounds to 10^6 with exact floor predicates");
}

/// cmd_search determinism: jobs 1, 2 and 8 give identical h_max, shape
/// count and witness.
#[test]
fn criterion_9_search_determinism() {
    let outputs: Vec<serde_json::Value> = [1usize, 2, 8]
        .iter()
        .map(|jobs| {
            let out = Command::new(env!("CARGO_BIN_EXE_deephole"))
                .args(["search", "--n", "12", "--jobs", &jobs.to_string()])
                .output()
                .expect("search run");
            assert!(out.status.success(), "jobs={jobs}: {out:?}");
            let stdout = String::from_utf8(out.stdout).unwrap();
            let first_line = stdout.lines().next().unwrap();
            serde_json::from_str(first_line).unwrap()
        })
        .collect();
    for field in ["h_max", "shapes_enumerated", "witness_cells"] {
        assert_eq!(outputs[0][field], outputs[1][field], "{field} jobs 1 vs 2");
        assert_eq!(outputs[0][field], outputs[2][field], "{field} jobs 1 vs 8");
    }
    assert_eq!(outputs[0]["h_max"], serde_json::json!(1));
    assert_eq!(outputs[0]["shapes_enumerated"], serde_json::json!(505861));
    pass(9, "search determinism across jobs = 1, 2, 8 at n = 12");
}
