//! Builds the extremal polyomino for any `n ≥ 8` and certifies it through
//! the topology census rather than through its own bookkeeping.
//!
//! The shape is a punctured square grown by a spiral of wall segments. The
//! band base for parameter `a` is the `(4a+3) × (4a+3)` square with every
//! (odd, odd) cell removed. The `k` extra cells of the band are laid down in
//! one fixed order around it — right side bottom-up, then top side
//! right-to-left, then left side top-down, then bottom side left-to-right.
//! Each side starts with a spacer cell and a wall corner, then repeats
//! (wall, wall, spacer) triples; every completed triple closes exactly one
//! new unit deep hole. Consuming the whole spiral produces the next band's
//! base square, so growth is monotone within a band.

use crate::formulas::{self, Decomposition};
use crate::grid::{Cell, Polyomino};
use crate::topology;

/// A certified construction: the polyomino together with the band data and
/// the deep-hole count the topology census confirmed.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    pub decomposition: Decomposition,
    /// 0 for the bare base square (k = 0), else the 1-based growth case
    /// whose k-range contains k.
    pub case: u8,
    pub polyomino: Polyomino,
    pub expected_f: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("no polyomino with a deep hole exists below n = 8 (got {0})")]
    TooSmall(u64),
    #[error("certification failed at n = {n}: {details}")]
    Certification { n: u64, details: String },
}

/// The `(4a+3) × (4a+3)` square minus its (odd, odd) cells:
/// `(4a+3)² − (2a+1)²` cells enclosing `(2a+1)²` unit deep holes.
pub fn base_square(a: u64) -> Polyomino {
    let side = 4 * a as i32 + 3;
    let mut cells = Vec::with_capacity((side * side) as usize);
    for y in 0..side {
        for x in 0..side {
            if x % 2 == 1 && y % 2 == 1 {
                continue;
            }
            cells.push(Cell::new(x, y));
        }
    }
    Polyomino::from_connected_cells(cells)
}

/// The full growth sequence for band `a`: `24a + 32` cells that turn
/// `base_square(a)` into `base_square(a + 1)`.
pub(crate) fn spiral(a: u64) -> Vec<Cell> {
    let w = 4 * a as i32 + 2; // top-right corner of the base square
    let mut seq = Vec::with_capacity(24 * a as usize + 32);
    let mut side = |start: Cell, inward: (i32, i32), along: (i32, i32), triples: i32| {
        // Spacer at `start`, wall corner one step outward, then (wall, wall,
        // spacer) triples marching `along`; `inward` points from the wall row
        // back towards the spacer row.
        let wall = Cell::new(start.x - inward.0, start.y - inward.1);
        seq.push(start);
        seq.push(wall);
        for j in 1..=triples {
            let base = Cell::new(wall.x + 2 * j * along.0, wall.y + 2 * j * along.1);
            seq.push(Cell::new(base.x - along.0, base.y - along.1));
            seq.push(base);
            seq.push(Cell::new(base.x + inward.0, base.y + inward.1));
        }
    };
    // right: spacer column x = w+1, wall column x = w+2, marching up
    side(Cell::new(w + 1, 0), (-1, 0), (0, 1), 2 * a as i32 + 1);
    // top: spacer row y = w+1, wall row y = w+2, marching left
    side(Cell::new(w + 2, w + 1), (0, -1), (-1, 0), 2 * a as i32 + 2);
    // left: spacer column x = -1, wall column x = -2, marching down
    side(Cell::new(-1, w + 2), (1, 0), (0, -1), 2 * a as i32 + 2);
    // bottom: spacer row y = -1, wall row y = -2, marching right
    side(Cell::new(-2, -1), (0, 1), (1, 0), 2 * a as i32 + 3);
    debug_assert_eq!(seq.len(), 24 * a as usize + 32);
    seq
}

fn growth_case(a: u64, k: u64) -> u8 {
    if k == 0 {
        return 0;
    }
    let ranges = [
        (1, 4),
        (5, 7),
        (8, 6 * a + 5),
        (6 * a + 6, 6 * a + 9),
        (6 * a + 10, 6 * a + 12),
        (6 * a + 13, 12 * a + 13),
        (12 * a + 14, 12 * a + 17),
        (12 * a + 18, 12 * a + 20),
        (12 * a + 21, 18 * a + 21),
        (18 * a + 22, 18 * a + 25),
        (18 * a + 26, 18 * a + 28),
        (18 * a + 29, 24 * a + 31),
    ];
    for (idx, &(lo, hi)) in ranges.iter().enumerate() {
        if lo <= hi && (lo..=hi).contains(&k) {
            return idx as u8 + 1;
        }
    }
    unreachable!("k = {k} outside band a = {a}")
}

/// Build and certify the extremal polyomino for `n`.
pub fn construct(n: u64) -> Result<ConstructionTrace, ConstructError> {
    if n < 8 {
        return Err(ConstructError::TooSmall(n));
    }
    let decomposition = formulas::decompose(n);
    let a = decomposition.a as u64;
    let k = decomposition.k;
    let expected_f = formulas::f_of(n);

    let base = base_square(a);
    let mut cells: Vec<Cell> = base.cells().to_vec();
    cells.extend(spiral(a).into_iter().take(k as usize));
    let polyomino = Polyomino::from_cells(cells).map_err(|e| ConstructError::Certification {
        n,
        details: format!("grid validation failed: {e}"),
    })?;

    let trace = ConstructionTrace {
        decomposition,
        case: growth_case(a, k),
        polyomino,
        expected_f,
    };
    certify(&trace).map_err(|details| ConstructError::Certification { n, details })?;
    Ok(trace)
}

/// Check every trace invariant against the topology census. Certification is
/// deliberately independent of how the cells were produced.
fn certify(trace: &ConstructionTrace) -> Result<(), String> {
    let n = trace.decomposition.n;
    if trace.polyomino.n() as u64 != n {
        return Err(format!("cell count {} != n {n}", trace.polyomino.n()));
    }
    let report = topology::analyze(&trace.polyomino);
    if report.h_all != report.h_deep {
        return Err(format!(
            "{} of {} holes are not deep",
            report.h_all - report.h_deep,
            report.h_all
        ));
    }
    if report.h_deep != trace.expected_f {
        return Err(format!(
            "deep holes {} != f_n {}",
            report.h_deep, trace.expected_f
        ));
    }
    if report.pick_ok != Some(true) {
        return Err("lattice-point identity failed".into());
    }
    if !report.edge_census_ok {
        return Err("edge census identity failed".into());
    }
    Ok(())
}

impl ConstructionTrace {
    /// JSON form: the polyomino cells plus `{n, a, k, case, f_n}` metadata.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.decomposition.n,
            "a": self.decomposition.a,
            "k": self.decomposition.k,
            "case": self.case,
            "f_n": self.expected_f,
            "cells": self.polyomino.cells().iter().map(|c| [c.x, c.y]).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of certifying a whole range of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeSummary {
    pub passes: u64,
    pub first_failure: Option<(u64, String)>,
}

/// Construct and certify every `n` in `from..=to`; stops at the first failure.
pub fn verify_range(from: u64, to: u64) -> Result<RangeSummary, ConstructError> {
    if from < 8 {
        return Err(ConstructError::TooSmall(from));
    }
    let mut passes = 0;
    for n in from..=to {
        match construct(n) {
            Ok(_) => passes += 1,
            Err(e) => {
                return Ok(RangeSummary {
                    passes,
                    first_failure: Some((n, e.to_string())),
                })
            }
        }
    }
    Ok(RangeSummary {
        passes,
        first_failure: None,
    })
}
