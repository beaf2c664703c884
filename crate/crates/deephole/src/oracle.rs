//! Exhaustive ground truth: enumerate all fixed n-ominoes, find the maximum
//! deep-hole count with a witness, and validate the closed-form results at
//! small n.
//!
//! Enumeration is the classic untried-set growth over the half-plane
//! `y > 0 ∨ x ≥ n−1`, anchored so every fixed (translation-distinct)
//! n-omino is produced exactly once. Completed shapes stay on a fixed-width
//! bitboard; hole analysis runs on the same board without allocating. An
//! Euler-characteristic popcount pass rejects the (vast majority of)
//! hole-free shapes before any flood fill runs.
//!
//! Parallel searches split the enumeration tree at a fixed depth into
//! independent prefix subtrees. Results merge by maximum with the
//! lexicographically least witness as the tie-break, so the outcome is
//! identical for any job count or scheduling order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering as MemOrder};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::formulas::{self, ExactResult};
use crate::grid::{Cell, Polyomino};
use crate::topology;

/// Largest `n` the oracle accepts by default (~1.05e8 shapes at 16).
pub const DEFAULT_LIMIT: u32 = 16;

const MAX_N: usize = 16;
const WROWS: usize = MAX_N + 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("n = {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: u32, limit: u32 },
    #[error("cache record for n = {n} disagrees with the computed result (h_max {existing} vs {computed})")]
    CacheConflict { n: u32, existing: u32, computed: u32 },
    #[error("cache i/o error: {0}")]
    Io(String),
}

/// Tuning knobs for a search run. Defaults match the documented contract:
/// one job, tree split at depth 4, no analysis pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchParams {
    pub jobs: usize,
    /// Depth at which the enumeration tree is cut into worker tasks.
    pub split_depth: usize,
    pub limit: u32,
    /// Skip the flood-fill analysis of completed shapes whose total hole
    /// count already falls short of the running maximum. Never changes the
    /// result or the shape count; off by default.
    pub analysis_prune: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            jobs: 1,
            split_depth: 4,
            limit: DEFAULT_LIMIT,
            analysis_prune: false,
        }
    }
}

/// Outcome of an exhaustive deep-hole search at one `n`.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub n: u32,
    pub h_max: u32,
    pub witness: Polyomino,
    pub shapes_enumerated: u64,
    pub elapsed: Duration,
    pub method: SearchParams,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "h_max": self.h_max,
            "witness_cells": self.witness.cells().iter().map(|c| [c.x, c.y]).collect::<Vec<_>>(),
            "shapes_enumerated": self.shapes_enumerated,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "method": {
                "jobs": self.method.jobs,
                "split_depth": self.method.split_depth,
                "analysis_prune": self.method.analysis_prune,
            },
        })
    }
}

// ---------------------------------------------------------------------------
// The enumeration engine.

#[derive(Clone)]
struct Task {
    rows: [u32; MAX_N],
    reached: [u32; MAX_N],
    untried: Vec<(u8, u8)>,
    min_x: i32,
    max_x: i32,
    max_y: i32,
}

struct Enumerator<F: FnMut(&[u32; MAX_N], i32, i32, i32)> {
    n: usize,
    width: i32,
    anchor_x: i32,
    rows: [u32; MAX_N],
    reached: [u32; MAX_N],
    arena: Vec<(u8, u8)>,
    min_x: i32,
    max_x: i32,
    max_y: i32,
    count: u64,
    split_depth: Option<usize>,
    tasks: Vec<Task>,
    visit: F,
}

impl<F: FnMut(&[u32; MAX_N], i32, i32, i32)> Enumerator<F> {
    fn new(n: usize, visit: F) -> Self {
        let anchor_x = n as i32 - 1;
        let mut e = Enumerator {
            n,
            width: 2 * n as i32 - 1,
            anchor_x,
            rows: [0; MAX_N],
            reached: [0; MAX_N],
            arena: vec![(anchor_x as u8, 0)],
            min_x: i32::MAX,
            max_x: i32::MIN,
            max_y: i32::MIN,
            count: 0,
            split_depth: None,
            tasks: Vec::new(),
            visit,
        };
        e.reached[0] |= 1 << anchor_x;
        e
    }

    fn from_task(n: usize, task: &Task, visit: F) -> Self {
        Enumerator {
            n,
            width: 2 * n as i32 - 1,
            anchor_x: n as i32 - 1,
            rows: task.rows,
            reached: task.reached,
            arena: task.untried.clone(),
            min_x: task.min_x,
            max_x: task.max_x,
            max_y: task.max_y,
            count: 0,
            split_depth: None,
            tasks: Vec::new(),
            visit,
        }
    }

    fn run(&mut self) {
        let end = self.arena.len();
        let depth = self.rows.iter().map(|r| r.count_ones() as usize).sum();
        self.descend(0, end, depth);
    }

    /// Try, in turn, each untried cell in `arena[start..end]` as the next
    /// shape cell. A cell popped here stays excluded from every later
    /// sibling's subtree, which is what makes each shape appear once.
    fn descend(&mut self, start: usize, end: usize, depth: usize) {
        let mut i = end;
        while i > start {
            i -= 1;
            let (xb, yb) = self.arena[i];
            let (x, y) = (xb as i32, yb as i32);
            self.rows[y as usize] |= 1 << x;
            let saved = (self.min_x, self.max_x, self.max_y);
            self.min_x = self.min_x.min(x);
            self.max_x = self.max_x.max(x);
            self.max_y = self.max_y.max(y);

            let new_depth = depth + 1;
            if new_depth == self.n {
                self.count += 1;
                (self.visit)(&self.rows, self.min_x, self.max_x, self.max_y);
            } else if self.split_depth == Some(new_depth) {
                self.snapshot_task(start, i);
            } else {
                let child_start = self.arena.len();
                self.arena.extend_from_within(start..i);
                let added_from = self.arena.len();
                self.push_free_neighbors(x, y);
                let child_end = self.arena.len();
                self.descend(child_start, child_end, new_depth);
                for j in added_from..child_end {
                    let (ax, ay) = self.arena[j];
                    self.reached[ay as usize] &= !(1 << ax);
                }
                self.arena.truncate(child_start);
            }

            self.rows[y as usize] &= !(1 << x);
            (self.min_x, self.max_x, self.max_y) = saved;
        }
    }

    fn push_free_neighbors(&mut self, x: i32, y: i32) {
        for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if nx < 0 || nx >= self.width || ny < 0 || ny >= self.n as i32 {
                continue;
            }
            // Half-plane anchoring: the first row only grows rightwards.
            if ny == 0 && nx < self.anchor_x {
                continue;
            }
            let bit = 1u32 << nx;
            if self.reached[ny as usize] & bit == 0 {
                self.reached[ny as usize] |= bit;
                self.arena.push((nx as u8, ny as u8));
            }
        }
    }

    fn snapshot_task(&mut self, start: usize, i: usize) {
        let (xb, yb) = self.arena[i];
        let mut untried: Vec<(u8, u8)> = self.arena[start..i].to_vec();
        let before = self.arena.len();
        self.push_free_neighbors(xb as i32, yb as i32);
        untried.extend_from_slice(&self.arena[before..]);
        let task = Task {
            rows: self.rows,
            reached: self.reached,
            untried,
            min_x: self.min_x,
            max_x: self.max_x,
            max_y: self.max_y,
        };
        for j in before..self.arena.len() {
            let (ax, ay) = self.arena[j];
            self.reached[ay as usize] &= !(1 << ax);
        }
        self.arena.truncate(before);
        self.tasks.push(task);
    }
}

fn board_to_polyomino(rows: &[u32; MAX_N], min_x: i32, max_y: i32) -> Polyomino {
    let mut cells = Vec::new();
    for (y, row) in rows.iter().enumerate().take(max_y as usize + 1) {
        let mut r = *row;
        while r != 0 {
            let x = r.trailing_zeros() as i32;
            cells.push(Cell::new(x - min_x, y as i32));
            r &= r - 1;
        }
    }
    Polyomino::from_connected_cells(cells)
}

/// Lexicographic order of two boards' normalized (y, x) cell sequences.
fn cmp_boards(a: &([u32; MAX_N], i32), b: &([u32; MAX_N], i32)) -> Ordering {
    for y in 0..MAX_N {
        let ua = a.0[y] >> a.1;
        let ub = b.0[y] >> b.1;
        if ua == ub {
            continue;
        }
        let first = (ua ^ ub).trailing_zeros();
        return if ua & (1 << first) != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        };
    }
    Ordering::Equal
}

// ---------------------------------------------------------------------------
// Per-shape analysis on the bitboard.

struct Window {
    shape: [u64; WROWS],
    empty: [u64; WROWS],
    ocean: [u64; WROWS],
    rows: usize,
    mask: u64,
}

/// Bounding-box window with a one-cell margin; ocean = empty cells reachable
/// from the margin.
fn window(rows: &[u32; MAX_N], min_x: i32, max_x: i32, max_y: i32) -> Window {
    let shift = min_x - 1;
    let width = (max_x - min_x + 3) as u32;
    let rc = (max_y + 3) as usize;
    let mask = (1u64 << width) - 1;
    let mut shape = [0u64; WROWS];
    for y in 0..=(max_y as usize) {
        let r = rows[y] as u64;
        shape[y + 1] = if shift >= 0 { r >> shift } else { r << 1 };
    }
    let mut empty = [0u64; WROWS];
    for y in 0..rc {
        empty[y] = mask & !shape[y];
    }
    let mut ocean = [0u64; WROWS];
    let side = 1u64 | (1u64 << (width - 1));
    ocean[0] = empty[0];
    ocean[rc - 1] = empty[rc - 1];
    for y in 1..rc - 1 {
        ocean[y] = side & empty[y];
    }
    loop {
        let mut changed = false;
        for y in 0..rc {
            let mut g = ocean[y] | (ocean[y] << 1) | (ocean[y] >> 1);
            if y > 0 {
                g |= ocean[y - 1];
            }
            if y + 1 < rc {
                g |= ocean[y + 1];
            }
            g &= empty[y];
            if g != ocean[y] {
                ocean[y] = g;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        changed = false;
        for y in (0..rc).rev() {
            let mut g = ocean[y] | (ocean[y] << 1) | (ocean[y] >> 1);
            if y > 0 {
                g |= ocean[y - 1];
            }
            if y + 1 < rc {
                g |= ocean[y + 1];
            }
            g &= empty[y];
            if g != ocean[y] {
                ocean[y] = g;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Window {
        shape,
        empty,
        ocean,
        rows: rc,
        mask,
    }
}

/// Total hole count from the Euler characteristic: `h = 1 − (V − E + n)`,
/// all three terms by popcount. Cheap enough to run on every shape.
fn hole_count_euler(rows: &[u32; MAX_N], n: usize, max_y: i32) -> u32 {
    let mut v = 0i64;
    let mut e = 0i64;
    let mut prev = 0u32;
    for row in rows.iter().take(max_y as usize + 1) {
        let r = *row;
        e += (r | (r << 1)).count_ones() as i64;
        e += (r | prev).count_ones() as i64;
        v += ((r | (r << 1)) | (prev | (prev << 1))).count_ones() as i64;
        prev = r;
    }
    e += prev.count_ones() as i64;
    v += (prev | (prev << 1)).count_ones() as i64;
    let holes = 1 - (v - e + n as i64);
    debug_assert!(holes >= 0);
    holes as u32
}

/// Deep-hole count of a completed board. A hole is deep exactly when every
/// cell of its 8-neighbourhood outside itself is a shape cell: sharing a
/// lattice point with the ocean or another hole means sharing a boundary
/// point with the outer loop or that hole's loop.
fn deep_hole_count(rows: &[u32; MAX_N], n: usize, min_x: i32, max_x: i32, max_y: i32) -> u32 {
    if n < 8 || max_x - min_x < 2 || max_y < 2 {
        return 0;
    }
    if hole_count_euler(rows, n, max_y) == 0 {
        return 0;
    }
    let win = window(rows, min_x, max_x, max_y);
    deep_in_window(&win)
}

fn deep_in_window(win: &Window) -> u32 {
    let rc = win.rows;
    let mut pool = [0u64; WROWS];
    let mut any = false;
    for (y, slot) in pool.iter_mut().enumerate().take(rc) {
        *slot = win.empty[y] & !win.ocean[y];
        any |= *slot != 0;
    }
    let mut deep = 0;
    while any {
        let seed_y = (0..rc).find(|&y| pool[y] != 0);
        let Some(seed_y) = seed_y else { break };
        let mut comp = [0u64; WROWS];
        comp[seed_y] = pool[seed_y] & pool[seed_y].wrapping_neg();
        loop {
            let mut changed = false;
            for y in 0..rc {
                let mut g = comp[y] | (comp[y] << 1) | (comp[y] >> 1);
                if y > 0 {
                    g |= comp[y - 1];
                }
                if y + 1 < rc {
                    g |= comp[y + 1];
                }
                g &= pool[y];
                g |= comp[y];
                if g != comp[y] {
                    comp[y] = g;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut is_deep = true;
        for y in 0..rc {
            let mut m = comp[y];
            if y > 0 {
                m |= comp[y - 1];
            }
            if y + 1 < rc {
                m |= comp[y + 1];
            }
            let dil8 = (m | (m << 1) | (m >> 1)) & win.mask;
            if dil8 & !comp[y] & !win.shape[y] != 0 {
                is_deep = false;
                break;
            }
        }
        if is_deep {
            deep += 1;
        }
        any = false;
        for y in 0..rc {
            pool[y] &= !comp[y];
            any |= pool[y] != 0;
        }
    }
    deep
}

/// Outer-perimeter edge count of a completed board (edges between shape
/// cells and the unbounded complement).
fn outer_perimeter(rows: &[u32; MAX_N], min_x: i32, max_x: i32, max_y: i32) -> u64 {
    let win = window(rows, min_x, max_x, max_y);
    let rc = win.rows;
    let mut s_o = 0u64;
    for y in 0..rc {
        s_o += (win.shape[y] & (win.ocean[y] << 1)).count_ones() as u64;
        s_o += (win.shape[y] & (win.ocean[y] >> 1)).count_ones() as u64;
        if y > 0 {
            s_o += (win.shape[y] & win.ocean[y - 1]).count_ones() as u64;
        }
        if y + 1 < rc {
            s_o += (win.shape[y] & win.ocean[y + 1]).count_ones() as u64;
        }
    }
    s_o
}

// ---------------------------------------------------------------------------
// Public operations.

fn check_limit(n: u32, limit: u32) -> Result<(), OracleError> {
    assert!(n >= 1, "n must be positive");
    if n > limit {
        return Err(OracleError::LimitExceeded { n, limit });
    }
    Ok(())
}

/// Visit every fixed n-omino exactly once; returns the total count.
pub fn enumerate_fixed(
    n: u32,
    mut visitor: impl FnMut(&Polyomino),
) -> Result<u64, OracleError> {
    check_limit(n, DEFAULT_LIMIT)?;
    let mut e = Enumerator::new(n as usize, |rows, min_x, _max_x, max_y| {
        visitor(&board_to_polyomino(rows, min_x, max_y));
    });
    e.run();
    Ok(e.count)
}

#[derive(Clone)]
struct TaskOutcome {
    count: u64,
    best: Option<(u32, [u32; MAX_N], i32, i32)>, // (h, rows, min_x, max_y)
}

fn search_subtree(n: usize, task: Option<&Task>, prune: bool) -> TaskOutcome {
    let mut best: Option<(u32, [u32; MAX_N], i32, i32)> = None;
    let visit = |rows: &[u32; MAX_N], min_x: i32, max_x: i32, max_y: i32| {
        if prune {
            // h_deep is bounded by the total hole count; skip the flood fill
            // when even that bound cannot reach the current maximum. Ties are
            // always analyzed so the lexicographic tie-break is unaffected.
            if let Some((bh, _, _, _)) = best {
                if bh > 0 && hole_count_euler(rows, n, max_y) < bh {
                    return;
                }
            }
        }
        let h = deep_hole_count(rows, n, min_x, max_x, max_y);
        match &mut best {
            None => best = Some((h, *rows, min_x, max_y)),
            Some((bh, brows, bmin, bmaxy)) => {
                let replace = h > *bh
                    || (h == *bh
                        && cmp_boards(&(*rows, min_x), &(*brows, *bmin)) == Ordering::Less);
                if replace {
                    (*bh, *brows, *bmin, *bmaxy) = (h, *rows, min_x, max_y);
                }
            }
        }
    };
    let count = match task {
        Some(t) => {
            let mut e = Enumerator::from_task(n, t, visit);
            e.run();
            e.count
        }
        None => {
            let mut e = Enumerator::new(n, visit);
            e.run();
            e.count
        }
    };
    TaskOutcome { count, best }
}

/// Exhaustive maximum deep-hole count over all fixed n-ominoes, with the
/// lexicographically least witness attaining it.
pub fn max_deep_holes(n: u32, jobs: usize) -> Result<SearchResult, OracleError> {
    max_deep_holes_with(
        n,
        SearchParams {
            jobs: jobs.max(1),
            ..SearchParams::default()
        },
    )
}

pub fn max_deep_holes_with(n: u32, params: SearchParams) -> Result<SearchResult, OracleError> {
    check_limit(n, params.limit)?;
    let start = Instant::now();
    let nn = n as usize;

    // Cut the tree into prefix tasks. When n does not reach the split depth
    // the whole search runs as a single serial subtree.
    let (tasks, collector_outcome): (Vec<Task>, TaskOutcome) = if nn > params.split_depth {
        let mut collector = Enumerator::new(nn, |_: &[u32; MAX_N], _, _, _| {});
        collector.split_depth = Some(params.split_depth);
        collector.run();
        let count = collector.count;
        (
            std::mem::take(&mut collector.tasks),
            TaskOutcome { count, best: None },
        )
    } else {
        (Vec::new(), search_subtree(nn, None, params.analysis_prune))
    };

    let outcomes: Vec<(usize, TaskOutcome)> = if tasks.is_empty() {
        Vec::new()
    } else {
        let next = AtomicUsize::new(0);
        let sink = Mutex::new(Vec::with_capacity(tasks.len()));
        std::thread::scope(|scope| {
            for _ in 0..params.jobs.max(1) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, MemOrder::Relaxed);
                    if i >= tasks.len() {
                        break;
                    }
                    let outcome = search_subtree(nn, Some(&tasks[i]), params.analysis_prune);
                    sink.lock().unwrap().push((i, outcome));
                });
            }
        });
        sink.into_inner().unwrap()
    };

    let mut count = collector_outcome.count;
    let mut best = collector_outcome.best;
    for (_, o) in outcomes {
        count += o.count;
        if let Some((h, rows, min_x, max_y)) = o.best {
            match &best {
                None => best = Some((h, rows, min_x, max_y)),
                Some((bh, brows, bmin, _)) => {
                    if h > *bh
                        || (h == *bh
                            && cmp_boards(&(rows, min_x), &(*brows, *bmin)) == Ordering::Less)
                    {
                        best = Some((h, rows, min_x, max_y));
                    }
                }
            }
        }
    }

    let (h_max, rows, min_x, max_y) = best.expect("every n >= 1 has at least one shape");
    let witness = board_to_polyomino(&rows, min_x, max_y);
    // Re-certify the witness through the exact census.
    let report = topology::analyze(&witness);
    assert_eq!(
        report.h_deep, h_max as u64,
        "witness census disagrees with the board analysis at n={n}"
    );

    Ok(SearchResult {
        n,
        h_max,
        witness,
        shapes_enumerated: count,
        elapsed: start.elapsed(),
        method: params,
    })
}

/// Minimum outer-perimeter edge count over all fixed n-ominoes.
pub fn min_outer_perimeter(n: u32) -> Result<u64, OracleError> {
    check_limit(n, DEFAULT_LIMIT)?;
    let mut min = u64::MAX;
    let mut e = Enumerator::new(n as usize, |rows, min_x, max_x, max_y| {
        let p = outer_perimeter(rows, min_x, max_x, max_y);
        if p < min {
            min = p;
        }
    });
    e.run();
    Ok(min)
}

/// Independent slow reference used to validate the enumeration engine:
/// breadth-first subset growth with normalization dedup. Returns the fixed
/// n-omino counts for n = 1..=n_max.
pub fn naive_fixed_counts(n_max: u32) -> Vec<u64> {
    let mut counts = Vec::new();
    let mut level: HashSet<Vec<Cell>> = HashSet::new();
    level.insert(vec![Cell::new(0, 0)]);
    counts.push(1);
    for _ in 2..=n_max {
        let mut next: HashSet<Vec<Cell>> = HashSet::new();
        for shape in &level {
            let occupied: HashSet<Cell> = shape.iter().copied().collect();
            for cell in shape {
                for nb in cell.neighbors() {
                    if occupied.contains(&nb) {
                        continue;
                    }
                    let mut grown = shape.clone();
                    grown.push(nb);
                    let min_x = grown.iter().map(|c| c.x).min().unwrap();
                    let min_y = grown.iter().map(|c| c.y).min().unwrap();
                    let mut norm: Vec<Cell> = grown
                        .iter()
                        .map(|c| Cell::new(c.x - min_x, c.y - min_y))
                        .collect();
                    norm.sort_unstable();
                    next.insert(norm);
                }
            }
        }
        counts.push(next.len() as u64);
        level = next;
    }
    counts
}

// ---------------------------------------------------------------------------
// Result cache.

/// One JSON line of the result cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub n: u32,
    pub h_max: u32,
    pub witness_cells: Vec<[i32; 2]>,
    pub shapes_enumerated: u64,
    pub elapsed_ms: u64,
    pub tool_version: String,
}

impl CacheRecord {
    fn from_result(r: &SearchResult) -> CacheRecord {
        CacheRecord {
            n: r.n,
            h_max: r.h_max,
            witness_cells: r.witness.cells().iter().map(|c| [c.x, c.y]).collect(),
            shapes_enumerated: r.shapes_enumerated,
            elapsed_ms: r.elapsed.as_millis() as u64,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Append-only JSON-lines store of search results, keyed by n.
#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    entries: BTreeMap<u32, CacheRecord>,
}

impl ResultCache {
    pub const FILE_NAME: &'static str = "results.jsonl";

    /// Open (creating the directory and file as needed) and load any
    /// existing records.
    pub fn open(dir: &Path) -> Result<ResultCache, OracleError> {
        std::fs::create_dir_all(dir).map_err(|e| OracleError::Io(e.to_string()))?;
        let path = dir.join(Self::FILE_NAME);
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text =
                std::fs::read_to_string(&path).map_err(|e| OracleError::Io(e.to_string()))?;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let rec: CacheRecord =
                    serde_json::from_str(line).map_err(|e| OracleError::Io(e.to_string()))?;
                entries.insert(rec.n, rec);
            }
        }
        Ok(ResultCache { path, entries })
    }

    pub fn get(&self, n: u32) -> Option<&CacheRecord> {
        self.entries.get(&n)
    }

    /// Record a result. A re-run must reproduce identical `h_max` and
    /// `shapes_enumerated`; a disagreeing record is an error rather than an
    /// overwrite.
    pub fn record(&mut self, result: &SearchResult) -> Result<(), OracleError> {
        let rec = CacheRecord::from_result(result);
        if let Some(existing) = self.entries.get(&result.n) {
            if existing.h_max != rec.h_max
                || existing.shapes_enumerated != rec.shapes_enumerated
            {
                return Err(OracleError::CacheConflict {
                    n: result.n,
                    existing: existing.h_max,
                    computed: rec.h_max,
                });
            }
            return Ok(());
        }
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| OracleError::Io(e.to_string()))?;
        let line = serde_json::to_string(&rec).map_err(|e| OracleError::Io(e.to_string()))?;
        writeln!(file, "{line}").map_err(|e| OracleError::Io(e.to_string()))?;
        self.entries.insert(result.n, rec);
        Ok(())
    }
}

/// For every `n` in the range whose verdict is a two-value range, run the
/// exhaustive search and record where the truth lies. Exact verdicts are
/// skipped. Cached results are reused.
pub fn resolve_ambiguous(
    n_from: u32,
    n_to: u32,
    cache: &mut ResultCache,
    params: SearchParams,
) -> Result<Vec<(u32, u32)>, OracleError> {
    let mut resolved = Vec::new();
    for n in n_from..=n_to {
        let verdict = formulas::exact_h(n as u64);
        let (lo, hi) = match verdict {
            ExactResult::Exact(_) => continue,
            ExactResult::Range { lo, hi } => (lo, hi),
        };
        let h_max = match cache.get(n) {
            Some(rec) => rec.h_max,
            None => {
                let result = max_deep_holes_with(n, params)?;
                cache.record(&result)?;
                result.h_max
            }
        };
        assert!(
            (lo..=hi).contains(&(h_max as u64)),
            "exhaustive truth {h_max} escapes the certified range [{lo}, {hi}] at n={n}"
        );
        resolved.push((n, h_max));
    }
    Ok(resolved)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_naive_reference() {
        let naive = naive_fixed_counts(8);
        assert_eq!(naive, [1, 2, 6, 19, 63, 216, 760, 2725]);
        for (i, &expected) in naive.iter().enumerate() {
            let n = i as u32 + 1;
            let count = enumerate_fixed(n, |_| {}).unwrap();
            assert_eq!(count, expected, "n={n}");
        }
    }

    #[test]
    fn enumerated_shapes_are_valid_and_distinct() {
        let mut seen = HashSet::new();
        let count = enumerate_fixed(6, |p| {
            assert_eq!(p.n(), 6);
            assert!(seen.insert(p.cells().to_vec()), "duplicate {p:?}");
        })
        .unwrap();
        assert_eq!(count, 216);
        assert_eq!(seen.len(), 216);
    }

    #[test]
    fn enumerated_shape_sets_match_subset_growth() {
        // Not just the counts: the exact normalized shape sets agree with an
        // independently grown reference.
        let mut reference: HashSet<Vec<Cell>> = HashSet::new();
        reference.insert(vec![Cell::new(0, 0)]);
        for _ in 2..=7 {
            let mut next = HashSet::new();
            for shape in &reference {
                let occupied: HashSet<Cell> = shape.iter().copied().collect();
                for cell in shape {
                    for nb in cell.neighbors() {
                        if occupied.contains(&nb) {
                            continue;
                        }
                        let mut grown = shape.clone();
                        grown.push(nb);
                        let p = Polyomino::from_cells(grown).unwrap();
                        next.insert(p.cells().to_vec());
                    }
                }
            }
            reference = next;
        }
        let mut enumerated = HashSet::new();
        enumerate_fixed(7, |p| {
            enumerated.insert(p.cells().to_vec());
        })
        .unwrap();
        assert_eq!(enumerated, reference);
        assert_eq!(enumerated.len(), 760);
    }

    #[test]
    fn limit_is_enforced() {
        assert_eq!(
            enumerate_fixed(17, |_| {}).unwrap_err(),
            OracleError::LimitExceeded { n: 17, limit: 16 }
        );
        assert!(max_deep_holes(30, 1).is_err());
    }

    #[test]
    fn small_n_has_no_deep_holes() {
        for n in 1..=7 {
            let r = max_deep_holes(n, 1).unwrap();
            assert_eq!(r.h_max, 0, "n={n}");
        }
    }

    #[test]
    fn ring_is_the_unique_extremal_octomino() {
        let r = max_deep_holes(8, 1).unwrap();
        assert_eq!(r.h_max, 1);
        assert_eq!(r.shapes_enumerated, 2725);
        assert_eq!(r.witness.to_ascii(), "###\n#.#\n###");
    }

    #[test]
    fn eleven_cells_still_max_one() {
        let r = max_deep_holes(11, 1).unwrap();
        assert_eq!(r.h_max, 1);
        assert_eq!(r.shapes_enumerated, 135268);
    }

    #[test]
    fn determinism_across_jobs_and_prune() {
        let base = max_deep_holes(10, 1).unwrap();
        assert_eq!(base.h_max, 1);
        for jobs in [2, 8] {
            let r = max_deep_holes(10, jobs).unwrap();
            assert_eq!(r.h_max, base.h_max);
            assert_eq!(r.shapes_enumerated, base.shapes_enumerated);
            assert_eq!(r.witness, base.witness);
        }
        let pruned = max_deep_holes_with(
            10,
            SearchParams {
                jobs: 3,
                analysis_prune: true,
                ..SearchParams::default()
            },
        )
        .unwrap();
        assert_eq!(pruned.h_max, base.h_max);
        assert_eq!(pruned.shapes_enumerated, base.shapes_enumerated);
        assert_eq!(pruned.witness, base.witness);
    }

    #[test]
    fn split_depth_does_not_change_results() {
        let base = max_deep_holes(9, 1).unwrap();
        for depth in [1, 2, 6, 9, 12] {
            let r = max_deep_holes_with(
                9,
                SearchParams {
                    jobs: 2,
                    split_depth: depth,
                    ..SearchParams::default()
                },
            )
            .unwrap();
            assert_eq!(r.shapes_enumerated, base.shapes_enumerated, "depth={depth}");
            assert_eq!(r.h_max, base.h_max);
            assert_eq!(r.witness, base.witness);
        }
    }

    #[test]
    fn fast_analysis_agrees_with_exact_census_up_to_nine() {
        // Cross-validate the bitboard path against the loop-tracing census
        // on every shape.
        for n in 7..=9u32 {
            enumerate_fixed(n, |p| {
                let report = topology::analyze(p);
                let mut rows = [0u32; MAX_N];
                for c in p.cells() {
                    rows[c.y as usize] |= 1 << c.x;
                }
                let fast = deep_hole_count(&rows, p.n(), 0, p.width() - 1, p.height() - 1);
                assert_eq!(fast as u64, report.h_deep, "{}", p.to_ascii());
            })
            .unwrap();
        }
    }

    /// Takes half a minute; run with `cargo test -- --ignored`.
    #[test]
    #[ignore]
    fn enumeration_counts_at_the_limit() {
        assert_eq!(enumerate_fixed(15, |_| {}).unwrap(), 27_394_666);
        assert_eq!(enumerate_fixed(16, |_| {}).unwrap(), 104_592_937);
    }

    #[test]
    fn min_perimeter_follows_the_ceiling_formula() {
        assert_eq!(min_outer_perimeter(1).unwrap(), 4);
        assert_eq!(min_outer_perimeter(9).unwrap(), 12);
        for n in 2..=8u32 {
            let expected = 2 * (2.0 * (n as f64).sqrt()).ceil() as u64;
            assert_eq!(min_outer_perimeter(n).unwrap(), expected, "n={n}");
        }
    }

    #[test]
    fn cache_round_trip_and_conflicts() {
        let dir = tempfile::tempdir().unwrap();
        let result = max_deep_holes(8, 1).unwrap();
        {
            let mut cache = ResultCache::open(dir.path()).unwrap();
            cache.record(&result).unwrap();
            cache.record(&result).unwrap(); // identical re-record is fine
        }
        let mut reloaded = ResultCache::open(dir.path()).unwrap();
        let rec = reloaded.get(8).unwrap();
        assert_eq!(rec.h_max, 1);
        assert_eq!(rec.shapes_enumerated, 2725);

        let mut tampered = result.clone();
        tampered.h_max = 5;
        assert!(matches!(
            reloaded.record(&tampered),
            Err(OracleError::CacheConflict { n: 8, .. })
        ));
    }

    #[test]
    fn resolve_ambiguous_finds_nothing_below_17() {
        // Every verdict with n <= 16 is exact, so the resolver is a no-op.
        let dir = tempfile::tempdir().unwrap();
        let mut cache = ResultCache::open(dir.path()).unwrap();
        let resolved =
            resolve_ambiguous(8, 16, &mut cache, SearchParams::default()).unwrap();
        assert!(resolved.is_empty());
    }
}
