//! Boundary tracing, hole extraction, deep-hole classification, and the
//! lattice-point / edge censuses, together with the identity and inequality
//! checks evaluated on concrete shapes.
//!
//! A *hole* is a bounded 4-connected component of the complement cells. A
//! hole is *deep* when its boundary lattice points are disjoint from the
//! outer boundary's lattice points and from every other hole's.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::grid::{Cell, Polyomino};

pub type LatticePoint = (i32, i32);

/// A simple rectilinear loop on the lattice. Vertices are stored once in
/// cyclic walk order; consecutive vertices differ by one unit step, so the
/// edge count equals the vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLoop {
    pub vertices: Vec<LatticePoint>,
    /// Outer loops run counterclockwise, hole loops clockwise.
    pub clockwise: bool,
}

impl BoundaryLoop {
    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_set(&self) -> HashSet<LatticePoint> {
        self.vertices.iter().copied().collect()
    }

    /// Shoelace area; positive for counterclockwise orientation.
    pub fn signed_area(&self) -> i64 {
        let v = &self.vertices;
        let mut twice = 0i64;
        for i in 0..v.len() {
            let (x0, y0) = v[i];
            let (x1, y1) = v[(i + 1) % v.len()];
            twice += x0 as i64 * y1 as i64 - x1 as i64 * y0 as i64;
        }
        debug_assert_eq!(twice % 2, 0, "rectilinear lattice loop area is integral");
        twice / 2
    }
}

/// One bounded complement component with its traced boundary.
#[derive(Debug, Clone)]
pub struct HoleRecord {
    /// The empty cells of the hole, sorted by (y, x).
    pub cells: Vec<Cell>,
    pub boundary: BoundaryLoop,
    /// All lattice points on the boundary loop, kept as a hash set for O(1)
    /// disjointness checks.
    pub vertex_set: HashSet<LatticePoint>,
    pub deep: bool,
}

/// Full topological census of a polyomino.
#[derive(Debug, Clone)]
pub struct TopologyReport {
    pub n: u64,
    pub outer: BoundaryLoop,
    pub holes: Vec<HoleRecord>,
    pub h_deep: u64,
    pub h_all: u64,
    /// Lattice points interior to the polyomino (all four incident cells
    /// are polyomino cells).
    pub i: u64,
    /// Total boundary lattice points: outer loop plus every hole loop.
    pub b: u64,
    /// Lattice points on the outer loop alone.
    pub b_tilde: u64,
    /// Outer perimeter edges.
    pub s_o: u64,
    /// Hole-boundary edges.
    pub s_i: u64,
    /// Internal edges shared by two cells (each counted once).
    pub c: u64,
    /// `n = i + b/2 - 1 + h` — evaluated only when every hole is deep
    /// (disjoint boundaries are this identity's hypothesis).
    pub pick_ok: Option<bool>,
    /// `4n = s_o + s_i + 2c`.
    pub edge_census_ok: bool,
}

impl TopologyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "h_all": self.h_all,
            "h_deep": self.h_deep,
            "i": self.i,
            "b": self.b,
            "b_tilde": self.b_tilde,
            "s_o": self.s_o,
            "s_i": self.s_i,
            "c": self.c,
            "pick_ok": self.pick_ok,
            "edge_census_ok": self.edge_census_ok,
            "holes": self.holes.iter().map(|h| serde_json::json!({
                "cells": h.cells.iter().map(|c| [c.x, c.y]).collect::<Vec<_>>(),
                "deep": h.deep,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("inequalities apply only to shapes whose holes are all deep (h_all={h_all}, h_deep={h_deep})")]
    NotApplicable { h_all: u64, h_deep: u64 },
}

/// Result of a single named inequality evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Left side minus right side; nonnegative when the inequality holds
    /// (strict checks have positive slack).
    pub slack: f64,
}

// ---------------------------------------------------------------------------
// Cell labelling: shape / ocean / hole components on a margined raster.

const SHAPE: u32 = u32::MAX;
const OCEAN: u32 = u32::MAX - 1;

struct Labels {
    w: i32,
    h: i32,
    /// One label per cell of the margined bounding box, row-major.
    data: Vec<u32>,
    hole_count: u32,
}

impl Labels {
    fn build(p: &Polyomino) -> Labels {
        let (w, h) = (p.width(), p.height());
        let stride = (w + 2) as usize;
        let mut data = vec![0u32; stride * (h + 2) as usize];
        let idx = |x: i32, y: i32| ((y + 1) as usize) * stride + (x + 1) as usize;
        for c in p.cells() {
            data[idx(c.x, c.y)] = SHAPE;
        }

        // Flood the unbounded complement from the margin; everything empty
        // that is left afterwards belongs to a hole.
        let mut queue = VecDeque::new();
        data[idx(-1, -1)] = OCEAN;
        queue.push_back((-1i32, -1i32));
        while let Some((x, y)) = queue.pop_front() {
            for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if nx < -1 || nx > w || ny < -1 || ny > h {
                    continue;
                }
                if data[idx(nx, ny)] == 0 {
                    data[idx(nx, ny)] = OCEAN;
                    queue.push_back((nx, ny));
                }
            }
        }

        // Label hole components in (y, x) scan order so hole ids are
        // deterministic. Hole ids are 1-based in the raster (0 = unvisited).
        let mut hole_count = 0u32;
        for y in 0..h {
            for x in 0..w {
                if data[idx(x, y)] != 0 {
                    continue;
                }
                hole_count += 1;
                data[idx(x, y)] = hole_count;
                let mut queue = VecDeque::from([(x, y)]);
                while let Some((cx, cy)) = queue.pop_front() {
                    for (nx, ny) in [(cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)] {
                        if data[idx(nx, ny)] == 0 {
                            data[idx(nx, ny)] = hole_count;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
        }
        Labels {
            w,
            h,
            data,
            hole_count,
        }
    }

    #[inline]
    fn get(&self, x: i32, y: i32) -> u32 {
        if x < -1 || x > self.w || y < -1 || y > self.h {
            return OCEAN;
        }
        self.data[((y + 1) as usize) * ((self.w + 2) as usize) + (x + 1) as usize]
    }
}

// ---------------------------------------------------------------------------
// Loop tracing: walk the region boundary keeping the region on the left.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    East,
    North,
    West,
    South,
}

impl Dir {
    fn step(self, (x, y): LatticePoint) -> LatticePoint {
        match self {
            Dir::East => (x + 1, y),
            Dir::North => (x, y + 1),
            Dir::West => (x - 1, y),
            Dir::South => (x, y - 1),
        }
    }

    fn left(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
        }
    }

    fn right(self) -> Dir {
        self.left().left().left()
    }

    /// Cell on the left of the directed edge starting at `p`.
    fn left_cell(self, (x, y): LatticePoint) -> (i32, i32) {
        match self {
            Dir::East => (x, y),
            Dir::North => (x - 1, y),
            Dir::West => (x - 1, y - 1),
            Dir::South => (x, y - 1),
        }
    }

    /// Cell on the right of the directed edge starting at `p`.
    fn right_cell(self, p: LatticePoint) -> (i32, i32) {
        match self {
            Dir::East => (p.0, p.1 - 1),
            Dir::North => (p.0, p.1),
            Dir::West => (p.0 - 1, p.1),
            Dir::South => (p.0 - 1, p.1 - 1),
        }
    }
}

/// Trace the boundary loop of a region, region kept on the left (so the walk
/// runs counterclockwise around it). The start edge must lie on the loop.
/// Panics on a pinched (non-simple) boundary; connected polyominoes and
/// their 4-connected holes never produce one.
fn trace_loop(
    region: &dyn Fn(i32, i32) -> bool,
    start: LatticePoint,
    start_dir: Dir,
) -> Vec<LatticePoint> {
    let valid = |p: LatticePoint, d: Dir| {
        let (lx, ly) = d.left_cell(p);
        let (rx, ry) = d.right_cell(p);
        region(lx, ly) && !region(rx, ry)
    };
    assert!(valid(start, start_dir), "start edge not on the boundary");

    let mut vertices = Vec::new();
    let mut seen = HashSet::new();
    let (mut p, mut d) = (start, start_dir);
    loop {
        vertices.push(p);
        assert!(seen.insert(p), "boundary loop revisits vertex {p:?}");
        p = d.step(p);
        let mut next = None;
        let mut candidates = 0;
        for nd in [d.left(), d, d.right()] {
            if valid(p, nd) {
                candidates += 1;
                if next.is_none() {
                    next = Some(nd);
                }
            }
        }
        assert_eq!(
            candidates, 1,
            "pinched boundary at {p:?}: a 4-connected region of a connected \
             polyomino cannot self-touch at a vertex"
        );
        d = next.unwrap();
        if p == start {
            assert_eq!(d, start_dir, "loop closed with mismatched direction");
            break;
        }
    }
    vertices
}

fn trace_region_loop(labels: &Labels, want: impl Fn(u32) -> bool, start_cell: Cell) -> Vec<LatticePoint> {
    let region = |x: i32, y: i32| want(labels.get(x, y));
    trace_loop(&region, (start_cell.x, start_cell.y), Dir::East)
}

// ---------------------------------------------------------------------------
// Public operations.

/// Trace the single outer loop of the polyomino together with its holes.
/// Counterclockwise; simple.
pub fn trace_outer(p: &Polyomino) -> BoundaryLoop {
    let labels = Labels::build(p);
    outer_from(&labels, p)
}

fn outer_from(labels: &Labels, p: &Polyomino) -> BoundaryLoop {
    // The filled region is everything that is not ocean. Its lowest-leftmost
    // cell is the polyomino's first cell: a hole cell needs a shape cell
    // below it in its own column.
    let start = p.cells()[0];
    let vertices = trace_region_loop(labels, |l| l != OCEAN, start);
    let out = BoundaryLoop {
        vertices,
        clockwise: false,
    };
    debug_assert!(out.signed_area() > 0);
    debug_assert_eq!(out.edge_count() % 2, 0);
    out
}

/// Extract the bounded complement components. Deep flags are left unset;
/// see [`classify_deep`].
pub fn find_holes(p: &Polyomino) -> Vec<HoleRecord> {
    let labels = Labels::build(p);
    holes_from(&labels)
}

fn holes_from(labels: &Labels) -> Vec<HoleRecord> {
    let mut cells_by_hole: Vec<Vec<Cell>> = vec![Vec::new(); labels.hole_count as usize];
    for y in 0..labels.h {
        for x in 0..labels.w {
            let l = labels.get(x, y);
            if l != SHAPE && l != OCEAN {
                cells_by_hole[(l - 1) as usize].push(Cell::new(x, y));
            }
        }
    }
    cells_by_hole
        .into_iter()
        .enumerate()
        .map(|(idx, cells)| {
            let id = idx as u32 + 1;
            // Trace counterclockwise around the hole region, then flip: as a
            // boundary component of the polyomino the hole loop runs clockwise.
            let mut vertices = trace_region_loop(labels, |l| l == id, cells[0]);
            let area = BoundaryLoop {
                vertices: vertices.clone(),
                clockwise: false,
            }
            .signed_area();
            assert_eq!(area as usize, cells.len(), "hole loop encloses exactly its cells");
            vertices.reverse();
            let boundary = BoundaryLoop {
                vertices,
                clockwise: true,
            };
            let vertex_set = boundary.vertex_set();
            assert!(vertex_set.len() >= 4, "a hole has at least four boundary points");
            HoleRecord {
                cells,
                boundary,
                vertex_set,
                deep: false,
            }
        })
        .collect()
}

/// Set the deep flag on every hole: a hole is deep exactly when its boundary
/// lattice points avoid the outer loop and every other hole's boundary.
pub fn classify_deep(holes: &mut [HoleRecord], outer: &BoundaryLoop) {
    let outer_set = outer.vertex_set();
    let mut touched: HashMap<LatticePoint, usize> = HashMap::new();
    let mut shared: Vec<bool> = vec![false; holes.len()];
    for (i, hole) in holes.iter().enumerate() {
        for &v in &hole.vertex_set {
            match touched.insert(v, i) {
                Some(j) if j != i => {
                    shared[i] = true;
                    shared[j] = true;
                }
                _ => {}
            }
        }
    }
    for (i, hole) in holes.iter_mut().enumerate() {
        let hits_outer = hole.vertex_set.iter().any(|v| outer_set.contains(v));
        hole.deep = !hits_outer && !shared[i];
    }
}

/// Count (interior, boundary, outer-boundary) lattice points.
pub fn lattice_census(
    p: &Polyomino,
    outer: &BoundaryLoop,
    holes: &[HoleRecord],
) -> (u64, u64, u64) {
    let labels = Labels::build(p);
    lattice_census_from(&labels, outer, holes)
}

fn lattice_census_from(
    labels: &Labels,
    outer: &BoundaryLoop,
    holes: &[HoleRecord],
) -> (u64, u64, u64) {
    // A lattice point is interior exactly when all four incident cells are
    // polyomino cells; any empty incident cell puts it on (or beyond) a loop.
    let mut interior = 0u64;
    for y in 0..=labels.h {
        for x in 0..=labels.w {
            let all_shape = labels.get(x - 1, y - 1) == SHAPE
                && labels.get(x, y - 1) == SHAPE
                && labels.get(x - 1, y) == SHAPE
                && labels.get(x, y) == SHAPE;
            if all_shape {
                interior += 1;
            }
        }
    }
    let b_tilde = outer.edge_count() as u64;
    let b = b_tilde
        + holes
            .iter()
            .map(|h| h.boundary.edge_count() as u64)
            .sum::<u64>();
    (interior, b, b_tilde)
}

/// Classify all 4n cell edges: outer-perimeter, hole-perimeter, or internal
/// (shared, counted once). Returns (s_o, s_i, c).
pub fn edge_census(p: &Polyomino) -> (u64, u64, u64) {
    let labels = Labels::build(p);
    edge_census_from(&labels, p)
}

fn edge_census_from(labels: &Labels, p: &Polyomino) -> (u64, u64, u64) {
    let (mut s_o, mut s_i, mut c) = (0u64, 0u64, 0u64);
    for cell in p.cells() {
        for (nx, ny, positive) in [
            (cell.x + 1, cell.y, true),
            (cell.x - 1, cell.y, false),
            (cell.x, cell.y + 1, true),
            (cell.x, cell.y - 1, false),
        ] {
            match labels.get(nx, ny) {
                SHAPE => {
                    if positive {
                        c += 1;
                    }
                }
                OCEAN => s_o += 1,
                _ => s_i += 1,
            }
        }
    }
    (s_o, s_i, c)
}

/// Run the full census: holes, deep flags, lattice points, edge classes, and
/// the identity checks.
pub fn analyze(p: &Polyomino) -> TopologyReport {
    let labels = Labels::build(p);
    let outer = outer_from(&labels, p);
    let mut holes = holes_from(&labels);
    classify_deep(&mut holes, &outer);

    let (i, b, b_tilde) = lattice_census_from(&labels, &outer, &holes);
    let (s_o, s_i, c) = edge_census_from(&labels, p);
    assert_eq!(
        s_o, b_tilde,
        "a rectilinear loop has equal vertex and edge counts"
    );

    let n = p.n() as u64;
    let h_all = holes.len() as u64;
    let h_deep = holes.iter().filter(|h| h.deep).count() as u64;
    let edge_census_ok = 4 * n == s_o + s_i + 2 * c;
    // Doubled form keeps the arithmetic exact (b is even, but do not rely on it).
    let pick_ok = (h_all == h_deep).then(|| 2 * n == 2 * i + b - 2 + 2 * h_deep);

    TopologyReport {
        n,
        outer,
        holes,
        h_deep,
        h_all,
        i,
        b,
        b_tilde,
        s_o,
        s_i,
        c,
        pick_ok,
        edge_census_ok,
    }
}

/// Ceiling of `2√m`, exactly.
fn ceil_two_sqrt(m: u64) -> u64 {
    let t = (4 * m).isqrt();
    if t * t < 4 * m {
        t + 1
    } else {
        t
    }
}

/// Evaluate the bound inequalities on an all-deep report:
///
/// * P1: `b ≥ 4h + b̃`
/// * P2: `n + 1 ≥ 3h + b̃/2`
/// * ISO: `b̃ > 2√((n+h)π)` (strict; the two integer quantities can never
///   make it an equality)
/// * NIT: `2c ≥ s_o − 4 + 8h`
/// * CHAIN: `4n ≥ 4⌈2√(n+h)⌉ + 12h − 4`
///
/// All integer comparisons are exact; ISO alone involves π.
pub fn verify_inequalities(r: &TopologyReport) -> Result<Vec<InequalityCheck>, TopologyError> {
    if r.h_all != r.h_deep {
        return Err(TopologyError::NotApplicable {
            h_all: r.h_all,
            h_deep: r.h_deep,
        });
    }
    let (n, h, b, bt) = (r.n as i64, r.h_deep as i64, r.b as i64, r.b_tilde as i64);
    let (s_o, c) = (r.s_o as i64, r.c as i64);

    let p1 = b - (4 * h + bt);
    let p2_doubled = 2 * (n + 1) - (6 * h + bt);
    let iso_rhs = 2.0 * (((n + h) as f64) * std::f64::consts::PI).sqrt();
    let iso_slack = bt as f64 - iso_rhs;
    let nit = 2 * c - (s_o - 4 + 8 * h);
    let chain = 4 * n - (4 * ceil_two_sqrt((n + h) as u64) as i64 + 12 * h - 4);

    Ok(vec![
        InequalityCheck {
            name: "P1",
            holds: p1 >= 0,
            slack: p1 as f64,
        },
        InequalityCheck {
            name: "P2",
            holds: p2_doubled >= 0,
            slack: p2_doubled as f64 / 2.0,
        },
        InequalityCheck {
            name: "ISO",
            holds: iso_slack > 0.0,
            slack: iso_slack,
        },
        InequalityCheck {
            name: "NIT",
            holds: nit >= 0,
            slack: nit as f64,
        },
        InequalityCheck {
            name: "CHAIN",
            holds: chain >= 0,
            slack: chain as f64,
        },
    ])
}
