//! The lattice polyomino data model: cells, validation, normalization,
//! grid symmetries, and the ASCII / JSON exchange formats.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One unit square `[x, x+1] × [y, y+1]` of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    /// The four edge-neighbours.
    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }
}

// Canonical cell order is (y, x): row-major from the bottom row up. All
// sorted cell lists, ASCII/JSON output and canonical forms rely on it.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Errors from polyomino construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("empty input: a polyomino needs at least one cell")]
    EmptyInput,
    #[error("duplicate cell {0}")]
    DuplicateCell(Cell),
    #[error("cells are not edge-connected ({components} components)")]
    Disconnected { components: usize },
    #[error("bad character {ch:?} at row {row}, column {col}")]
    BadCharacter { row: usize, col: usize, ch: char },
}

/// An edge-connected set of unit grid cells, translated so that
/// `min x = min y = 0`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyomino {
    /// Sorted by (y, x).
    cells: Vec<Cell>,
    width: i32,
    height: i32,
}

impl Polyomino {
    /// Validate and normalize a cell list: rejects empty, duplicate and
    /// disconnected input, then translates the minimum corner to the origin.
    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Result<Self, GridError> {
        let raw: Vec<Cell> = cells.into_iter().collect();
        if raw.is_empty() {
            return Err(GridError::EmptyInput);
        }
        let mut set = HashSet::with_capacity(raw.len());
        for &c in &raw {
            // Keeps neighbour and normalization arithmetic overflow-free.
            assert!(
                c.x.abs() <= 1 << 30 && c.y.abs() <= 1 << 30,
                "cell coordinate out of supported range: {c}"
            );
            if !set.insert(c) {
                return Err(GridError::DuplicateCell(c));
            }
        }

        // Connectivity over the sparse set (no raster yet: the input may be
        // arbitrarily spread out).
        let mut seen = HashSet::with_capacity(set.len());
        let mut queue = VecDeque::new();
        seen.insert(raw[0]);
        queue.push_back(raw[0]);
        while let Some(c) = queue.pop_front() {
            for nb in c.neighbors() {
                if set.contains(&nb) && seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        if seen.len() != set.len() {
            let components = count_components(&set);
            return Err(GridError::Disconnected { components });
        }

        let min_x = raw.iter().map(|c| c.x).min().unwrap();
        let min_y = raw.iter().map(|c| c.y).min().unwrap();
        let mut cells: Vec<Cell> = raw
            .iter()
            .map(|c| Cell::new(c.x - min_x, c.y - min_y))
            .collect();
        cells.sort_unstable();
        let width = cells.iter().map(|c| c.x).max().unwrap() + 1;
        let height = cells.iter().map(|c| c.y).max().unwrap() + 1;
        Ok(Polyomino {
            cells,
            width,
            height,
        })
    }

    /// Construct from cells already known to be valid (normalized or not).
    /// Used by internal growth procedures that maintain connectivity.
    pub(crate) fn from_connected_cells(raw: Vec<Cell>) -> Self {
        let min_x = raw.iter().map(|c| c.x).min().unwrap();
        let min_y = raw.iter().map(|c| c.y).min().unwrap();
        let mut cells: Vec<Cell> = raw
            .iter()
            .map(|c| Cell::new(c.x - min_x, c.y - min_y))
            .collect();
        cells.sort_unstable();
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]), "duplicate cells");
        let width = cells.iter().map(|c| c.x).max().unwrap() + 1;
        let height = cells.iter().map(|c| c.y).max().unwrap() + 1;
        Polyomino {
            cells,
            width,
            height,
        }
    }

    /// Parse the `#`/`.` picture format. The top row of the text is the
    /// highest y row of the polyomino.
    pub fn parse_ascii(text: &str) -> Result<Self, GridError> {
        let lines: Vec<&str> = text
            .strip_suffix('\n')
            .unwrap_or(text)
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        let rows = lines.len();
        let mut cells = Vec::new();
        for (row, line) in lines.iter().enumerate() {
            let y = (rows - 1 - row) as i32;
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '#' => cells.push(Cell::new(col as i32, y)),
                    '.' => {}
                    ch => return Err(GridError::BadCharacter { row, col, ch }),
                }
            }
        }
        Self::from_cells(cells)
    }

    /// Render as the `#`/`.` bounding-box picture; inverse of [`parse_ascii`].
    /// No trailing spaces, no final newline.
    ///
    /// [`parse_ascii`]: Polyomino::parse_ascii
    pub fn to_ascii(&self) -> String {
        let w = self.width as usize;
        let h = self.height as usize;
        let mut rows = vec![vec![b'.'; w]; h];
        for c in &self.cells {
            rows[c.y as usize][c.x as usize] = b'#';
        }
        let lines: Vec<String> = rows
            .iter()
            .rev()
            .map(|r| String::from_utf8(r.clone()).unwrap())
            .collect();
        lines.join("\n")
    }

    /// Parse the JSON exchange format `{"cells": [[x, y], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, GridError> {
        let parsed: PolyominoJson =
            serde_json::from_str(text).map_err(|_| GridError::EmptyInput)?;
        Self::from_cells(parsed.cells.into_iter().map(|[x, y]| Cell::new(x, y)))
    }

    /// Serialize to `{"cells": [[x, y], ...]}` with cells sorted by (y, x).
    pub fn to_json(&self) -> String {
        let doc = PolyominoJson {
            cells: self.cells.iter().map(|c| [c.x, c.y]).collect(),
        };
        serde_json::to_string(&doc).unwrap()
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    /// Cells sorted by (y, x), with `min x = min y = 0`.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Bounding-box width (max x + 1).
    pub fn width(&self) -> i32 {
        self.width
    }

    /// Bounding-box height (max y + 1).
    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Apply a grid symmetry and renormalize.
    pub fn transformed(&self, t: Transform) -> Polyomino {
        let cells: Vec<Cell> = self.cells.iter().map(|&c| t.apply(c)).collect();
        Self::from_connected_cells(cells)
    }

    /// The lexicographically least normalized cell sequence over the 8 grid
    /// symmetries. Idempotent; identical for every member of a symmetry orbit.
    pub fn canonical_form(&self) -> Polyomino {
        Transform::ALL
            .iter()
            .map(|&t| self.transformed(t))
            .min_by(|a, b| a.cells.cmp(&b.cells))
            .unwrap()
    }

    /// Deterministic random n-omino: grow from a single cell by repeatedly
    /// attaching a uniformly chosen free edge-neighbour.
    pub fn random(n: usize, seed: u64) -> Polyomino {
        assert!(n >= 1, "n must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cells: HashSet<Cell> = HashSet::with_capacity(n);
        let mut frontier: BTreeSet<Cell> = BTreeSet::new();
        let start = Cell::new(0, 0);
        cells.insert(start);
        for nb in start.neighbors() {
            frontier.insert(nb);
        }
        while cells.len() < n {
            let idx = rng.gen_range(0..frontier.len());
            let chosen = *frontier.iter().nth(idx).unwrap();
            frontier.remove(&chosen);
            cells.insert(chosen);
            for nb in chosen.neighbors() {
                if !cells.contains(&nb) {
                    frontier.insert(nb);
                }
            }
        }
        Self::from_connected_cells(cells.into_iter().collect())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyominoJson {
    cells: Vec<[i32; 2]>,
}

fn count_components(set: &HashSet<Cell>) -> usize {
    let mut seen: HashSet<Cell> = HashSet::with_capacity(set.len());
    let mut components = 0;
    for &start in set {
        if seen.contains(&start) {
            continue;
        }
        components += 1;
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for nb in c.neighbors() {
                if set.contains(&nb) && seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
    }
    components
}

/// One of the 8 symmetries of the square grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Identity,
    /// 90° counterclockwise.
    Rot90,
    Rot180,
    /// 270° counterclockwise.
    Rot270,
    /// Mirror across the y axis.
    FlipX,
    /// Mirror across the x axis.
    FlipY,
    /// Mirror across the main diagonal (swap x and y).
    Transpose,
    /// Mirror across the anti-diagonal.
    AntiTranspose,
}

impl Transform {
    pub const ALL: [Transform; 8] = [
        Transform::Identity,
        Transform::Rot90,
        Transform::Rot180,
        Transform::Rot270,
        Transform::FlipX,
        Transform::FlipY,
        Transform::Transpose,
        Transform::AntiTranspose,
    ];

    /// The linear part of the symmetry applied to a cell. Translation offsets
    /// are irrelevant because every consumer renormalizes afterwards.
    pub fn apply(self, c: Cell) -> Cell {
        match self {
            Transform::Identity => c,
            Transform::Rot90 => Cell::new(-c.y, c.x),
            Transform::Rot180 => Cell::new(-c.x, -c.y),
            Transform::Rot270 => Cell::new(c.y, -c.x),
            Transform::FlipX => Cell::new(-c.x, c.y),
            Transform::FlipY => Cell::new(c.x, -c.y),
            Transform::Transpose => Cell::new(c.y, c.x),
            Transform::AntiTranspose => Cell::new(-c.y, -c.x),
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(self, other: Transform) -> Transform {
        let probe = [Cell::new(1, 0), Cell::new(0, 1)];
        let image = probe.map(|c| self.apply(other.apply(c)));
        *Transform::ALL
            .iter()
            .find(|t| probe.map(|c| t.apply(c)) == image)
            .expect("the 8 symmetries are closed under composition")
    }

    pub fn inverse(self) -> Transform {
        *Transform::ALL
            .iter()
            .find(|t| t.compose(self) == Transform::Identity)
            .expect("every symmetry has an inverse")
    }
}
