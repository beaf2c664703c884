//! Deep holes in polyominoes.
//!
//! A *deep hole* is a bounded complement component of a polyomino whose
//! boundary lattice points are disjoint from the outer boundary and from
//! every other hole's boundary. This crate provides:
//!
//! * [`grid`] — the polyomino data model with ASCII and JSON formats,
//! * [`topology`] — boundary tracing, hole extraction, deep-hole
//!   classification, lattice-point and edge censuses, and the identity /
//!   inequality checks,
//! * [`formulas`] — exact integer evaluation of the band decomposition, the
//!   construction's deep-hole count `f_n`, closed-form bounds, and the
//!   exactness verdict for the maximum count `h_n`,
//! * [`constructor`] — the extremal construction, certified by the topology
//!   census for every produced shape,
//! * [`oracle`] — exhaustive ground truth over all fixed n-ominoes,
//! * [`svg`] — a deterministic SVG renderer.

pub mod constructor;
pub mod formulas;
pub mod grid;
pub mod oracle;
pub mod svg;
pub mod topology;

pub use grid::{Cell, GridError, Polyomino, Transform};
