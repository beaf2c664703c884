//! Deterministic SVG rendering of a polyomino with its holes: cells filled
//! gray, hole cells white, hole boundary loops stroked (deep holes solid,
//! shallow holes dashed).

use std::fmt::Write;

use crate::grid::Polyomino;
use crate::topology;

const SHAPE_FILL: &str = "#b8b8b8";
const GRID_STROKE: &str = "#444444";
const DEEP_STROKE: &str = "#c72e2e";
const SHALLOW_STROKE: &str = "#3465a4";

/// Render to an SVG document. Byte output is a pure function of the
/// polyomino and the cell size.
pub fn render(p: &Polyomino, cell_px: u32) -> String {
    assert!(cell_px >= 1, "cell size must be at least one pixel");
    let report = topology::analyze(p);
    let s = cell_px as i64;
    let margin = s; // one cell of padding on every side
    let width = p.width() as i64 * s + 2 * margin;
    let height = p.height() as i64 * s + 2 * margin;
    // Grid y points up, SVG y points down:
    let py = |gy: i64| margin + (p.height() as i64 - gy) * s;
    let px = |gx: i64| margin + gx * s;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "<!-- grid coordinates are y-up; pixel y = margin + (height_cells - y) * cell -->"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    );

    for c in p.cells() {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" fill=\"{SHAPE_FILL}\" \
             stroke=\"{GRID_STROKE}\" stroke-width=\"1\"/>",
            px(c.x as i64),
            py(c.y as i64 + 1),
        );
    }
    for hole in &report.holes {
        for c in &hole.cells {
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{s}\" height=\"{s}\" fill=\"#ffffff\" \
                 stroke=\"{GRID_STROKE}\" stroke-width=\"1\"/>",
                px(c.x as i64),
                py(c.y as i64 + 1),
            );
        }
    }
    for hole in &report.holes {
        let mut path = String::new();
        for (i, &(vx, vy)) in hole.boundary.vertices.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{} {} ", px(vx as i64), py(vy as i64));
        }
        path.push('Z');
        let style = if hole.deep {
            format!("stroke=\"{DEEP_STROKE}\" stroke-width=\"3\"")
        } else {
            format!("stroke=\"{SHALLOW_STROKE}\" stroke-width=\"2\" stroke-dasharray=\"4 3\"")
        };
        let _ = writeln!(out, "<path d=\"{path}\" fill=\"none\" {style}/>");
    }
    out.push_str("</svg>\n");
    out
}
