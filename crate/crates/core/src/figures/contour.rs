//! Marching-squares level sets on a [`ProbabilityGrid`].

use serde::Serialize;
use std::collections::BTreeMap;

use super::ProbabilityGrid;

/// All polylines of one level set, in grid coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contour {
    pub level: f64,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// A lattice edge: horizontal from `(i, j)` to `(i+1, j)` or vertical from
/// `(i, j)` to `(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

impl Edge {
    fn endpoints(self) -> ((usize, usize), (usize, usize)) {
        match self {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }
}

fn crossing(grid: &ProbabilityGrid, edge: Edge, level: f64) -> [f64; 2] {
    let ((ia, ja), (ib, jb)) = edge.endpoints();
    let (a, b) = (grid.value(ia, ja), grid.value(ib, jb));
    let t = if b == a {
        0.5
    } else {
        ((level - a) / (b - a)).clamp(0.0, 1.0)
    };
    let (xa, ya) = grid.coords(ia, ja);
    let (xb, yb) = grid.coords(ib, jb);
    [xa + t * (xb - xa), ya + t * (yb - ya)]
}

/// Extracts the `level` set with linear interpolation along cell edges.
/// Cells touching a `NaN` sample are skipped, so contours stop at the
/// domain boundary. Saddles are resolved by the cell-center average.
pub fn marching_squares(grid: &ProbabilityGrid, level: f64) -> Contour {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut segments: Vec<(Edge, Edge)> = Vec::new();

    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let c = [
                grid.value(i, j),
                grid.value(i + 1, j),
                grid.value(i + 1, j + 1),
                grid.value(i, j + 1),
            ];
            if c.iter().any(|v| v.is_nan()) {
                continue;
            }
            let case = c
                .iter()
                .enumerate()
                .fold(0u8, |acc, (bit, v)| acc | (((*v >= level) as u8) << bit));
            let bottom = Edge::H(i, j);
            let top = Edge::H(i, j + 1);
            let left = Edge::V(i, j);
            let right = Edge::V(i + 1, j);
            let center_high = || c.iter().sum::<f64>() / 4.0 >= level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((bottom, left)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if center_high() {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    } else {
                        segments.push((bottom, left));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if center_high() {
                        segments.push((bottom, left));
                        segments.push((right, top));
                    } else {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    }
                }
                _ => unreachable!("four-bit case"),
            }
        }
    }

    let polylines = chain(&segments)
        .into_iter()
        .map(|edges| {
            edges
                .into_iter()
                .map(|e| crossing(grid, e, level))
                .collect()
        })
        .collect();
    Contour { level, polylines }
}

/// Joins segments sharing an edge into maximal chains. Open chains start at
/// their smallest free end; closed loops repeat their first edge at the end.
fn chain(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut incident: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(idx);
        incident.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start: Edge, used: &mut Vec<bool>| {
        let mut line = vec![start];
        let mut at = start;
        while let Some(&seg) = incident[&at].iter().find(|&&s| !used[s]) {
            used[seg] = true;
            let (a, b) = segments[seg];
            at = if a == at { b } else { a };
            line.push(at);
        }
        line
    };

    let ends: Vec<Edge> = incident
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    for start in ends {
        if incident[&start].iter().any(|&s| !used[s]) {
            out.push(walk(start, &mut used));
        }
    }
    for (idx, seg) in segments.iter().enumerate() {
        if !used[idx] {
            out.push(walk(seg.0, &mut used));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::{FormulaId, GridAxis};
    use std::collections::BTreeMap;

    fn radial_grid(n: usize) -> ProbabilityGrid {
        let x = GridAxis::new("x", -1.0, 1.0, n);
        let y = GridAxis::new("y", -1.0, 1.0, n);
        ProbabilityGrid::sample(FormulaId::Eq4Map, x, y, "r2", BTreeMap::new(), |a, b| {
            Some(a * a + b * b)
        })
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let grid = radial_grid(41);
        let c = marching_squares(&grid, 0.25);
        assert_eq!(c.polylines.len(), 1);
        let line = &c.polylines[0];
        assert_eq!(line.first(), line.last());
        for [x, y] in line {
            // Linear interpolation of r² is exact along axis-aligned edges
            // up to the O(h²) curvature error.
            assert!(((x * x + y * y).sqrt() - 0.5).abs() < 2e-3);
        }
    }

    #[test]
    fn level_outside_range_gives_nothing() {
        let grid = radial_grid(11);
        assert!(marching_squares(&grid, 5.0).polylines.is_empty());
        assert!(marching_squares(&grid, -1.0).polylines.is_empty());
    }

    #[test]
    fn nan_cells_cut_contours_open() {
        let x = GridAxis::new("x", -1.0, 1.0, 41);
        let y = GridAxis::new("y", -1.0, 1.0, 41);
        let grid =
            ProbabilityGrid::sample(FormulaId::Eq4Map, x, y, "r2", BTreeMap::new(), |a, b| {
                (a > 0.0).then_some(a * a + b * b)
            });
        let c = marching_squares(&grid, 0.25);
        assert_eq!(c.polylines.len(), 1);
        let line = &c.polylines[0];
        assert_ne!(line.first(), line.last());
        assert!(line.iter().all(|[x, _]| *x > 0.0));
    }

    #[test]
    fn saddle_cell_resolves_to_two_segments() {
        let x = GridAxis::new("x", 0.0, 1.0, 2);
        let y = GridAxis::new("y", 0.0, 1.0, 2);
        // Corners (0,0)=1, (1,0)=0, (1,1)=1, (0,1)=0: case 5.
        let grid =
            ProbabilityGrid::sample(FormulaId::Eq4Map, x, y, "s", BTreeMap::new(), |a, b| {
                Some(if a == b { 1.0 } else { 0.0 })
            });
        let c = marching_squares(&grid, 0.5);
        assert_eq!(c.polylines.len(), 2);
        assert!(c.polylines.iter().all(|l| l.len() == 2));
    }
}
