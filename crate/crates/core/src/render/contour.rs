use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{AxisLayout, RenderError};
use crate::Point;

/// `rows x cols` samples; node `(r, c)` sits at
/// `x = x_min + c*dx`, `y = y_min + r*dy`, spanning the axis ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, RenderError> {
        if rows < 2 || cols < 2 || values.len() != rows * cols || values.iter().any(|v| !v.is_finite()) {
            return Err(RenderError::BadGrid);
        }
        Ok(Self { rows, cols, values })
    }

    /// Samples `f` on a `rows x cols` lattice covering the axis window.
    pub fn sample(rows: usize, cols: usize, axis: &AxisLayout, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self, RenderError> {
        if rows < 2 || cols < 2 {
            return Err(RenderError::BadGrid);
        }
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let p = node_position(axis, rows, cols, r, c);
                values.push(f(p.x, p.y));
            }
        }
        Self::new(rows, cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }
}

fn node_position(axis: &AxisLayout, rows: usize, cols: usize, r: usize, c: usize) -> Point {
    let (x0, x1) = axis.x_range;
    let (y0, y1) = axis.y_range;
    Point::new(
        x0 + (x1 - x0) * c as f64 / (cols - 1) as f64,
        y0 + (y1 - y0) * r as f64 / (rows - 1) as f64,
    )
}

/// Horizontal edge `(r,c)-(r,c+1)` is tag 0, vertical edge `(r,c)-(r+1,c)`
/// is tag 1.
type EdgeKey = (usize, usize, u8);

struct Crossings<'a> {
    grid: &'a Grid,
    axis: &'a AxisLayout,
    points: BTreeMap<EdgeKey, Point>,
}

impl Crossings<'_> {
    fn above(&self, r: usize, c: usize) -> bool {
        self.grid.get(r, c) > 0.0
    }

    fn crosses(&self, key: EdgeKey) -> bool {
        let (r, c, tag) = key;
        let (r2, c2) = if tag == 0 { (r, c + 1) } else { (r + 1, c) };
        self.above(r, c) != self.above(r2, c2)
    }

    /// Zero crossing on the edge by linear interpolation, cached so that
    /// neighbouring cells share the exact same vertex.
    fn point(&mut self, key: EdgeKey) -> Point {
        if let Some(p) = self.points.get(&key) {
            return *p;
        }
        let (r, c, tag) = key;
        let (r2, c2) = if tag == 0 { (r, c + 1) } else { (r + 1, c) };
        let (v0, v1) = (self.grid.get(r, c), self.grid.get(r2, c2));
        let t = v0 / (v0 - v1);
        let (rows, cols) = (self.grid.rows, self.grid.cols);
        let a = node_position(self.axis, rows, cols, r, c);
        let b = node_position(self.axis, rows, cols, r2, c2);
        let p = Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        self.points.insert(key, p);
        p
    }
}

/// Marching-squares extraction of the zero level of `grid` in data
/// coordinates. Nodes with value > 0 are "above". Saddle cells are resolved
/// by the mean of their four corners. Closed loops repeat their first vertex.
pub fn contour_zero(grid: &Grid, axis: &AxisLayout) -> Vec<Vec<Point>> {
    let mut cx = Crossings {
        grid,
        axis,
        points: BTreeMap::new(),
    };
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for r in 0..grid.rows - 1 {
        for c in 0..grid.cols - 1 {
            let bottom = (r, c, 0);
            let top = (r + 1, c, 0);
            let left = (r, c, 1);
            let right = (r, c + 1, 1);
            let edges: Vec<EdgeKey> = [bottom, right, top, left]
                .into_iter()
                .filter(|&e| cx.crosses(e))
                .collect();
            match edges.len() {
                2 => segments.push((edges[0], edges[1])),
                4 => {
                    let mean = (grid.get(r, c) + grid.get(r, c + 1) + grid.get(r + 1, c) + grid.get(r + 1, c + 1)) / 4.0;
                    if (mean > 0.0) == cx.above(r, c) {
                        // (r,c) and (r+1,c+1) connect through the centre:
                        // cut off the other two corners.
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }

    let mut by_edge: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(i);
        by_edge.entry(*b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let next_from = |key: EdgeKey, used: &mut Vec<bool>| -> Option<EdgeKey> {
        let &i = by_edge.get(&key)?.iter().find(|&&i| !used[i])?;
        used[i] = true;
        let (a, b) = segments[i];
        Some(if a == key { b } else { a })
    };

    let mut out = Vec::new();
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        used[s] = true;
        let (a, b) = segments[s];
        let mut forward = vec![a, b];
        while let Some(k) = next_from(*forward.last().unwrap(), &mut used) {
            forward.push(k);
        }
        let mut backward = Vec::new();
        if forward.last() != Some(&a) {
            let mut k = a;
            while let Some(n) = next_from(k, &mut used) {
                backward.push(n);
                k = n;
            }
        }
        backward.reverse();
        backward.extend(forward);
        out.push(backward.into_iter().map(|k| cx.point(k)).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::PlotRect;

    fn axis(r: f64) -> AxisLayout {
        AxisLayout::new(PlotRect::new(0, 0, 100, 100), (-r, r), (-r, r)).unwrap()
    }

    #[test]
    fn constant_sign_grid_has_no_contour() {
        let a = axis(1.0);
        let g = Grid::sample(11, 11, &a, |_, _| 1.0).unwrap();
        assert!(contour_zero(&g, &a).is_empty());
        let g = Grid::sample(11, 11, &a, |_, _| -1.0).unwrap();
        assert!(contour_zero(&g, &a).is_empty());
    }

    #[test]
    fn linear_field_gives_one_vertical_line() {
        let a = axis(1.0);
        let g = Grid::sample(10, 10, &a, |x, _| x).unwrap();
        let lines = contour_zero(&g, &a);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 10);
        for p in &lines[0] {
            assert!(p.x.abs() < 1e-12);
        }
    }

    #[test]
    fn circle_is_closed() {
        let a = axis(2.0);
        let g = Grid::sample(41, 41, &a, |x, y| x * x + y * y - 1.0).unwrap();
        let lines = contour_zero(&g, &a);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
    }

    #[test]
    fn saddle_uses_centre_mean() {
        let a = AxisLayout::new(PlotRect::new(0, 0, 10, 10), (0.0, 1.0), (0.0, 1.0)).unwrap();
        // corners: (0,0)=+1 (0,1)=-1 (1,0)=-1 (1,1)=+3 -> mean > 0
        let g = Grid::new(2, 2, vec![1.0, -1.0, -1.0, 3.0]).unwrap();
        let lines = contour_zero(&g, &a);
        assert_eq!(lines.len(), 2);
        // positive corners join: each segment isolates a negative corner
        for l in &lines {
            let near_br = l.iter().all(|p| p.x >= 0.5 && p.y <= 0.5);
            let near_tl = l.iter().all(|p| p.x <= 0.5 && p.y >= 0.25);
            assert!(near_br || near_tl, "{l:?}");
        }
    }

    #[test]
    fn bad_grids() {
        assert_eq!(Grid::new(1, 3, vec![0.0; 3]), Err(RenderError::BadGrid));
        assert_eq!(Grid::new(2, 2, vec![0.0, 1.0, f64::NAN, 0.0]), Err(RenderError::BadGrid));
    }
}
