//! Software rendering: pixel/data transforms, a sweep oscilloscope, a small
//! plot renderer and zero-level contour extraction.

mod contour;
mod draw;
mod figure;
pub mod font;
mod scope;

pub use contour::{contour_zero, Grid};
pub use draw::{draw_line, draw_text, fill_rect};
pub use figure::{Figure, Marker, BLACK, WHITE};
pub use scope::{Scope, SCOPE_BACKGROUND, SCOPE_CONNECTOR, SCOPE_TRACE};

use crate::Point;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("bad axis: plot rect and ranges must be non-degenerate")]
    BadAxis,
    #[error("grid must have at least 2x2 finite values in a rectangle")]
    BadGrid,
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// Plot rectangle in buffer pixels; `right`/`bottom` are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlotRect {
    pub left: i32,
    pub top: i32,
    pub right: i32,
    pub bottom: i32,
}

impl PlotRect {
    pub const fn new(left: i32, top: i32, right: i32, bottom: i32) -> Self {
        Self {
            left,
            top,
            right,
            bottom,
        }
    }

    pub fn contains(&self, x: i32, y: i32) -> bool {
        x >= self.left && x <= self.right && y >= self.top && y <= self.bottom
    }
}

/// Affine map between a plot rectangle and a data window. The left/right
/// pixel columns carry `x_min`/`x_max`; the bottom/top rows carry
/// `y_min`/`y_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxisLayout {
    pub plot_rect: PlotRect,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl AxisLayout {
    pub fn new(plot_rect: PlotRect, x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self, RenderError> {
        let a = Self {
            plot_rect,
            x_range,
            y_range,
        };
        a.check()?;
        Ok(a)
    }

    fn check(&self) -> Result<(), RenderError> {
        let r = &self.plot_rect;
        let finite = [self.x_range.0, self.x_range.1, self.y_range.0, self.y_range.1]
            .iter()
            .all(|v| v.is_finite());
        if r.right > r.left && r.bottom > r.top && finite && self.x_range.1 > self.x_range.0 && self.y_range.1 > self.y_range.0 {
            Ok(())
        } else {
            Err(RenderError::BadAxis)
        }
    }

    pub fn data_from_pixel(&self, px: f64, py: f64) -> Point {
        let r = &self.plot_rect;
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        Point::new(
            x0 + (px - r.left as f64) / (r.right - r.left) as f64 * (x1 - x0),
            y0 + (r.bottom as f64 - py) / (r.bottom - r.top) as f64 * (y1 - y0),
        )
    }

    pub fn pixel_from_data(&self, x: f64, y: f64) -> Point {
        let r = &self.plot_rect;
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        Point::new(
            r.left as f64 + (x - x0) / (x1 - x0) * (r.right - r.left) as f64,
            r.bottom as f64 - (y - y0) / (y1 - y0) * (r.bottom - r.top) as f64,
        )
    }

    /// Nearest pixel (half-up rounding).
    pub fn pixel_index(&self, x: f64, y: f64) -> (i64, i64) {
        let p = self.pixel_from_data(x, y);
        (round_half_up(p.x), round_half_up(p.y))
    }
}

/// Checked free-function form of [`AxisLayout::data_from_pixel`].
pub fn data_from_pixel(px: f64, py: f64, axis: &AxisLayout) -> Result<Point, RenderError> {
    axis.check()?;
    Ok(axis.data_from_pixel(px, py))
}

/// Checked free-function form of [`AxisLayout::pixel_from_data`].
pub fn pixel_from_data(x: f64, y: f64, axis: &AxisLayout) -> Result<Point, RenderError> {
    axis.check()?;
    Ok(axis.pixel_from_data(x, y))
}

pub(crate) fn round_half_up(v: f64) -> i64 {
    libm::floor(v + 0.5) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn axis() -> AxisLayout {
        AxisLayout::new(PlotRect::new(50, 20, 350, 220), (0.0, 10.0), (0.0, 1.0)).unwrap()
    }

    #[test]
    fn corner_and_centre_examples() {
        let a = axis();
        assert_eq!(a.data_from_pixel(50.0, 220.0), Point::new(0.0, 0.0));
        assert_eq!(a.data_from_pixel(350.0, 20.0), Point::new(10.0, 1.0));
        assert_eq!(a.data_from_pixel(200.0, 120.0), Point::new(5.0, 0.5));
        assert_eq!(a.pixel_from_data(0.0, 0.0), Point::new(50.0, 220.0));
    }

    #[test]
    fn degenerate_axis_is_rejected() {
        assert_eq!(
            AxisLayout::new(PlotRect::new(50, 20, 50, 220), (0.0, 1.0), (0.0, 1.0)),
            Err(RenderError::BadAxis)
        );
        let mut bad = axis();
        bad.y_range = (1.0, 1.0);
        assert_eq!(data_from_pixel(0.0, 0.0, &bad), Err(RenderError::BadAxis));
        assert!(RenderError::BadAxis.to_string().contains("bad axis"));
    }

    #[test]
    fn row_decreases_with_y() {
        let a = axis();
        assert!(a.pixel_from_data(0.0, 0.2).y > a.pixel_from_data(0.0, 0.3).y);
    }
}
