use super::{round_half_up, AxisLayout, PlotRect, RenderError};
use crate::image::ImageBuffer;

pub const SCOPE_BACKGROUND: u8 = 0;
pub const SCOPE_TRACE: u8 = 255;
pub const SCOPE_CONNECTOR: u8 = 128;

/// Sweep oscilloscope: time wraps modulo the window, the head column and the
/// one after it are cleared as the sweep advances.
#[derive(Debug, Clone, PartialEq)]
pub struct Scope {
    buffer: ImageBuffer<u8>,
    axis: AxisLayout,
    t_range: (f64, f64),
    last_column: Option<usize>,
}

impl Scope {
    /// Needs at least 2x2 pixels and non-empty ranges.
    pub fn new(width: usize, height: usize, t_range: (f64, f64), v_range: (f64, f64)) -> Result<Self, RenderError> {
        if width < 2 || height < 2 || width > i32::MAX as usize || height > i32::MAX as usize {
            return Err(RenderError::BadAxis);
        }
        let span = t_range.1 - t_range.0;
        // Column w would coincide with column 0 after wrapping, so the last
        // column carries t_min + span*(w-1)/w.
        let x_max = t_range.0 + span * (width - 1) as f64 / width as f64;
        let axis = AxisLayout::new(
            PlotRect::new(0, 0, width as i32 - 1, height as i32 - 1),
            (t_range.0, x_max),
            v_range,
        )?;
        Ok(Self {
            buffer: ImageBuffer::filled(width, height, 1, SCOPE_BACKGROUND),
            axis,
            t_range,
            last_column: None,
        })
    }

    pub fn buffer(&self) -> &ImageBuffer<u8> {
        &self.buffer
    }

    pub fn axis(&self) -> &AxisLayout {
        &self.axis
    }

    pub fn last_column(&self) -> Option<usize> {
        self.last_column
    }

    pub fn clear(&mut self) {
        self.buffer.fill(SCOPE_BACKGROUND);
        self.last_column = None;
    }

    /// Column of time `t` after wrapping into the window.
    pub fn column(&self, t: f64) -> usize {
        let (t0, t1) = self.t_range;
        let span = t1 - t0;
        let w = self.buffer.width();
        let r = (t - t0) % span;
        let tw = if r < 0.0 { r + span } else { r };
        let c = round_half_up(tw / span * w as f64);
        (c.max(0) as usize) % w
    }

    /// Row of value `v`, clamped into the buffer.
    pub fn row(&self, v: f64) -> usize {
        let y = self.axis.pixel_from_data(self.axis.x_range.0, v).y;
        round_half_up(y).clamp(0, self.buffer.height() as i64 - 1) as usize
    }

    fn clear_column(&mut self, c: usize) {
        for y in 0..self.buffer.height() {
            self.buffer.set(c, y, SCOPE_BACKGROUND);
        }
    }

    /// Plots `v` at time `t` as a vertical run from the row of `v_old` (or a
    /// single point) in `gray`. Non-finite `v` is skipped.
    pub fn set_data(&mut self, t: f64, v: f64, v_old: Option<f64>, gray: u8) {
        if !v.is_finite() || !t.is_finite() {
            return;
        }
        let w = self.buffer.width();
        let col = self.column(t);
        if self.last_column != Some(col) {
            let mut c = match self.last_column {
                Some(last) => (last + 1) % w,
                None => col,
            };
            loop {
                self.clear_column(c);
                if c == col {
                    break;
                }
                c = (c + 1) % w;
            }
            self.clear_column((col + 1) % w);
            self.last_column = Some(col);
        }
        let r1 = self.row(v);
        let r0 = v_old.filter(|o| o.is_finite()).map_or(r1, |o| self.row(o));
        for y in r0.min(r1)..=r0.max(r1) {
            self.buffer.set(col, y, gray);
        }
    }
}
