use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::draw::{draw_line, draw_text, fill_rect};
use super::{font, AxisLayout, PlotRect, RenderError};
use crate::image::ImageBuffer;
use crate::Point;

const MARGIN_LEFT: i32 = 45;
const MARGIN_RIGHT: i32 = 10;
const MARGIN_TOP: i32 = 15;
const MARGIN_BOTTOM: i32 = 25;
const TICK_LEN: i32 = 3;
const MARKER_RADIUS: i64 = 3;

pub const WHITE: [u8; 3] = [255, 255, 255];
pub const BLACK: [u8; 3] = [0, 0, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Cross,
    Circle,
    Square,
    Dot,
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Line { pts: Vec<Point>, color: [u8; 3] },
    Scatter { pts: Vec<Point>, marker: Marker, color: [u8; 3] },
    Text { at: Point, text: String, color: [u8; 3] },
}

/// A single-axes plot rasterized on demand by [`Figure::render`].
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    width: usize,
    height: usize,
    axis: AxisLayout,
    nticks: (usize, usize),
    title: String,
    items: Vec<Item>,
}

impl Figure {
    /// Figure with default margins around the plot rectangle.
    pub fn new(width: usize, height: usize, x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self, RenderError> {
        let rect = PlotRect::new(
            MARGIN_LEFT,
            MARGIN_TOP,
            width as i32 - 1 - MARGIN_RIGHT,
            height as i32 - 1 - MARGIN_BOTTOM,
        );
        Self::with_plot_rect(width, height, rect, x_range, y_range)
    }

    pub fn with_plot_rect(
        width: usize,
        height: usize,
        rect: PlotRect,
        x_range: (f64, f64),
        y_range: (f64, f64),
    ) -> Result<Self, RenderError> {
        if rect.left < 0 || rect.top < 0 || rect.right as usize >= width || rect.bottom as usize >= height {
            return Err(RenderError::BadAxis);
        }
        Ok(Self {
            width,
            height,
            axis: AxisLayout::new(rect, x_range, y_range)?,
            nticks: (5, 5),
            title: String::new(),
            items: Vec::new(),
        })
    }

    pub fn axis(&self) -> &AxisLayout {
        &self.axis
    }

    pub fn set_ticks(&mut self, nx: usize, ny: usize) {
        self.nticks = (nx, ny);
    }

    pub fn set_title(&mut self, title: impl Into<String>) {
        self.title = title.into();
    }

    /// Removes all plotted series and texts.
    pub fn clear(&mut self) {
        self.items.clear();
    }

    fn zip(xs: &[f64], ys: &[f64]) -> Result<Vec<Point>, RenderError> {
        if xs.len() != ys.len() {
            return Err(RenderError::LengthMismatch(xs.len(), ys.len()));
        }
        Ok(xs.iter().zip(ys).map(|(&x, &y)| Point::new(x, y)).collect())
    }

    pub fn plot_line(&mut self, xs: &[f64], ys: &[f64], color: [u8; 3]) -> Result<(), RenderError> {
        let pts = Self::zip(xs, ys)?;
        self.plot_polyline(pts, color);
        Ok(())
    }

    pub fn plot_polyline(&mut self, pts: Vec<Point>, color: [u8; 3]) {
        if !pts.is_empty() {
            self.items.push(Item::Line { pts, color });
        }
    }

    pub fn plot_scatter(&mut self, xs: &[f64], ys: &[f64], marker: Marker, color: [u8; 3]) -> Result<(), RenderError> {
        let pts = Self::zip(xs, ys)?;
        if !pts.is_empty() {
            self.items.push(Item::Scatter { pts, marker, color });
        }
        Ok(())
    }

    /// Text whose top-left corner sits at data position `(x, y)`.
    pub fn text(&mut self, x: f64, y: f64, text: impl Into<String>, color: [u8; 3]) {
        self.items.push(Item::Text {
            at: Point::new(x, y),
            text: text.into(),
            color,
        });
    }

    fn draw_marker(&self, buf: &mut ImageBuffer<u8>, p: Point, marker: Marker, color: [u8; 3]) {
        let (cx, cy) = self.axis.pixel_index(p.x, p.y);
        let rect = &self.axis.plot_rect;
        let r = MARKER_RADIUS;
        let mut put = |x: i64, y: i64| {
            if x >= 0 && y >= 0 && rect.contains(x as i32, y as i32) {
                buf.put_rgb(x as usize, y as usize, color);
            }
        };
        match marker {
            Marker::Cross => {
                for d in -r..=r {
                    put(cx + d, cy);
                    put(cx, cy + d);
                }
            }
            Marker::Square => {
                for d in -r..=r {
                    put(cx + d, cy - r);
                    put(cx + d, cy + r);
                    put(cx - r, cy + d);
                    put(cx + r, cy + d);
                }
            }
            Marker::Circle => {
                for dy in -r..=r {
                    for dx in -r..=r {
                        let d = libm::sqrt((dx * dx + dy * dy) as f64);
                        if libm::fabs(d - r as f64) < 0.5 {
                            put(cx + dx, cy + dy);
                        }
                    }
                }
            }
            Marker::Dot => {
                for (dx, dy) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                    put(cx + dx, cy + dy);
                }
            }
        }
    }

    fn draw_frame(&self, buf: &mut ImageBuffer<u8>) {
        let r = self.axis.plot_rect;
        let corners = [
            (r.left, r.top),
            (r.right, r.top),
            (r.right, r.bottom),
            (r.left, r.bottom),
            (r.left, r.top),
        ];
        for w in corners.windows(2) {
            let a = Point::new(w[0].0 as f64, w[0].1 as f64);
            let b = Point::new(w[1].0 as f64, w[1].1 as f64);
            draw_line(buf, a, b, BLACK, None);
        }
        let (x0, x1) = self.axis.x_range;
        let (y0, y1) = self.axis.y_range;
        if self.nticks.0 >= 2 {
            let n = self.nticks.0;
            let step = (x1 - x0) / (n - 1) as f64;
            for i in 0..n {
                let v = x0 + step * i as f64;
                let px = self.axis.pixel_index(v, y0).0;
                let bottom = r.bottom as f64;
                draw_line(
                    buf,
                    Point::new(px as f64, bottom),
                    Point::new(px as f64, bottom + TICK_LEN as f64),
                    BLACK,
                    None,
                );
                let label = tick_label(v, step);
                let w = font::text_width(&label) as i64;
                draw_text(buf, px - w / 2, (r.bottom + TICK_LEN + 2) as i64, &label, BLACK);
            }
        }
        if self.nticks.1 >= 2 {
            let n = self.nticks.1;
            let step = (y1 - y0) / (n - 1) as f64;
            for i in 0..n {
                let v = y0 + step * i as f64;
                let py = self.axis.pixel_index(x0, v).1;
                let left = r.left as f64;
                draw_line(
                    buf,
                    Point::new(left - TICK_LEN as f64, py as f64),
                    Point::new(left, py as f64),
                    BLACK,
                    None,
                );
                let label = tick_label(v, step);
                let w = font::text_width(&label) as i64;
                draw_text(
                    buf,
                    (r.left - TICK_LEN - 2) as i64 - w,
                    py - (font::GLYPH_HEIGHT / 2) as i64,
                    &label,
                    BLACK,
                );
            }
        }
        if !self.title.is_empty() {
            let w = font::text_width(&self.title) as i64;
            let cx = (r.left + r.right) as i64 / 2;
            draw_text(buf, cx - w / 2, ((r.top - font::GLYPH_HEIGHT as i32) / 2) as i64, &self.title, BLACK);
        }
    }

    /// Rasterizes the figure into a fresh RGB buffer.
    pub fn render(&self) -> (ImageBuffer<u8>, AxisLayout) {
        let mut buf = ImageBuffer::rgb(self.width, self.height);
        fill_rect(
            &mut buf,
            PlotRect::new(0, 0, self.width as i32 - 1, self.height as i32 - 1),
            WHITE,
        );
        self.draw_frame(&mut buf);
        let clip = self.axis.plot_rect;
        for item in &self.items {
            match item {
                Item::Line { pts, color } => {
                    if pts.len() == 1 {
                        let p = self.axis.pixel_from_data(pts[0].x, pts[0].y);
                        draw_line(&mut buf, p, p, *color, Some(&clip));
                    }
                    for w in pts.windows(2) {
                        let a = self.axis.pixel_from_data(w[0].x, w[0].y);
                        let b = self.axis.pixel_from_data(w[1].x, w[1].y);
                        draw_line(&mut buf, a, b, *color, Some(&clip));
                    }
                }
                Item::Scatter { pts, marker, color } => {
                    for p in pts {
                        if p.x.is_finite() && p.y.is_finite() {
                            self.draw_marker(&mut buf, *p, *marker, *color);
                        }
                    }
                }
                Item::Text { at, text, color } => {
                    let (x, y) = self.axis.pixel_index(at.x, at.y);
                    draw_text(&mut buf, x, y, text, *color);
                }
            }
        }
        (buf, self.axis)
    }
}

fn tick_label(v: f64, step: f64) -> String {
    let step = libm::fabs(step);
    let decimals = if step >= 1.0 {
        0
    } else if step >= 0.1 {
        1
    } else if step >= 0.01 {
        2
    } else {
        3
    };
    let s = format!("{:.*}", decimals, v);
    // "-0", "-0.0" and friends
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        String::from(&s[1..])
    } else {
        s
    }
}
