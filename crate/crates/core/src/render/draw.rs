use super::font;
use super::{round_half_up, PlotRect};
use crate::image::ImageBuffer;
use crate::Point;

fn put(buf: &mut ImageBuffer<u8>, x: i64, y: i64, color: [u8; 3], clip: Option<&PlotRect>) {
    if x < 0 || y < 0 {
        return;
    }
    if let Some(r) = clip {
        if !r.contains(x as i32, y as i32) {
            return;
        }
    }
    buf.put_rgb(x as usize, y as usize, color);
}

/// Liang-Barsky clip of a float segment to `[x0,x1]x[y0,y1]`.
fn clip_segment(a: Point, b: Point, lo: Point, hi: Point) -> Option<(Point, Point)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [
        (-dx, a.x - lo.x),
        (dx, hi.x - a.x),
        (-dy, a.y - lo.y),
        (dy, hi.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((
        Point::new(a.x + t0 * dx, a.y + t0 * dy),
        Point::new(a.x + t1 * dx, a.y + t1 * dy),
    ))
}

/// Rasterizes the segment between two float pixel positions with Bresenham's
/// algorithm. With `clip`, only pixels inside the rectangle are written.
pub fn draw_line(buf: &mut ImageBuffer<u8>, a: Point, b: Point, color: [u8; 3], clip: Option<&PlotRect>) {
    if !(a.x.is_finite() && a.y.is_finite() && b.x.is_finite() && b.y.is_finite()) {
        return;
    }
    let (lo, hi) = match clip {
        Some(r) => (
            Point::new(r.left as f64 - 0.5, r.top as f64 - 0.5),
            Point::new(r.right as f64 + 0.5, r.bottom as f64 + 0.5),
        ),
        None => (
            Point::new(-0.5, -0.5),
            Point::new(buf.width() as f64 - 0.5, buf.height() as f64 - 0.5),
        ),
    };
    let Some((a, b)) = clip_segment(a, b, lo, hi) else {
        return;
    };
    let (mut x0, mut y0) = (round_half_up(a.x), round_half_up(a.y));
    let (x1, y1) = (round_half_up(b.x), round_half_up(b.y));
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        put(buf, x0, y0, color, clip);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Fills the inclusive rectangle.
pub fn fill_rect(buf: &mut ImageBuffer<u8>, rect: PlotRect, color: [u8; 3]) {
    for y in rect.top.max(0)..=rect.bottom {
        for x in rect.left.max(0)..=rect.right {
            put(buf, x as i64, y as i64, color, None);
        }
    }
}

/// Draws `text` with its top-left corner at `(x, y)`.
pub fn draw_text(buf: &mut ImageBuffer<u8>, x: i64, y: i64, text: &str, color: [u8; 3]) {
    for (i, c) in text.chars().enumerate() {
        let ox = x + (i * font::ADVANCE) as i64;
        for col in 0..font::GLYPH_WIDTH {
            for row in 0..font::GLYPH_HEIGHT {
                if font::is_set(c, col, row) {
                    put(buf, ox + col as i64, y + row as i64, color, None);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizontal_line_is_one_row() {
        let mut b = ImageBuffer::<u8>::gray(20, 10);
        draw_line(&mut b, Point::new(2.0, 4.0), Point::new(17.0, 4.0), [255; 3], None);
        for y in 0..10 {
            for x in 0..20 {
                assert_eq!(b.get(x, y) == 255, y == 4 && (2..=17).contains(&x));
            }
        }
    }

    #[test]
    fn clipped_line_stays_inside() {
        let mut b = ImageBuffer::<u8>::gray(20, 20);
        let r = PlotRect::new(5, 5, 14, 14);
        draw_line(&mut b, Point::new(-100.0, -100.0), Point::new(100.0, 100.0), [255; 3], Some(&r));
        let mut n = 0;
        for y in 0..20 {
            for x in 0..20 {
                if b.get(x, y) == 255 {
                    assert!(r.contains(x as i32, y as i32));
                    n += 1;
                }
            }
        }
        assert_eq!(n, 10);
    }

    #[test]
    fn text_out_of_bounds_is_ignored() {
        let mut b = ImageBuffer::<u8>::gray(4, 4);
        draw_text(&mut b, -3, -3, "88", [255; 3]);
        draw_text(&mut b, 2, 2, "8", [255; 3]);
        assert!((2..4).any(|x| (2..4).any(|y| b.get(x, y) == 255)));
    }
}
