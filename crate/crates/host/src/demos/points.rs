//! Labelled 2-D point sets edited with the mouse.

use rand::Rng;
use rand_distr::StandardNormal;
use workbench_core::automaton::{ActionCommand, ActionType, Phase};
use workbench_core::numerics::classify::nearest_neighbor;
use workbench_core::render::{AxisLayout, Figure, Marker};
use workbench_core::{ImageBuffer, Point};

pub const PLOT_SIZE: usize = 320;
/// Both axes span this window.
pub const WINDOW: (f64, f64) = (-3.0, 3.0);

pub const POSITIVE_COLOR: [u8; 3] = [200, 30, 30];
pub const NEGATIVE_COLOR: [u8; 3] = [30, 60, 200];

pub const EDIT_ACTIONS: [(&str, ActionType); 3] = [
    ("New", ActionType::Click),
    ("Delete", ActionType::Click),
    ("Move", ActionType::Drag),
];

/// Covariance of a freshly added cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance {
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

impl Default for Covariance {
    fn default() -> Self {
        Self {
            sxx: 0.1,
            syy: 0.1,
            sxy: 0.0,
        }
    }
}

impl Covariance {
    pub fn set(&mut self, key: &str, v: f64) {
        match key {
            "sxx" => self.sxx = v,
            "syy" => self.syy = v,
            "sxy" => self.sxy = v,
            _ => {}
        }
    }

    /// Lower Cholesky factor `[l11, l21, l22]`. The off-diagonal term is
    /// clamped so the matrix stays positive definite.
    pub fn cholesky(&self) -> [f64; 3] {
        let sxx = self.sxx.max(1e-9);
        let syy = self.syy.max(1e-9);
        let bound = 0.999 * (sxx * syy).sqrt();
        let sxy = self.sxy.clamp(-bound, bound);
        let l11 = sxx.sqrt();
        let l21 = sxy / l11;
        let l22 = (syy - l21 * l21).max(0.0).sqrt();
        [l11, l21, l22]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Points {
    pub x: Vec<Vec<f64>>,
    pub t: Vec<f64>,
    dragging: Option<usize>,
}

impl Points {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn clear(&mut self) {
        self.x.clear();
        self.t.clear();
        self.dragging = None;
    }

    pub fn count(&self, label: f64) -> usize {
        self.t.iter().filter(|&&t| t == label).count()
    }

    pub fn push(&mut self, p: Point, label: f64) {
        self.x.push(vec![p.x, p.y]);
        self.t.push(label);
    }

    /// Adds `n` samples of a Gaussian centred at `center`.
    pub fn add_cluster(&mut self, rng: &mut impl Rng, center: Point, n: usize, cov: &Covariance, label: f64) {
        let [l11, l21, l22] = cov.cholesky();
        for _ in 0..n {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            self.push(Point::new(center.x + l11 * z1, center.y + l21 * z1 + l22 * z2), label);
        }
    }

    pub fn delete_nearest(&mut self, p: Point) -> bool {
        match nearest_neighbor(&self.x, &[p.x, p.y]) {
            Ok(i) => {
                self.x.remove(i);
                self.t.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    /// Applies one New/Delete/Move command. Returns whether the set changed.
    pub fn edit(&mut self, cmd: &ActionCommand, rng: &mut impl Rng, n_new: usize, cov: &Covariance, label: f64) -> bool {
        match (cmd.action.as_str(), cmd.phase) {
            ("New", Phase::Click) => {
                self.add_cluster(rng, cmd.pos, n_new, cov, label);
                true
            }
            ("Delete", Phase::Click) => self.delete_nearest(cmd.pos),
            ("Move", Phase::DragInit) => {
                self.dragging = nearest_neighbor(&self.x, &[cmd.pos.x, cmd.pos.y]).ok();
                self.move_dragged(cmd.pos)
            }
            ("Move", Phase::DragMove) => self.move_dragged(cmd.pos),
            ("Move", Phase::DragFinish) => {
                let moved = self.move_dragged(cmd.pos);
                self.dragging = None;
                moved
            }
            _ => false,
        }
    }

    fn move_dragged(&mut self, p: Point) -> bool {
        match self.dragging.and_then(|i| self.x.get_mut(i)) {
            Some(row) => {
                *row = vec![p.x, p.y];
                true
            }
            None => false,
        }
    }

    /// Scatter of both classes on a fresh figure.
    pub fn figure(&self, title: &str) -> Figure {
        let mut fig = Figure::new(PLOT_SIZE, PLOT_SIZE, WINDOW, WINDOW).expect("valid window");
        fig.set_title(title);
        for (label, marker, color) in [
            (1.0, Marker::Circle, POSITIVE_COLOR),
            (-1.0, Marker::Cross, NEGATIVE_COLOR),
        ] {
            let (xs, ys): (Vec<f64>, Vec<f64>) = self
                .x
                .iter()
                .zip(&self.t)
                .filter(|(_, &t)| t == label)
                .map(|(p, _)| (p[0], p[1]))
                .unzip();
            let _ = fig.plot_scatter(&xs, &ys, marker, color);
        }
        fig
    }
}

/// Rasterizes a figure into raw samples for an `[0,255]` image widget.
pub fn rasterize(fig: &Figure) -> (ImageBuffer<f64>, AxisLayout) {
    let (img, axis) = fig.render();
    (img.map(f64::from), axis)
}

pub fn parse_label(s: &str) -> f64 {
    if s.trim() == "-1" {
        -1.0
    } else {
        1.0
    }
}
