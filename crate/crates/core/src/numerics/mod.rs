//! Numerics behind the bundled demos.

pub mod classify;
pub mod lif;
pub mod linalg;

/// One step of `x(t+1) = decay * x(t)`.
pub fn decay_step(x: f64, decay: f64) -> f64 {
    decay * x
}
