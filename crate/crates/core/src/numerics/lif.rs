//! Leaky integrate-and-fire neuron, explicit Euler.
//!
//! `tau dv/dt = -v + I(t)` with `I = I0 + noise`, noise ~ N(0, sigma^2)
//! drawn by the caller. Crossing `theta` emits a spike of height `v_spike`
//! and resets `v` to 0.

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum LifError {
    #[error("dt must be positive and finite, got {0}")]
    BadDt(f64),
    #[error("tau must be positive and finite, got {0}")]
    BadTau(f64),
    #[error("sigma must be non-negative and finite, got {0}")]
    BadSigma(f64),
    #[error("non-finite parameter")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifParams {
    /// Membrane time constant (ms).
    pub tau: f64,
    pub i0: f64,
    pub sigma: f64,
    pub theta: f64,
    pub v_spike: f64,
    /// Time step (ms).
    pub dt: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        Self {
            tau: 10.0,
            i0: 2.0,
            sigma: 0.0,
            theta: 1.0,
            v_spike: 2.0,
            dt: 0.01,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<(), LifError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(LifError::BadDt(self.dt));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(LifError::BadTau(self.tau));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(LifError::BadSigma(self.sigma));
        }
        if !(self.i0.is_finite() && self.theta.is_finite() && self.v_spike.is_finite()) {
            return Err(LifError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LifState {
    /// Dendritic potential.
    pub v: f64,
    /// Time (ms).
    pub t: f64,
}

/// One Euler step; returns the new state and the spike output (0 or
/// `v_spike`). The threshold test follows the update.
pub fn lif_step(state: &LifState, p: &LifParams, noise: f64) -> (LifState, f64) {
    let input = p.i0 + noise;
    let mut v = state.v + (input - state.v) / p.tau * p.dt;
    let mut spike = 0.0;
    if v >= p.theta {
        spike = p.v_spike;
        v = 0.0;
    }
    (LifState { v, t: state.t + p.dt }, spike)
}
