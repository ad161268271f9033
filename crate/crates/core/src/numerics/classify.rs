//! Two-class discriminants: regularized least squares and a one-hidden-layer
//! kernel network whose hidden units sit on the training points.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::linalg::{dot2, solve_refined, LinalgError, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("empty data")]
    EmptyData,
    #[error("singular; increase lambda")]
    Singular,
    #[error("bad kernel")]
    BadKernel,
    #[error("sigma must be positive")]
    BadSigma,
    #[error("lambda must be non-negative")]
    BadLambda,
    #[error("dimension mismatch")]
    Dimension,
}

impl From<LinalgError> for ClassifyError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Singular => ClassifyError::Singular,
            LinalgError::Dimension => ClassifyError::Dimension,
        }
    }
}

/// `N x (D+1)` matrix whose first column is all ones and the rest is `x`.
pub fn build_design_matrix(x: &[Vec<f64>]) -> Result<Matrix, ClassifyError> {
    let d = x.first().map_or(0, Vec::len);
    if x.is_empty() || d == 0 {
        return Err(ClassifyError::EmptyData);
    }
    if x.iter().any(|r| r.len() != d) {
        return Err(ClassifyError::Dimension);
    }
    Ok(Matrix::from_fn(x.len(), d + 1, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] }))
}

fn extend(x: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(x.len() + 1);
    v.push(1.0);
    v.extend_from_slice(x);
    v
}

fn check_inputs(x: &[Vec<f64>], t: &[f64], lambda: f64) -> Result<Matrix, ClassifyError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(ClassifyError::BadLambda);
    }
    let phi = build_design_matrix(x)?;
    if t.len() != x.len() {
        return Err(ClassifyError::Dimension);
    }
    Ok(phi)
}

/// Solves `(Phi^T Phi + lambda I) w = Phi^T T`.
pub fn fit_least_squares(x: &[Vec<f64>], t: &[f64], lambda: f64) -> Result<ClassifierModel, ClassifyError> {
    let phi = check_inputs(x, t, lambda)?;
    let mut a = phi.gram();
    a.add_diagonal(lambda);
    let rhs = phi.transpose().matvec(t)?;
    let w = solve_refined(&a, &rhs)?;
    Ok(ClassifierModel::LeastSquares { w, lambda })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelKind {
    #[default]
    Linear,
    Tanh,
    Gauss,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [KernelKind::Linear, KernelKind::Tanh, KernelKind::Gauss];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Tanh => "tanh",
            KernelKind::Gauss => "gauss",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, ClassifyError> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(ClassifyError::BadKernel)
    }
}

/// Hidden-layer activation applied to an inner product `a`.
pub fn kernel_activation(a: f64, kind: KernelKind, sigma: f64) -> f64 {
    match kind {
        KernelKind::Linear => a,
        KernelKind::Tanh => libm::tanh(a / sigma),
        KernelKind::Gauss => 1.0 - libm::exp(-a * a / (2.0 * sigma)),
    }
}

/// Solves `(h(Phi Phi^T) + lambda I) w = T`. The regularizer is added after
/// the activation so the system stays symmetric.
pub fn fit_kernel_mlp(
    x: &[Vec<f64>],
    t: &[f64],
    kernel: KernelKind,
    sigma: f64,
    lambda: f64,
) -> Result<ClassifierModel, ClassifyError> {
    let phi = check_inputs(x, t, lambda)?;
    if kernel != KernelKind::Linear && !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ClassifyError::BadSigma);
    }
    let mut h = phi.outer_gram().map(|a| kernel_activation(a, kernel, sigma));
    h.add_diagonal(lambda);
    let w = solve_refined(&h, t)?;
    Ok(ClassifierModel::KernelMlp {
        w,
        phi,
        kernel,
        sigma,
        lambda,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierModel {
    LeastSquares {
        w: Vec<f64>,
        lambda: f64,
    },
    KernelMlp {
        w: Vec<f64>,
        phi: Matrix,
        kernel: KernelKind,
        sigma: f64,
        lambda: f64,
    },
}

impl ClassifierModel {
    pub fn weights(&self) -> &[f64] {
        match self {
            ClassifierModel::LeastSquares { w, .. } | ClassifierModel::KernelMlp { w, .. } => w,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            ClassifierModel::LeastSquares { lambda, .. } | ClassifierModel::KernelMlp { lambda, .. } => *lambda,
        }
    }

    /// Real-valued output `y(x)`; the input has length `D`.
    pub fn discriminant(&self, x: &[f64]) -> f64 {
        let fx = extend(x);
        match self {
            ClassifierModel::LeastSquares { w, .. } => dot2(w, &fx),
            ClassifierModel::KernelMlp {
                w, phi, kernel, sigma, ..
            } => {
                let hidden: Vec<f64> = (0..phi.rows())
                    .map(|n| kernel_activation(dot2(phi.row(n), &fx), *kernel, *sigma))
                    .collect();
                dot2(w, &hidden)
            }
        }
    }

    /// `+1` iff `y(x) >= 0`.
    pub fn classify(&self, x: &[f64]) -> f64 {
        if self.discriminant(x) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Number of samples whose predicted class differs from the target.
pub fn count_errors(model: &ClassifierModel, x: &[Vec<f64>], t: &[f64]) -> usize {
    x.iter().zip(t).filter(|(xn, tn)| model.classify(xn) != **tn).count()
}

/// Index of the row closest to `p`; ties resolve to the lowest index.
pub fn nearest_neighbor(x: &[Vec<f64>], p: &[f64]) -> Result<usize, ClassifyError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in x.iter().enumerate() {
        let d: f64 = row.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i).ok_or(ClassifyError::EmptyData)
}
