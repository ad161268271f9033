//! Small dense linear algebra with compensated accumulation.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch")]
    Dimension,
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from equal-length rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Dimension);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension);
        }
        let ot = other.transpose();
        Ok(Self::from_fn(self.rows, other.cols, |i, j| dot2(self.row(i), ot.row(j))))
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if self.cols != x.len() {
            return Err(LinalgError::Dimension);
        }
        Ok((0..self.rows).map(|i| dot2(self.row(i), x)).collect())
    }

    /// `A^T A`.
    pub fn gram(&self) -> Self {
        let t = self.transpose();
        Self::from_fn(self.cols, self.cols, |i, j| dot2(t.row(i), t.row(j)))
    }

    /// `A A^T`.
    pub fn outer_gram(&self) -> Self {
        Self::from_fn(self.rows, self.rows, |i, j| dot2(self.row(i), self.row(j)))
    }

    pub fn add_diagonal(&mut self, lambda: f64) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += lambda;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(libm::fabs(*v)))
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Error-free product: `a*b = p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

/// Error-free sum: `a+b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Dot product in twice the working precision (Ogita, Rump, Oishi).
pub fn dot2(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut s = 0.0;
    let mut c = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (p, e) = two_prod(*a, *b);
        let (t, q) = two_sum(s, p);
        s = t;
        c += q + e;
    }
    s + c
}

/// Compensated summation.
pub fn sum2(x: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for v in x {
        let (t, q) = two_sum(s, v);
        s = t;
        c += q;
    }
    s + c
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self, LinalgError> {
        if a.rows != a.cols {
            return Err(LinalgError::Dimension);
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tol = n as f64 * f64::EPSILON * a.max_abs();
        for k in 0..n {
            let mut p = k;
            let mut best = libm::fabs(lu[(k, k)]);
            for i in k + 1..n {
                let v = libm::fabs(lu[(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tol) {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves `A x = b` by LU with a few rounds of iterative refinement whose
/// residual is evaluated with `dot2`.
pub fn solve_refined(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if a.rows != b.len() {
        return Err(LinalgError::Dimension);
    }
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    for _ in 0..4 {
        let r: Vec<f64> = (0..a.rows)
            .map(|i| {
                let mut row = a.row(i).to_vec();
                row.push(-1.0);
                let mut xb = x.clone();
                xb.push(b[i]);
                -dot2(&row, &xb)
            })
            .collect();
        let d = lu.solve(&r);
        if d.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::Singular);
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::Singular);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn two_prod_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let (p, e) = two_prod(a, a);
        assert_eq!(p, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(e, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn dot2_survives_cancellation() {
        let x = [1e16, 1.0, -1e16];
        let y = [1.0, 1.0, 1.0];
        assert_eq!(dot2(&x, &y), 1.0);
        assert_eq!(sum2([1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn solve_small_system() {
        let a = m(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]);
        let x = solve_refined(&a, &[5.0, 3.0, 6.0]).unwrap();
        let want = [1.4, 1.6, 1.8];
        for (g, w) in x.iter().zip(want) {
            assert!((g - w).abs() < 1e-14, "{x:?}");
        }
    }

    #[test]
    fn singular_detected() {
        let a = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(solve_refined(&a, &[1.0, 2.0]), Err(LinalgError::Singular));
        assert_eq!(Lu::factor(&Matrix::zeros(2, 2)).err(), Some(LinalgError::Singular));
    }

    #[test]
    fn gram_and_transpose() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        assert_eq!(a.gram(), a.transpose().matmul(&a).unwrap());
        assert_eq!(a.outer_gram(), a.matmul(&a.transpose()).unwrap());
        assert_eq!(a.gram()[(0, 1)], 44.0);
        assert_eq!(a.matvec(&[1.0, 1.0]).unwrap(), [3.0, 7.0, 11.0]);
        assert_eq!(a.matvec(&[1.0]), Err(LinalgError::Dimension));
    }
}
