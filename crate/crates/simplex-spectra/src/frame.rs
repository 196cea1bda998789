//! Canonical regular simplex frames: n unit vectors in R^{n-1} with
//! pairwise inner products -1/(n-1) and tight-frame constant n/(n-1).

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("regular simplex frames require n >= 3, got {0}")]
    TooFewVertices(usize),
}

/// The canonical regular simplex frame for `n` vertices.
///
/// `matrix` is (n-1) x n with unit columns `w_1 .. w_n`. The construction
/// is deterministic, so equal `n` always yields bit-identical frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    n: usize,
    matrix: DMatrix<f64>,
}

impl Frame {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension of the frame vectors, n - 1.
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.matrix.column(i).into_owned()
    }

    /// Gram matrix W^T W, equal to (n/(n-1)) (I - J/n).
    pub fn gram(&self) -> DMatrix<f64> {
        self.matrix.transpose() * &self.matrix
    }
}

/// Builds the canonical frame: the centered standard basis `e_i - 1/n`
/// expressed in a fixed orthonormal basis of the orthogonal complement of
/// `1_n`, with columns rescaled to unit norm.
pub fn build_frame(n: usize) -> Result<Frame, FrameError> {
    if n < 3 {
        return Err(FrameError::TooFewVertices(n));
    }
    // Gram-Schmidt over the centered basis vectors, in index order; the
    // first n-1 of them already span the complement of 1_n.
    let centered = |i: usize| {
        DVector::from_fn(n, |r, _| if r == i { 1.0 - 1.0 / n as f64 } else { -1.0 / n as f64 })
    };
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let mut q = centered(i);
        for b in &basis {
            let proj = b.dot(&q);
            q -= b * proj;
        }
        // one re-orthogonalization pass keeps the basis orthonormal to
        // working precision
        for b in &basis {
            let proj = b.dot(&q);
            q -= b * proj;
        }
        q /= q.norm();
        basis.push(q);
    }

    let scale = ((n as f64 - 1.0) / n as f64).sqrt();
    let mut w = DMatrix::<f64>::zeros(n - 1, n);
    for col in 0..n {
        let c = centered(col);
        for row in 0..n - 1 {
            w[(row, col)] = basis[row].dot(&c) / scale;
        }
    }
    Ok(Frame { n, matrix: w })
}
