//! Dense real symmetric tensors of order m with the contractions
//! S v^m, S v^{m-1} and S v^{m-2}, plus construction as a sum of m-th
//! outer powers of frame vectors.

use crate::frame::Frame;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("tensor order must be at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error("dense tensor of dimension {d} and order {m} exceeds the 1e8 entry guard")]
    TooLarge { d: usize, m: usize },
    #[error("vector has dimension {got}, tensor expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

const MAX_ENTRIES: usize = 100_000_000;

/// Dense symmetric tensor. Entries are stored for all d^m multi-indices
/// in row-major order; when built from a frame the generating frame is
/// kept so contractions can use the O(n d) rank-one-sum path.
#[derive(Debug, Clone)]
pub struct SymTensor {
    m: usize,
    d: usize,
    entries: Vec<f64>,
    frame: Option<Frame>,
}

fn checked_len(d: usize, m: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..m {
        len = len.checked_mul(d)?;
        if len > MAX_ENTRIES {
            return None;
        }
    }
    Some(len)
}

impl SymTensor {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn entry(&self, idx: &[usize]) -> f64 {
        self.entries[self.offset(idx)]
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.m);
        idx.iter().fold(0, |acc, &i| acc * self.d + i)
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<(), TensorError> {
        if v.len() != self.d {
            return Err(TensorError::DimensionMismatch {
                got: v.len(),
                expected: self.d,
            });
        }
        Ok(())
    }

    /// Builds S = sum_i w_i^{outer m} from a regular simplex frame.
    pub fn from_frame(frame: &Frame, m: usize) -> Result<Self, TensorError> {
        if m < 3 {
            return Err(TensorError::OrderTooSmall(m));
        }
        let d = frame.dim();
        let len = checked_len(d, m).ok_or(TensorError::TooLarge { d, m })?;
        let w = frame.matrix();
        let n = frame.n();
        let mut entries = vec![0.0; len];
        let mut idx = vec![0usize; m];
        let mut sorted = vec![0usize; m];
        for pos in 0..len {
            // evaluate only the nondecreasing representative of each index
            // orbit and copy it to the permutations, so the stored tensor
            // is exactly symmetric (float products depend on factor order)
            sorted.copy_from_slice(&idx);
            sorted.sort_unstable();
            if sorted == idx {
                let mut sum = 0.0;
                for k in 0..n {
                    let mut prod = 1.0;
                    for &i in &idx {
                        prod *= w[(i, k)];
                    }
                    sum += prod;
                }
                entries[pos] = sum;
            } else {
                let src = sorted.iter().fold(0, |acc, &i| acc * d + i);
                entries[pos] = entries[src];
            }
            // odometer increment
            for pos in (0..m).rev() {
                idx[pos] += 1;
                if idx[pos] < d {
                    break;
                }
                idx[pos] = 0;
            }
        }
        Ok(SymTensor {
            m,
            d,
            entries,
            frame: Some(frame.clone()),
        })
    }

    /// Builds a tensor from explicit dense entries (no frame attached).
    pub fn from_entries(d: usize, m: usize, entries: Vec<f64>) -> Result<Self, TensorError> {
        if m < 3 {
            return Err(TensorError::OrderTooSmall(m));
        }
        let len = checked_len(d, m).ok_or(TensorError::TooLarge { d, m })?;
        assert_eq!(entries.len(), len, "entry count must be d^m");
        Ok(SymTensor {
            m,
            d,
            entries,
            frame: None,
        })
    }

    /// S v^m. Uses the rank-one-sum path for frame tensors.
    pub fn contract_m(&self, v: &DVector<f64>) -> Result<f64, TensorError> {
        self.check_dim(v)?;
        if let Some(frame) = &self.frame {
            let w = frame.matrix();
            let mut sum = 0.0;
            for k in 0..frame.n() {
                let dot: f64 = (0..self.d).map(|i| w[(i, k)] * v[i]).sum();
                sum += dot.powi(self.m as i32);
            }
            return Ok(sum);
        }
        Ok(v.dot(&self.contract_m1_dense(v)))
    }

    /// S v^{m-1}. Uses the rank-one-sum path for frame tensors.
    pub fn contract_m1(&self, v: &DVector<f64>) -> Result<DVector<f64>, TensorError> {
        self.check_dim(v)?;
        if let Some(frame) = &self.frame {
            let w = frame.matrix();
            let mut out = DVector::<f64>::zeros(self.d);
            for k in 0..frame.n() {
                let dot: f64 = (0..self.d).map(|i| w[(i, k)] * v[i]).sum();
                let coeff = dot.powi(self.m as i32 - 1);
                for i in 0..self.d {
                    out[i] += coeff * w[(i, k)];
                }
            }
            return Ok(out);
        }
        Ok(self.contract_m1_dense(v))
    }

    /// (S v^{m-2})_{ij}. Uses the rank-one-sum path for frame tensors.
    pub fn contract_m2(&self, v: &DVector<f64>) -> Result<DMatrix<f64>, TensorError> {
        self.check_dim(v)?;
        if let Some(frame) = &self.frame {
            let w = frame.matrix();
            let mut out = DMatrix::<f64>::zeros(self.d, self.d);
            for k in 0..frame.n() {
                let dot: f64 = (0..self.d).map(|i| w[(i, k)] * v[i]).sum();
                let coeff = dot.powi(self.m as i32 - 2);
                for i in 0..self.d {
                    for j in 0..self.d {
                        out[(i, j)] += coeff * w[(i, k)] * w[(j, k)];
                    }
                }
            }
            return Ok(out);
        }
        Ok(self.contract_m2_dense(v))
    }

    /// Dense-summation S v^m, independent of the frame path.
    pub fn contract_m_dense(&self, v: &DVector<f64>) -> f64 {
        v.dot(&self.contract_m1_dense(v))
    }

    /// Dense-summation S v^{m-1}, independent of the frame path.
    pub fn contract_m1_dense(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::<f64>::zeros(self.d);
        let tail = self.entries.len() / self.d;
        for j in 0..self.d {
            let block = &self.entries[j * tail..(j + 1) * tail];
            let mut idx = vec![0usize; self.m - 1];
            let mut sum = 0.0;
            for &s in block {
                let mut prod = s;
                for &i in &idx {
                    prod *= v[i];
                }
                sum += prod;
                for pos in (0..self.m - 1).rev() {
                    idx[pos] += 1;
                    if idx[pos] < self.d {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
            out[j] = sum;
        }
        out
    }

    /// Dense-summation S v^{m-2}, independent of the frame path.
    pub fn contract_m2_dense(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::zeros(self.d, self.d);
        let tail = self.entries.len() / (self.d * self.d);
        for a in 0..self.d {
            for b in 0..self.d {
                let start = (a * self.d + b) * tail;
                let block = &self.entries[start..start + tail];
                let mut idx = vec![0usize; self.m - 2];
                let mut sum = 0.0;
                for &s in block {
                    let mut prod = s;
                    for &i in &idx {
                        prod *= v[i];
                    }
                    sum += prod;
                    for pos in (0..self.m - 2).rev() {
                        idx[pos] += 1;
                        if idx[pos] < self.d {
                            break;
                        }
                        idx[pos] = 0;
                    }
                }
                out[(a, b)] = sum;
            }
        }
        out
    }

    /// ||S v^{m-1} - lambda v||_2, the eigenpair certificate.
    pub fn eigen_residual(&self, lambda: f64, v: &DVector<f64>) -> Result<f64, TensorError> {
        let sv = self.contract_m1(v)?;
        Ok((sv - v * lambda).norm())
    }
}
