//! Compressed-row sparse operators and states.
//!
//! Every operator in this crate is real symmetric in its working basis, so
//! values are stored as `f64` and applied to complex state vectors.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type State = Vec<Complex64>;

pub fn norm(state: &[Complex64]) -> f64 {
    state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(state: &mut [Complex64]) -> f64 {
    let n = norm(state);
    if n > 0.0 {
        let inv = 1.0 / n;
        for a in state.iter_mut() {
            *a *= inv;
        }
    }
    n
}

/// `<a|b>` with the physics convention (conjugate on the left).
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn overlap_sq(a: &[Complex64], b: &[Complex64]) -> f64 {
    inner(a, b).norm_sqr()
}

/// Hermitian sparse matrix in compressed-row layout, columns sorted within
/// each row and duplicates summed at assembly.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Assemble from (row, col, value) triplets.
    pub fn from_triplets(dim: usize, mut entries: Vec<(u32, u32, f64)>) -> Self {
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx: Vec<u32> = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
            row_ptr[r as usize + 1] = col_idx.len();
        }
        // forward-fill rows without entries
        for i in 1..=dim {
            if row_ptr[i] < row_ptr[i - 1] {
                row_ptr[i] = row_ptr[i - 1];
            }
        }
        let mut op = Self {
            dim,
            row_ptr,
            col_idx,
            values,
        };
        op.prune_zeros();
        op
    }

    fn prune_zeros(&mut self) {
        let mut new_ptr = vec![0usize; self.dim + 1];
        let mut cols = Vec::with_capacity(self.col_idx.len());
        let mut vals = Vec::with_capacity(self.values.len());
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                if self.values[k] != 0.0 {
                    cols.push(self.col_idx[k]);
                    vals.push(self.values[k]);
                }
            }
            new_ptr[row + 1] = cols.len();
        }
        self.row_ptr = new_ptr;
        self.col_idx = cols;
        self.values = vals;
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim as u32).collect(),
            values: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[u32], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    /// Exact sparse matvec. Row-parallel; each row is accumulated in a fixed
    /// order, so the result is bit-identical regardless of thread count.
    pub fn apply(&self, state: &[Complex64]) -> Result<State> {
        if state.len() != self.dim {
            return Err(Error::DimensionMismatch {
                operator: self.dim,
                state: state.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply_into(state, &mut out);
        Ok(out)
    }

    pub fn apply_into(&self, state: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(state.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        let work = |row: usize, slot: &mut Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += state[self.col_idx[k] as usize] * self.values[k];
            }
            *slot = acc;
        };
        if self.dim >= 2048 {
            out.par_iter_mut().enumerate().for_each(|(row, slot)| work(row, slot));
        } else {
            out.iter_mut().enumerate().for_each(|(row, slot)| work(row, slot));
        }
    }

    /// Apply to a real vector (used by analytic state constructions).
    pub fn apply_real(&self, state: &[f64]) -> Vec<f64> {
        assert_eq!(state.len(), self.dim);
        (0..self.dim)
            .map(|row| {
                let mut acc = 0.0;
                for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                    acc += state[self.col_idx[k] as usize] * self.values[k];
                }
                acc
            })
            .collect()
    }

    /// Largest absolute deviation from symmetry, `max |A - A^T|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                let col = self.col_idx[k] as usize;
                let v = self.values[k];
                let vt = self.get(col, row);
                err = err.max((v - vt).abs());
            }
        }
        err
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let cols = &self.col_idx[self.row_ptr[row]..self.row_ptr[row + 1]];
        match cols.binary_search(&(col as u32)) {
            Ok(k) => self.values[self.row_ptr[row] + k],
            Err(_) => 0.0,
        }
    }

    /// Dense copy, column-major `faer` matrix.
    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::<f64>::zeros(self.dim, self.dim);
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                m[(row, self.col_idx[k] as usize)] = self.values[k];
            }
        }
        m
    }

    /// Frobenius-like scale estimate: max row sum of |values| (an upper bound
    /// on the spectral radius).
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|row| {
                self.values[self.row_ptr[row]..self.row_ptr[row + 1]]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_sort() {
        let op = SparseOperator::from_triplets(
            3,
            vec![(0, 2, 1.0), (0, 1, 2.0), (0, 2, 0.5), (2, 0, 1.5), (1, 1, -1.0)],
        );
        assert_eq!(op.get(0, 2), 1.5);
        assert_eq!(op.get(0, 1), 2.0);
        assert_eq!(op.get(1, 1), -1.0);
        assert_eq!(op.get(2, 0), 1.5);
        assert_eq!(op.nnz(), 4);
        let (cols, _) = op.row(0);
        assert!(cols.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn identity_apply() {
        let op = SparseOperator::identity(4);
        let v: State = (0..4).map(|i| Complex64::new(i as f64, -1.0)).collect();
        assert_eq!(op.apply(&v).unwrap(), v);
    }

    #[test]
    fn apply_is_linear() {
        let op = SparseOperator::from_triplets(2, vec![(0, 1, 2.0), (1, 0, 2.0), (0, 0, 1.0)]);
        let a = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        let b = vec![Complex64::new(0.2, -1.0), Complex64::new(2.0, 0.0)];
        let lhs = op
            .apply(&a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>())
            .unwrap();
        let ra = op.apply(&a).unwrap();
        let rb = op.apply(&b).unwrap();
        for i in 0..2 {
            assert!((lhs[i] - ra[i] - rb[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let op = SparseOperator::identity(3);
        assert!(op.apply(&vec![Complex64::new(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn empty_rows_are_handled() {
        let op = SparseOperator::from_triplets(4, vec![(3, 0, 1.0)]);
        assert_eq!(op.get(3, 0), 1.0);
        assert_eq!(op.get(1, 1), 0.0);
        let v = vec![Complex64::new(1.0, 0.0); 4];
        let out = op.apply(&v).unwrap();
        assert_eq!(out[0], Complex64::new(0.0, 0.0));
        assert_eq!(out[3], Complex64::new(1.0, 0.0));
    }
}
