//! Up-looking sparse Cholesky factorization driven by the elimination tree.

use alloc::vec;
use alloc::vec::Vec;

use super::{reverse_cuthill_mckee, SparseSymMatrix, SPD_PIVOT_TOL};
use crate::math::sqrt;
use crate::{Error, Result};

const NONE: usize = usize::MAX;

/// Fill-reducing ordering used before factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    #[default]
    ReverseCuthillMcKee,
    Natural,
}

/// `P A P^T = L L^T` with `L` stored column-wise, diagonal entry first.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entry `L(i, j)` of the factor of the permuted matrix.
    pub fn l_entry(&self, i: usize, j: usize) -> f64 {
        (self.col_ptr[j]..self.col_ptr[j + 1])
            .find(|&p| self.row_idx[p] == i)
            .map(|p| self.values[p])
            .unwrap_or(0.0)
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim;
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for j in 0..n {
            let start = self.col_ptr[j];
            x[j] /= self.values[start];
            let xj = x[j];
            for p in start + 1..self.col_ptr[j + 1] {
                x[self.row_idx[p]] -= self.values[p] * xj;
            }
        }
        for j in (0..n).rev() {
            let start = self.col_ptr[j];
            let mut s = x[j];
            for p in start + 1..self.col_ptr[j + 1] {
                s -= self.values[p] * x[self.row_idx[p]];
            }
            x[j] = s / self.values[start];
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = x[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: b.len() });
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }
}

pub fn cholesky(m: &SparseSymMatrix) -> Result<CholeskyFactor> {
    cholesky_with(m, Ordering::default())
}

pub fn solve_chol(f: &CholeskyFactor, b: &[f64]) -> Result<Vec<f64>> {
    f.solve(b)
}

/// Upper triangle of `P A P^T` in compressed column form (column `k` holds rows `<= k`).
struct PermutedUpper {
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

fn permute_upper(m: &SparseSymMatrix, pinv: &[usize]) -> PermutedUpper {
    let n = m.dim();
    let mut counts = vec![0usize; n + 1];
    for (i, j, _) in m.iter_upper() {
        counts[pinv[i].max(pinv[j]) + 1] += 1;
    }
    for k in 0..n {
        counts[k + 1] += counts[k];
    }
    let mut next = counts.clone();
    let nnz = counts[n];
    let mut row_idx = vec![0usize; nnz];
    let mut values = vec![0.0; nnz];
    for (i, j, v) in m.iter_upper() {
        let (a, b) = (pinv[i], pinv[j]);
        let col = a.max(b);
        let p = next[col];
        row_idx[p] = a.min(b);
        values[p] = v;
        next[col] += 1;
    }
    PermutedUpper { col_ptr: counts, row_idx, values }
}

fn etree(c: &PermutedUpper, n: usize) -> Vec<usize> {
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for k in 0..n {
        for p in c.col_ptr[k]..c.col_ptr[k + 1] {
            let mut i = c.row_idx[p];
            while i != NONE && i < k {
                let inext = ancestor[i];
                ancestor[i] = k;
                if inext == NONE {
                    parent[i] = k;
                }
                i = inext;
            }
        }
    }
    parent
}

/// Nonzero pattern of row `k` of `L` (excluding the diagonal), written to
/// `stack[top..]`; returns `top`.
fn ereach(
    c: &PermutedUpper,
    k: usize,
    parent: &[usize],
    stack: &mut [usize],
    mark: &mut [usize],
) -> usize {
    let n = stack.len();
    let mut top = n;
    mark[k] = k;
    for p in c.col_ptr[k]..c.col_ptr[k + 1] {
        let mut i = c.row_idx[p];
        if i > k {
            continue;
        }
        let mut len = 0;
        while mark[i] != k {
            stack[len] = i;
            len += 1;
            mark[i] = k;
            i = parent[i];
        }
        while len > 0 {
            len -= 1;
            top -= 1;
            stack[top] = stack[len];
        }
    }
    top
}

pub fn cholesky_with(m: &SparseSymMatrix, ordering: Ordering) -> Result<CholeskyFactor> {
    let n = m.dim();
    let perm = match ordering {
        Ordering::ReverseCuthillMcKee => reverse_cuthill_mckee(m),
        Ordering::Natural => (0..n).collect(),
    };
    let mut pinv = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        pinv[old] = new;
    }
    let c = permute_upper(m, &pinv);
    let parent = etree(&c, n);

    // Symbolic pass: column counts of L.
    let mut stack = vec![0usize; n];
    let mut mark = vec![NONE; n];
    let mut counts = vec![1usize; n];
    for k in 0..n {
        let top = ereach(&c, k, &parent, &mut stack, &mut mark);
        for &i in &stack[top..] {
            counts[i] += 1;
        }
    }
    let mut col_ptr = vec![0usize; n + 1];
    for k in 0..n {
        col_ptr[k + 1] = col_ptr[k] + counts[k];
    }
    let nnz = col_ptr[n];
    let mut row_idx = vec![0usize; nnz];
    let mut values = vec![0.0; nnz];

    let max_diag = m.diagonal().iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let threshold = SPD_PIVOT_TOL * max_diag;

    // Numeric pass. `next[i]` is the next free slot in column i; slot
    // col_ptr[i] is reserved for the diagonal.
    let mut next: Vec<usize> = col_ptr[..n].iter().map(|p| p + 1).collect();
    let mut x = vec![0.0; n];
    mark.iter_mut().for_each(|v| *v = NONE);
    for k in 0..n {
        let top = ereach(&c, k, &parent, &mut stack, &mut mark);
        for p in c.col_ptr[k]..c.col_ptr[k + 1] {
            x[c.row_idx[p]] += c.values[p];
        }
        let mut d = x[k];
        x[k] = 0.0;
        for &i in &stack[top..] {
            let lki = x[i] / values[col_ptr[i]];
            x[i] = 0.0;
            for p in col_ptr[i] + 1..next[i] {
                x[row_idx[p]] -= values[p] * lki;
            }
            d -= lki * lki;
            let p = next[i];
            next[i] += 1;
            row_idx[p] = k;
            values[p] = lki;
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite { index: perm[k], pivot: d });
        }
        row_idx[col_ptr[k]] = k;
        values[col_ptr[k]] = sqrt(d);
    }
    Ok(CholeskyFactor { dim: n, perm, col_ptr, row_idx, values })
}
