use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use super::SPD_PIVOT_TOL;
use crate::math::sqrt;
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<const C: usize>(rows: &[[f64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { rows: rows.len(), cols: C, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| super::dot(self.row(i), x)).collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn add_assign(&mut self, other: &DenseMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Replaces the matrix with `(M + M^T) / 2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    /// Copies `block` into `self` with its upper left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix) {
        for i in 0..block.rows {
            self.row_mut(r0 + i)[c0..c0 + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DenseMatrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            out.row_mut(i).copy_from_slice(&self.row(r0 + i)[c0..c0 + cols]);
        }
        out
    }

    /// Householder QR of a matrix with `rows >= cols`: returns `Q` with
    /// orthonormal columns (`rows x cols`) and upper triangular `R`
    /// (`cols x cols`). `Q` is orthonormal to rounding regardless of the
    /// conditioning of `self`.
    pub fn thin_qr(&self) -> Result<(DenseMatrix, DenseMatrix)> {
        let (m, n) = (self.rows, self.cols);
        if m < n {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
        let mut a = self.clone();
        let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v: Vec<f64> = (k..m).map(|i| a[(i, k)]).collect();
            let alpha = sqrt(v.iter().map(|x| x * x).sum());
            if alpha > 0.0 {
                v[0] += if v[0] >= 0.0 { alpha } else { -alpha };
                let vn = sqrt(v.iter().map(|x| x * x).sum());
                v.iter_mut().for_each(|x| *x /= vn);
                for j in k..n {
                    let s: f64 = (k..m).map(|i| v[i - k] * a[(i, j)]).sum();
                    for i in k..m {
                        a[(i, j)] -= 2.0 * v[i - k] * s;
                    }
                }
            }
            vs.push(v);
        }
        let mut r = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                r[(i, j)] = a[(i, j)];
            }
        }
        // Q = H_0 ... H_{n-1} applied to the first n unit vectors.
        let mut q = DenseMatrix::zeros(m, n);
        for j in 0..n {
            q[(j, j)] = 1.0;
        }
        for k in (0..n).rev() {
            let v = &vs[k];
            for j in 0..n {
                let s: f64 = (k..m).map(|i| v[i - k] * q[(i, j)]).sum();
                for i in k..m {
                    q[(i, j)] -= 2.0 * v[i - k] * s;
                }
            }
        }
        Ok((q, r))
    }

    /// Solves `self * x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if !self.is_square() || b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
                .unwrap_or(k);
            if a[(p, k)].abs() <= 1e-300 * scale {
                return Err(Error::InvalidArgument("singular matrix"));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                x.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                if f == 0.0 {
                    continue;
                }
                for j in k..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|j| a[(k, j)] * x[j]).sum();
            x[k] = (x[k] - s) / a[(k, k)];
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense Cholesky factor `A = L L^T`, `L` stored row-major in the lower triangle.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    l: DenseMatrix,
}

impl DenseCholesky {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
        }
        let n = a.rows;
        let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a[(i, i)].abs()));
        let threshold = SPD_PIVOT_TOL * max_diag;
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            {
                let lj = l.row(j);
                d -= lj[..j].iter().map(|v| v * v).sum::<f64>();
            }
            if !(d > threshold) {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            let djj = sqrt(d);
            l[(j, j)] = djj;
            for i in j + 1..n {
                let s: f64 = {
                    let (li, lj) = (l.row(i), l.row(j));
                    li[..j].iter().zip(&lj[..j]).map(|(x, y)| x * y).sum()
                };
                l[(i, j)] = (a[(i, j)] - s) / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.rows
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.l
    }

    /// Solves `L y = b` in place.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let row = self.l.row(i);
            let s: f64 = row[..i].iter().zip(&b[..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - s) / row[i];
        }
    }

    /// Solves `L^T x = y` in place.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for i in (0..n).rev() {
            b[i] /= self.l[(i, i)];
            let bi = b[i];
            let row = self.l.row(i);
            for (bj, lij) in b[..i].iter_mut().zip(&row[..i]) {
                *bj -= lij * bi;
            }
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.solve_lower_in_place(b);
        self.solve_upper_in_place(b);
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: b.len() });
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    /// Computes `L^{-1} A L^{-T}` for symmetric `A`.
    pub fn congruence_inverse(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim();
        if a.rows != n || a.cols != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.rows });
        }
        // Row-wise lower solves compute W = A L^{-T}; W^T = L^{-1} A.
        let mut w = a.clone();
        for i in 0..n {
            self.solve_lower_in_place(w.row_mut(i));
        }
        let mut out = w.transpose();
        for i in 0..n {
            self.solve_lower_in_place(out.row_mut(i));
        }
        out.symmetrize();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_qr_reconstructs_and_is_orthonormal() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.5], [3.0, -1.0, 2.0], [0.0, 4.0, 1.0], [2.0, 2.0, -3.0], [1e-8, 0.0, 1.0]]);
        let (q, r) = a.thin_qr().unwrap();
        let qr = q.matmul(&r).unwrap();
        for i in 0..5 {
            for j in 0..3 {
                assert!((qr[(i, j)] - a[(i, j)]).abs() < 1e-13);
            }
        }
        let qtq = q.transpose().matmul(&q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((qtq[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
            for j in 0..i {
                assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn thin_qr_rejects_wide_matrices() {
        assert!(DenseMatrix::zeros(2, 3).thin_qr().is_err());
    }
}
