use alloc::vec;
use alloc::vec::Vec;

use super::DenseMatrix;
use crate::{Error, Result};

/// Coordinate entry `(row, col, value)`.
pub type Triplet = (usize, usize, f64);

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    /// Builds a matrix from coordinate triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[Triplet]) -> Result<Self> {
        let mut counts = vec![0usize; rows + 1];
        for &(i, j, _) in triplets {
            if i >= rows {
                return Err(Error::DimensionMismatch { expected: rows, found: i + 1 });
            }
            if j >= cols {
                return Err(Error::DimensionMismatch { expected: cols, found: j + 1 });
            }
            counts[i + 1] += 1;
        }
        for i in 0..rows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols_tmp = vec![0usize; triplets.len()];
        let mut vals_tmp = vec![0.0; triplets.len()];
        for &(i, j, v) in triplets {
            let p = next[i];
            cols_tmp[p] = j;
            vals_tmp[p] = v;
            next[i] += 1;
        }

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut row_buf: Vec<(usize, f64)> = Vec::new();
        for i in 0..rows {
            row_buf.clear();
            row_buf.extend((counts[i]..counts[i + 1]).map(|p| (cols_tmp[p], vals_tmp[p])));
            // Sorting by (column, value) makes duplicate summation independent of
            // the input order.
            row_buf.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let mut k = 0;
            while k < row_buf.len() {
                let col = row_buf[k].0;
                let mut sum = 0.0;
                while k < row_buf.len() && row_buf[k].0 == col {
                    sum += row_buf[k].1;
                    k += 1;
                }
                indices.push(col);
                values.push(sum);
            }
            indptr[i + 1] = indices.len();
        }
        Ok(Self { rows, cols, indptr, indices, values })
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &t).expect("indices in range")
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<Triplet> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, n, &t).expect("indices in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|p| vals[p]).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Triplet> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            *yi = c.iter().zip(v).map(|(&j, a)| a * x[j]).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    /// `y += A^T x`
    pub fn matvec_transpose_add(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let (c, v) = self.row(i);
            for (&j, a) in c.iter().zip(v) {
                y[j] += a * xi;
            }
        }
    }

    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.cols];
        self.matvec_transpose_add(x, &mut y);
        y
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<Triplet> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.cols, self.rows, &t).expect("indices in range")
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] += v;
        }
        m
    }

    /// Submatrix with rows and columns renumbered through the given maps;
    /// entries mapped to `None` are dropped.
    pub fn select(
        &self,
        row_map: &[Option<usize>],
        new_rows: usize,
        col_map: &[Option<usize>],
        new_cols: usize,
    ) -> Self {
        let t: Vec<Triplet> = self
            .iter()
            .filter_map(|(i, j, v)| Some((row_map[i]?, col_map[j]?, v)))
            .collect();
        Self::from_triplets(new_rows, new_cols, &t).expect("maps stay in range")
    }

    /// Dense product `self * other` with a dense right factor.
    pub fn mul_dense(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows() });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols());
        for i in 0..self.rows {
            let (c, v) = self.row(i);
            for (&k, a) in c.iter().zip(v) {
                let src = other.row(k).to_vec();
                for (o, b) in out.row_mut(i).iter_mut().zip(&src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }
}

/// Symmetric sparse matrix; only the upper triangle (`col >= row`) is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    upper: CsrMatrix,
}

impl SparseSymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { upper: CsrMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { upper: CsrMatrix::identity(dim) }
    }

    /// Builds the matrix from triplets describing the full symmetric matrix.
    /// Entries below the diagonal are ignored; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: &[Triplet]) -> Result<Self> {
        let upper: Vec<Triplet> = triplets.iter().copied().filter(|&(i, j, _)| i <= j).collect();
        Ok(Self { upper: CsrMatrix::from_triplets(dim, dim, &upper)? })
    }

    /// Builds the matrix from triplets of one triangle only; entries below the
    /// diagonal are mirrored into the upper triangle.
    pub fn from_triangle_triplets(dim: usize, triplets: &[Triplet]) -> Result<Self> {
        let upper: Vec<Triplet> =
            triplets.iter().map(|&(i, j, v)| if i <= j { (i, j, v) } else { (j, i, v) }).collect();
        Ok(Self { upper: CsrMatrix::from_triplets(dim, dim, &upper)? })
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        let mut t = Vec::new();
        for i in 0..m.rows() {
            for j in i..m.cols() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.rows(), &t)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let t: Vec<Triplet> = diag.iter().enumerate().map(|(i, &d)| (i, i, d)).collect();
        Self::from_triplets(diag.len(), &t).expect("indices in range")
    }

    pub fn dim(&self) -> usize {
        self.upper.rows()
    }

    /// Stored upper triangle.
    pub fn upper(&self) -> &CsrMatrix {
        &self.upper
    }

    pub fn nnz_upper(&self) -> usize {
        self.upper.nnz()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i <= j {
            self.upper.get(i, j)
        } else {
            self.upper.get(j, i)
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.upper.get(i, i)).collect()
    }

    /// Stored upper-triangle entries.
    pub fn iter_upper(&self) -> impl Iterator<Item = Triplet> + '_ {
        self.upper.iter()
    }

    /// `y = A x`
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let (c, v) = self.upper.row(i);
            let mut acc = 0.0;
            let xi = x[i];
            for (&j, &a) in c.iter().zip(v) {
                acc += a * x[j];
                if j != i {
                    y[j] += a * xi;
                }
            }
            y[i] += acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { upper: self.upper.scaled(s) }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &SparseSymMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let t: Vec<Triplet> = self
            .iter_upper()
            .chain(other.iter_upper().map(|(i, j, v)| (i, j, s * v)))
            .collect();
        Self::from_triplets(self.dim(), &t)
    }

    /// Full (both triangles) CSR representation.
    pub fn to_csr(&self) -> CsrMatrix {
        let t: Vec<Triplet> = self
            .iter_upper()
            .flat_map(|(i, j, v)| {
                let mirror = if i != j { Some((j, i, v)) } else { None };
                core::iter::once((i, j, v)).chain(mirror)
            })
            .collect();
        CsrMatrix::from_triplets(self.dim(), self.dim(), &t).expect("indices in range")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, j, v) in self.iter_upper() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Principal submatrix through an index map.
    pub fn select(&self, map: &[Option<usize>], new_dim: usize) -> Self {
        let t: Vec<Triplet> = self
            .iter_upper()
            .filter_map(|(i, j, v)| Some((map[i]?, map[j]?, v)))
            .collect();
        Self::from_triangle_triplets(new_dim, &t).expect("map stays in range")
    }

    /// Block diagonal matrix `diag(blocks...)`.
    pub fn block_diagonal(blocks: &[&SparseSymMatrix]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut t = Vec::new();
        let mut off = 0;
        for b in blocks {
            t.extend(b.iter_upper().map(|(i, j, v)| (i + off, j + off, v)));
            off += b.dim();
        }
        Self::from_triplets(dim, &t).expect("indices in range")
    }
}
