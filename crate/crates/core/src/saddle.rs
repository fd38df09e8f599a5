//! Block tridiagonal saddle point systems and their Schur complement
//! preconditioners.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::chebyshev::{bounds, largest_root, pbar_roots, smallest_abs_root, BoundSet};
use crate::linalg::{
    cholesky, sym_eigvals_dense, CholeskyFactor, CsrMatrix, DenseCholesky, DenseMatrix,
    SparseSymMatrix, Triplet,
};
use crate::minres::LinearOperator;
use crate::{Error, Result};

/// Default limit on the total dimension for dense spectral computations.
pub const DENSE_CAP: usize = 2000;

/// Symmetric block tridiagonal operator with diagonal blocks `(-1)^{i-1} A_i`
/// and coupling `B_i` from block `i` into block `i+1`.
///
/// Blocks are numbered from 0 in code; `a[0]` is `A_1`.
#[derive(Debug, Clone)]
pub struct BlockTridiagSystem {
    a: Vec<SparseSymMatrix>,
    b: Vec<CsrMatrix>,
    offsets: Vec<usize>,
}

impl BlockTridiagSystem {
    pub fn new(a: Vec<SparseSymMatrix>, b: Vec<CsrMatrix>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("a block system needs at least one block"));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::DimensionMismatch { expected: a.len() - 1, found: b.len() });
        }
        for (i, bi) in b.iter().enumerate() {
            if bi.cols() != a[i].dim() {
                return Err(Error::DimensionMismatch { expected: a[i].dim(), found: bi.cols() });
            }
            if bi.rows() != a[i + 1].dim() {
                return Err(Error::DimensionMismatch { expected: a[i + 1].dim(), found: bi.rows() });
            }
        }
        let mut offsets = vec![0];
        for ai in &a {
            offsets.push(offsets.last().unwrap() + ai.dim());
        }
        Ok(Self { a, b, offsets })
    }

    /// Number of blocks `n`.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.a.iter().map(|m| m.dim()).collect()
    }

    /// Start index of every block, followed by the total dimension.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total_dim(&self) -> usize {
        self.offsets[self.n()]
    }

    pub fn a(&self, i: usize) -> &SparseSymMatrix {
        &self.a[i]
    }

    pub fn b(&self, i: usize) -> &CsrMatrix {
        &self.b[i]
    }

    fn sign(i: usize) -> f64 {
        if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The full symmetric matrix.
    pub fn assemble_full(&self) -> SparseSymMatrix {
        let mut t: Vec<Triplet> = Vec::new();
        for (i, ai) in self.a.iter().enumerate() {
            let off = self.offsets[i];
            let s = Self::sign(i);
            t.extend(ai.iter_upper().map(|(r, c, v)| (r + off, c + off, s * v)));
        }
        for (i, bi) in self.b.iter().enumerate() {
            // B_i sits below the diagonal; store its transpose in the upper triangle.
            let (roff, coff) = (self.offsets[i + 1], self.offsets[i]);
            t.extend(bi.iter().map(|(r, c, v)| (c + coff, r + roff, v)));
        }
        SparseSymMatrix::from_triangle_triplets(self.total_dim(), &t).expect("offsets in range")
    }

    pub fn assemble_dense(&self) -> DenseMatrix {
        self.assemble_full().to_dense()
    }

    /// Dense check that every `A_i` is positive semidefinite, i.e. its smallest
    /// eigenvalue is at least `-tol * ||A_i||_F`.
    pub fn check_semidefinite(&self, tol: f64) -> Result<()> {
        for (i, ai) in self.a.iter().enumerate() {
            let d = ai.to_dense();
            let eig = sym_eigvals_dense(&d)?;
            if let Some(&min) = eig.first() {
                if min < -tol * d.frobenius_norm() {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: min });
                }
            }
        }
        Ok(())
    }
}

impl LinearOperator for BlockTridiagSystem {
    fn dim(&self) -> usize {
        self.total_dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let o = &self.offsets;
        for (i, ai) in self.a.iter().enumerate() {
            let yi = &mut y[o[i]..o[i + 1]];
            ai.matvec_into(&x[o[i]..o[i + 1]], yi);
            if i % 2 == 1 {
                yi.iter_mut().for_each(|v| *v = -*v);
            }
        }
        for (i, bi) in self.b.iter().enumerate() {
            let (lo, mid, hi) = (o[i], o[i + 1], o[i + 2]);
            let mut tmp = vec![0.0; hi - mid];
            bi.matvec_into(&x[lo..mid], &mut tmp);
            for (yv, t) in y[mid..hi].iter_mut().zip(&tmp) {
                *yv += t;
            }
            bi.matvec_transpose_add(&x[mid..hi], &mut y[lo..mid]);
        }
    }
}

/// One factorized SPD diagonal block of a preconditioner.
#[derive(Debug, Clone)]
pub enum PrecondBlock {
    Sparse { matrix: SparseSymMatrix, factor: CholeskyFactor },
    Dense { matrix: DenseMatrix, factor: DenseCholesky },
}

impl PrecondBlock {
    pub fn sparse(matrix: SparseSymMatrix) -> Result<Self> {
        let factor = cholesky(&matrix)?;
        Ok(Self::Sparse { matrix, factor })
    }

    pub fn dense(matrix: DenseMatrix) -> Result<Self> {
        let factor = DenseCholesky::factor(&matrix)?;
        Ok(Self::Dense { matrix, factor })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Sparse { matrix, .. } => matrix.dim(),
            Self::Dense { matrix, .. } => matrix.rows(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Self::Dense { .. })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            Self::Sparse { factor, .. } => factor.solve_in_place(b),
            Self::Dense { factor, .. } => factor.solve_in_place(b),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Self::Sparse { matrix, .. } => matrix.to_dense(),
            Self::Dense { matrix, .. } => matrix.clone(),
        }
    }

    /// Stored entries: upper triangle for sparse blocks, all entries for dense ones.
    pub fn nnz(&self) -> usize {
        match self {
            Self::Sparse { matrix, .. } => matrix.nnz_upper(),
            Self::Dense { matrix, .. } => matrix.rows() * matrix.cols(),
        }
    }
}

/// Block diagonal SPD preconditioner `diag(S_1, ..., S_n)`.
#[derive(Debug, Clone)]
pub struct SchurPreconditioner {
    blocks: Vec<PrecondBlock>,
    offsets: Vec<usize>,
}

impl SchurPreconditioner {
    pub fn from_blocks(blocks: Vec<PrecondBlock>) -> Self {
        let mut offsets = vec![0];
        for b in &blocks {
            offsets.push(offsets.last().unwrap() + b.dim());
        }
        Self { blocks, offsets }
    }

    /// Factorizes sparse blocks; a failure at block `i` (0-based) is reported
    /// as `SchurNotPositiveDefinite { stage: i + 1 }`.
    pub fn from_sparse(blocks: Vec<SparseSymMatrix>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, m) in blocks.into_iter().enumerate() {
            out.push(PrecondBlock::sparse(m).map_err(|_| Error::SchurNotPositiveDefinite { stage: i + 1 })?);
        }
        Ok(Self::from_blocks(out))
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[PrecondBlock] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.offsets[self.n()]
    }

    /// `y = S^{-1} x`.
    pub fn apply_inverse(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
        for (i, b) in self.blocks.iter().enumerate() {
            b.solve_in_place(&mut y[self.offsets[i]..self.offsets[i + 1]]);
        }
    }

    /// The inverse as an operator, for use as a MINRES preconditioner.
    pub fn inverse(&self) -> SchurInverse<'_> {
        SchurInverse(self)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.total_dim();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, b) in self.blocks.iter().enumerate() {
            m.set_block(self.offsets[i], self.offsets[i], &b.to_dense());
        }
        m
    }

    /// Sparse matrix of the preconditioner; dense blocks are stored entrywise.
    pub fn to_sparse(&self) -> SparseSymMatrix {
        let mut t = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let off = self.offsets[i];
            match b {
                PrecondBlock::Sparse { matrix, .. } => {
                    t.extend(matrix.iter_upper().map(|(r, c, v)| (r + off, c + off, v)))
                }
                PrecondBlock::Dense { matrix, .. } => {
                    for r in 0..matrix.rows() {
                        for c in r..matrix.cols() {
                            if matrix[(r, c)] != 0.0 {
                                t.push((r + off, c + off, matrix[(r, c)]));
                            }
                        }
                    }
                }
            }
        }
        SparseSymMatrix::from_triangle_triplets(self.total_dim(), &t).expect("offsets in range")
    }
}

/// `S^{-1}` of a [`SchurPreconditioner`].
#[derive(Debug, Clone, Copy)]
pub struct SchurInverse<'a>(&'a SchurPreconditioner);

impl LinearOperator for SchurInverse<'_> {
    fn dim(&self) -> usize {
        self.0.total_dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply_inverse(x, y)
    }
}

/// `a + B S^{-1} B'`, formed densely.
pub fn schur_update(a: &DenseMatrix, b: &CsrMatrix, s: &PrecondBlock) -> Result<DenseMatrix> {
    if b.cols() != s.dim() || b.rows() != a.rows() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: b.cols() });
    }
    let m = b.rows();
    let mut out = a.clone();
    match s {
        PrecondBlock::Dense { factor, .. } => {
            // With S = L L', B S^{-1} B' = Y' Y where Y = L^{-1} B'.
            let mut y = Vec::with_capacity(m);
            for r in 0..m {
                let mut col = vec![0.0; s.dim()];
                let (c, v) = b.row(r);
                for (&j, &val) in c.iter().zip(v) {
                    col[j] = val;
                }
                factor.solve_lower_in_place(&mut col);
                y.push(col);
            }
            for r in 0..m {
                for c in r..m {
                    let v = crate::linalg::dot(&y[r], &y[c]);
                    out[(r, c)] += v;
                    if r != c {
                        out[(c, r)] += v;
                    }
                }
            }
        }
        PrecondBlock::Sparse { factor, .. } => {
            for r in 0..m {
                let mut col = vec![0.0; s.dim()];
                let (c, v) = b.row(r);
                for (&j, &val) in c.iter().zip(v) {
                    col[j] = val;
                }
                factor.solve_in_place(&mut col);
                for q in 0..m {
                    let (cq, vq) = b.row(q);
                    let v: f64 = cq.iter().zip(vq).map(|(&j, &bv)| bv * col[j]).sum();
                    out[(q, r)] += v;
                }
            }
            out.symmetrize();
        }
    }
    Ok(out)
}

/// Exact Schur complement preconditioner `S_1 = A_1`,
/// `S_{i+1} = A_{i+1} + B_i S_i^{-1} B_i'`.
///
/// `S_1` stays sparse; later blocks are dense, so every block past the first
/// must have dimension at most `cap`.
pub fn exact_schur(sys: &BlockTridiagSystem, cap: usize) -> Result<SchurPreconditioner> {
    for d in sys.block_dims().into_iter().skip(1) {
        if d > cap {
            return Err(Error::DenseCapExceeded { size: d, cap });
        }
    }
    let first = PrecondBlock::sparse(sys.a(0).clone())
        .map_err(|_| Error::SchurNotPositiveDefinite { stage: 1 })?;
    let mut blocks = vec![first];
    for i in 0..sys.n() - 1 {
        let s = schur_update(&sys.a(i + 1).to_dense(), sys.b(i), &blocks[i])?;
        let block = PrecondBlock::dense(s).map_err(|_| Error::SchurNotPositiveDefinite { stage: i + 2 })?;
        blocks.push(block);
    }
    Ok(SchurPreconditioner::from_blocks(blocks))
}

/// Eigenvalues of the preconditioned operator `S^{-1} A` with summary data.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max |lambda|`
    pub norm: f64,
    /// `1 / min |lambda|`
    pub inv_norm: f64,
    pub cond: f64,
    pub bound_set: BoundSet,
    pub within_bounds: bool,
}

/// Relative slack used for [`SpectrumReport::within_bounds`].
pub const BOUND_SLACK: f64 = 1e-10;

impl SpectrumReport {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>, n: usize) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum"));
        }
        let norm = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let inv_norm = 1.0 / min;
        let bound_set = bounds(n)?;
        let within_bounds = norm <= bound_set.norm_bound * (1.0 + BOUND_SLACK)
            && inv_norm <= bound_set.inv_norm_bound * (1.0 + BOUND_SLACK);
        Ok(Self { eigenvalues, norm, inv_norm, cond: norm * inv_norm, bound_set, within_bounds })
    }

    pub fn min_abs(&self) -> f64 {
        1.0 / self.inv_norm
    }
}

/// `L^{-1} A L^{-T}` for block diagonal `L` given by per-block Cholesky factors.
fn block_congruence(a: &DenseMatrix, factors: &[DenseCholesky], offsets: &[usize]) -> DenseMatrix {
    let n = a.rows();
    let apply_rows = |m: &DenseMatrix| {
        // Returns (L^{-1} m)' for symmetric block structure.
        let mut out = DenseMatrix::zeros(n, n);
        for c in 0..n {
            let mut col = m.column(c);
            for (k, f) in factors.iter().enumerate() {
                f.solve_lower_in_place(&mut col[offsets[k]..offsets[k + 1]]);
            }
            out.row_mut(c).copy_from_slice(&col);
        }
        out
    };
    let half = apply_rows(a);
    let mut full = apply_rows(&half);
    full.symmetrize();
    full
}

/// Dense spectrum of `S^{-1} A`, where `S` is any block diagonal SPD
/// preconditioner with blocks matching the system.
pub fn spectrum(sys: &BlockTridiagSystem, precond: &SchurPreconditioner, cap: usize) -> Result<SpectrumReport> {
    let dim = sys.total_dim();
    if dim > cap {
        return Err(Error::DenseCapExceeded { size: dim, cap });
    }
    if precond.block_dims() != sys.block_dims() {
        return Err(Error::DimensionMismatch { expected: dim, found: precond.total_dim() });
    }
    let mut factors = Vec::with_capacity(precond.n());
    for b in precond.blocks() {
        factors.push(match b {
            PrecondBlock::Dense { factor, .. } => factor.clone(),
            PrecondBlock::Sparse { matrix, .. } => DenseCholesky::factor(&matrix.to_dense())?,
        });
    }
    let c = block_congruence(&sys.assemble_dense(), &factors, sys.offsets());
    SpectrumReport::from_eigenvalues(sym_eigvals_dense(&c)?, sys.n())
}

/// Spectrum of the exact Schur complement preconditioned system when
/// `A_i = 0` for `i >= 2` and every `B_i` has full row rank.
///
/// The Schur complements are never formed. With `S_1 = L_1 L_1'`,
/// `W_i = B_i L_i^{-T}` and the thin QR `W_i' = Q_i R_i`, one has
/// `S_{i+1} = R_i' R_i`, and `L^{-1} A L^{-T}` is block tridiagonal with
/// identity in the leading block, zero diagonal blocks otherwise and
/// off-diagonal blocks `Q_i'`. Since `Q_i` is orthonormal to rounding, the
/// eigenvalues stay accurate even when `cond(S_n)` exceeds `1/eps`.
pub fn zero_tail_spectrum(sys: &BlockTridiagSystem) -> Result<SpectrumReport> {
    let n = sys.n();
    let dim = sys.total_dim();
    if dim > DENSE_CAP {
        return Err(Error::DenseCapExceeded { size: dim, cap: DENSE_CAP });
    }
    if (1..n).any(|i| sys.a(i).iter_upper().any(|(_, _, v)| v != 0.0)) {
        return Err(Error::InvalidArgument("zero_tail_spectrum needs A_i = 0 for i >= 2"));
    }
    let dims = sys.block_dims();
    let offsets = sys.offsets();
    let mut t = DenseMatrix::zeros(dim, dim);
    for k in 0..dims[0] {
        t[(k, k)] = 1.0;
    }
    // Lower triangular factor of the current Schur complement.
    let mut lower = DenseCholesky::factor(&sys.a(0).to_dense())
        .map_err(|_| Error::SchurNotPositiveDefinite { stage: 1 })?
        .lower()
        .clone();
    for i in 0..n - 1 {
        let (m, m_next) = (dims[i], dims[i + 1]);
        if m_next > m {
            return Err(Error::SchurNotPositiveDefinite { stage: i + 2 });
        }
        // W' = L^{-1} B', one column per row of B.
        let b = sys.b(i).to_dense();
        let mut wt = DenseMatrix::zeros(m, m_next);
        for r in 0..m_next {
            let mut col = b.row(r).to_vec();
            for p in 0..m {
                let s: f64 = (0..p).map(|c| lower[(p, c)] * col[c]).sum();
                col[p] = (col[p] - s) / lower[(p, p)];
            }
            wt.set_column(r, &col);
        }
        let (q, r) = wt.thin_qr()?;
        let rmax = (0..m_next).fold(0.0f64, |acc, k| acc.max(r[(k, k)].abs()));
        if (0..m_next).any(|k| !(r[(k, k)].abs() > 1e-14 * rmax)) {
            return Err(Error::SchurNotPositiveDefinite { stage: i + 2 });
        }
        for a in 0..m_next {
            for c in 0..m {
                let v = q[(c, a)];
                t[(offsets[i + 1] + a, offsets[i] + c)] = v;
                t[(offsets[i] + c, offsets[i + 1] + a)] = v;
            }
        }
        lower = r.transpose();
    }
    SpectrumReport::from_eigenvalues(sym_eigvals_dense(&t)?, n)
}

/// Whether every value lies within `tol` of some target and every target
/// within `tol` of some value. Multiplicities are ignored.
pub fn matches_value_set(values: &[f64], targets: &[f64], tol: f64) -> bool {
    let near = |x: f64, set: &[f64]| set.iter().any(|y| (x - y).abs() <= tol);
    values.iter().all(|&v| near(v, targets)) && targets.iter().all(|&t| near(t, values))
}

/// Union of the roots of `Pbar_1, ..., Pbar_n`.
pub fn chebyshev_root_set(n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 1..=n {
        out.extend(pbar_roots(j).expect("j >= 1"));
    }
    out
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    DenseMatrix::from_row_major(rows, cols, data).expect("sized")
}

fn gram(h: &DenseMatrix) -> DenseMatrix {
    let mut g = h.transpose().matmul(h).expect("compatible");
    g.symmetrize();
    g
}

fn sparse_sym(m: &DenseMatrix) -> SparseSymMatrix {
    SparseSymMatrix::from_dense(m).expect("square")
}

fn spd_first_block(rng: &mut ChaCha8Rng, dim: usize) -> SparseSymMatrix {
    let mut a1 = gram(&gaussian(rng, dim, dim));
    for i in 0..dim {
        a1[(i, i)] += 0.1;
    }
    sparse_sym(&a1)
}

/// Random system with `A_1 = G'G + 0.1 I`, `A_i = 0` for `i >= 2` and
/// Gaussian couplings between blocks of the given dimensions.
///
/// The Schur complements are SPD when the dimensions are non-increasing.
pub fn random_zero_tail_system(dims: &[usize], seed: u64) -> Result<BlockTridiagSystem> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument("block dimensions must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![spd_first_block(&mut rng, dims[0])];
    a.extend(dims[1..].iter().map(|&d| SparseSymMatrix::zeros(d)));
    let b = dims
        .windows(2)
        .map(|w| CsrMatrix::from_dense(&gaussian(&mut rng, w[1], w[0])))
        .collect();
    BlockTridiagSystem::new(a, b)
}

/// Random system with positive semidefinite, possibly singular, `A_i = H'H`
/// for `i >= 2` and Gaussian couplings.
pub fn random_spsd_system(dims: &[usize], seed: u64) -> Result<BlockTridiagSystem> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument("block dimensions must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![spd_first_block(&mut rng, dims[0])];
    for &d in &dims[1..] {
        let rank = rng.random_range(0..=d);
        a.push(sparse_sym(&gram(&gaussian(&mut rng, rank, d))));
    }
    let b = dims
        .windows(2)
        .map(|w| CsrMatrix::from_dense(&gaussian(&mut rng, w[1], w[0])))
        .collect();
    BlockTridiagSystem::new(a, b)
}

/// Non-increasing random block dimensions in `1..=max_dim`.
pub fn random_dims(n: usize, max_dim: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut dims = Vec::with_capacity(n);
    let mut cur = rng.random_range(1..=max_dim.max(1));
    for _ in 0..n {
        dims.push(cur);
        cur = rng.random_range(1..=cur);
    }
    dims
}

/// Outcome of [`verify_sharpness`].
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessReport {
    pub n: usize,
    pub trials: usize,
    pub bound_set: BoundSet,
    /// Largest `| max|lambda| - 2cos(pi/(2n+1)) |` over the zero-tail trials.
    pub max_norm_dev: f64,
    /// Largest `| min|lambda| - 2sin(pi/(2(2n+1))) |` over the zero-tail trials.
    pub max_min_dev: f64,
    /// Largest `kappa / cond_bound` over the semidefinite trials.
    pub max_cond_ratio: f64,
    pub sharpness_failures: Vec<u64>,
    pub bound_failures: Vec<u64>,
}

impl SharpnessReport {
    pub fn passed(&self) -> bool {
        self.sharpness_failures.is_empty() && self.bound_failures.is_empty()
    }
}

/// Absolute tolerance of the sharpness check.
pub const SHARPNESS_TOL: f64 = 1e-8;

/// Checks on random instances that the extreme eigenvalues of the exact
/// Schur preconditioned system attain the bounds when `A_i = 0` for `i >= 2`
/// (square couplings of size `dim`, spectrum via [`zero_tail_spectrum`]), and that the condition number stays
/// below the bound for semidefinite `A_i`. Trial `t` uses seed `seed + t`.
pub fn verify_sharpness(n: usize, trials: usize, seed: u64, dim: usize) -> Result<SharpnessReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidArgument("verify_sharpness supports n in 2..=6"));
    }
    let bound_set = bounds(n)?;
    let (top, bottom) = (largest_root(n), smallest_abs_root(n));
    let mut report = SharpnessReport {
        n,
        trials,
        bound_set,
        max_norm_dev: 0.0,
        max_min_dev: 0.0,
        max_cond_ratio: 0.0,
        sharpness_failures: Vec::new(),
        bound_failures: Vec::new(),
    };
    for t in 0..trials as u64 {
        let s = seed.wrapping_add(t);
        let sys = random_zero_tail_system(&vec![dim; n], s)?;
        let rep = zero_tail_spectrum(&sys)?;
        let dn = (rep.norm - top).abs();
        let dm = (rep.min_abs() - bottom).abs();
        report.max_norm_dev = report.max_norm_dev.max(dn);
        report.max_min_dev = report.max_min_dev.max(dm);
        if dn > SHARPNESS_TOL || dm > SHARPNESS_TOL {
            report.sharpness_failures.push(s);
        }

        let sys = random_spsd_system(&random_dims(n, dim, s), s)?;
        let rep = spectrum(&sys, &exact_schur(&sys, DENSE_CAP)?, DENSE_CAP)?;
        let ratio = rep.cond / bound_set.cond_bound;
        report.max_cond_ratio = report.max_cond_ratio.max(ratio);
        if ratio > 1.0 + BOUND_SLACK || !rep.within_bounds {
            report.bound_failures.push(s);
        }
    }
    Ok(report)
}
