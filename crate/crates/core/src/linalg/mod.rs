//! Linear algebra building blocks.
//!
//! Sparse symmetric matrices keep only their upper triangle. Rectangular
//! couplings use plain CSR storage. The dense routines exist for verification
//! (spectra, small Schur complements) and for the dense Schur blocks of the
//! exact preconditioners.

mod cholesky;
mod dense;
mod eigen;
mod ordering;
mod sparse;

pub use cholesky::{cholesky, cholesky_with, solve_chol, CholeskyFactor, Ordering};
pub use dense::{DenseCholesky, DenseMatrix};
pub use eigen::{gen_sym_eig, sym_eig_dense, sym_eigvals_dense, tridiag_eigvals, SymEigen};
pub use ordering::reverse_cuthill_mckee;
pub use sparse::{CsrMatrix, SparseSymMatrix, Triplet};

/// Relative pivot threshold below which a matrix is declared not positive definite.
pub const SPD_PIVOT_TOL: f64 = 1e-14;

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    crate::math::sqrt(dot(x, x))
}

/// `y += a * x`
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
