//! Schur complement preconditioning for multiple saddle point systems.
//!
//! A multiple saddle point system is a symmetric block tridiagonal operator
//!
//! ```text
//!     [ A_1   B_1'                    ]
//!     [ B_1  -A_2   B_2'              ]
//!     [       B_2   A_3   ...         ]
//!     [             ...   (-1)^{n-1} A_n ]
//! ```
//!
//! with symmetric positive semidefinite `A_i`. The block diagonal matrix of
//! the Schur complements `S_1 = A_1`, `S_{i+1} = A_{i+1} + B_i S_i^{-1} B_i'`
//! is a preconditioner for which the preconditioned spectrum lies in
//! `[-2cos(pi/(2n+1)), -2sin(pi/(2(2n+1)))] U [2sin(pi/(2(2n+1))), 2cos(pi/(2n+1))]`.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`chebyshev`]: the polynomial families, roots and bounds behind that estimate,
//! * [`linalg`]: sparse symmetric storage, sparse Cholesky, dense eigensolvers,
//! * [`saddle`]: block tridiagonal systems, Schur preconditioners, spectra,
//! * [`minres`]: preconditioned MINRES and Lanczos extreme eigenvalue estimates,
//! * [`spline`]: tensor-product B-spline spaces, geometry maps and assembly,
//! * [`control`]: optimality systems of elliptic optimal control problems.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chebyshev;
pub mod control;
mod error;
pub mod linalg;
pub(crate) mod math;
pub mod minres;
pub mod saddle;
pub mod spline;

pub use error::{Error, Result};
