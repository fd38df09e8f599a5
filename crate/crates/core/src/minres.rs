//! Preconditioned MINRES and Lanczos estimates of extreme eigenvalues.
//!
//! Both work with a symmetric operator `A` and the inverse of a symmetric
//! positive definite preconditioner `P`. The Krylov recurrence runs in the
//! `P`-inner product. The stopping test monitors either `sqrt(r' P^{-1} r)`
//! or the Euclidean norm of the preconditioned residual `P^{-1} r`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{axpy, dot, tridiag_eigvals, DenseMatrix, SparseSymMatrix};
use crate::math::{hypot, sqrt};
use crate::{Error, Result};

/// A square linear map applied as `y = op(x)`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for SparseSymMatrix {
    fn dim(&self) -> usize {
        SparseSymMatrix::dim(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(self.row(i), x);
        }
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// The identity map on `R^n`.
#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

/// Norm used by the MINRES stopping test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualNorm {
    /// `sqrt(r' P^{-1} r)`, the norm MINRES minimizes.
    #[default]
    Energy,
    /// `|P^{-1} r|_2`, tracked by a short recurrence.
    PreconditionedEuclidean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinresOptions {
    /// Relative reduction of the monitored residual norm.
    pub tol: f64,
    pub max_iter: usize,
    pub norm: ResidualNorm,
}

impl Default for MinresOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 500, norm: ResidualNorm::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Monitored norm of `r_k` for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub converged: bool,
}

impl SolveResult {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&0.0)
    }
}

fn check_dims(a: &dyn LinearOperator, p: &dyn LinearOperator, n: usize) -> Result<()> {
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
    }
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    Ok(())
}

fn metric_norm(v: &[f64], z: &[f64], iteration: usize) -> Result<f64> {
    let s = dot(v, z);
    if s < 0.0 {
        return Err(Error::Breakdown { iteration });
    }
    Ok(sqrt(s))
}

/// Solves `A x = b` with MINRES, starting from `x = 0`.
///
/// `prec_inv` applies `P^{-1}`. Iteration stops once the monitored norm of the
/// residual drops below `tol` times that of `b`, or after `max_iter` steps;
/// hitting the limit is not an error, see [`SolveResult::converged`].
/// A negative `P^{-1}` inner product is reported as [`Error::Breakdown`].
pub fn minres_solve(
    a: &dyn LinearOperator,
    prec_inv: &dyn LinearOperator,
    b: &[f64],
    opts: &MinresOptions,
) -> Result<SolveResult> {
    let n = b.len();
    check_dims(a, prec_inv, n)?;
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::InvalidArgument("tolerance must lie in (0, 1)"));
    }

    let mut x = vec![0.0; n];
    let mut r1 = b.to_vec();
    let mut r2 = b.to_vec();
    let mut y = vec![0.0; n];
    prec_inv.apply(b, &mut y);
    let beta1 = metric_norm(b, &y, 0)?;
    let euclid = opts.norm == ResidualNorm::PreconditionedEuclidean;
    // z = P^{-1} r, updated as z_k = s_k^2 z_{k-1} - phi_k c_k P^{-1} v_{k+1}.
    let mut z = if euclid { y.clone() } else { Vec::new() };
    let monitored0 = if euclid { sqrt(dot(&z, &z)) } else { beta1 };
    let mut history = vec![monitored0];
    if beta1 == 0.0 {
        return Ok(SolveResult { solution: x, iterations: 0, residual_history: history, converged: true });
    }

    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut w1 = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln) = (0.0, 0.0);
    let mut phibar = beta1;
    let (mut cs, mut sn) = (-1.0, 0.0);
    let target = opts.tol * monitored0;

    for itn in 1..=opts.max_iter {
        if beta == 0.0 {
            return Err(Error::Breakdown { iteration: itn });
        }
        let s = 1.0 / beta;
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = s * yi;
        }
        a.apply(&v, &mut y);
        if itn >= 2 {
            axpy(-beta / oldb, &r1, &mut y);
        }
        let alfa = dot(&v, &y);
        axpy(-alfa / beta, &r2, &mut y);
        core::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&y);
        prec_inv.apply(&r2, &mut y);
        oldb = beta;
        beta = metric_norm(&r2, &y, itn)?;

        // Apply the previous rotation, then build the new one.
        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = hypot(gbar, beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        core::mem::swap(&mut w1, &mut w2);
        core::mem::swap(&mut w2, &mut w);
        for i in 0..n {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
        }
        axpy(phi, &w, &mut x);

        let monitored = if euclid {
            let (s2, t) = (sn * sn, if beta == 0.0 { 0.0 } else { phibar * cs / beta });
            for (zi, yi) in z.iter_mut().zip(&y) {
                *zi = s2 * *zi - t * yi;
            }
            sqrt(dot(&z, &z))
        } else {
            phibar.abs()
        };
        history.push(monitored);
        if monitored <= target {
            return Ok(SolveResult { solution: x, iterations: itn, residual_history: history, converged: true });
        }
    }
    Ok(SolveResult { solution: x, iterations: opts.max_iter, residual_history: history, converged: false })
}

/// Extreme Ritz values of `P^{-1} A` after at most `steps` Lanczos steps in
/// the `P`-inner product, with full reorthogonalization.
///
/// Returns `(smallest, largest)`. An invariant subspace ends the iteration
/// early; the Ritz values are then exact eigenvalues.
pub fn lanczos_extremes(
    a: &dyn LinearOperator,
    prec_inv: &dyn LinearOperator,
    start: &[f64],
    steps: usize,
) -> Result<(f64, f64)> {
    let n = start.len();
    check_dims(a, prec_inv, n)?;
    if steps < 2 {
        return Err(Error::InvalidArgument("lanczos needs at least 2 steps"));
    }
    // q_i are P-orthonormal, u_i = P q_i, so <q_i, u_j> = delta_ij.
    let mut qs: Vec<Vec<f64>> = Vec::new();
    let mut us: Vec<Vec<f64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas = Vec::new();

    let mut u = start.to_vec();
    let mut q = vec![0.0; n];
    prec_inv.apply(&u, &mut q);
    let mut beta = metric_norm(&u, &q, 0)?;
    if beta == 0.0 {
        return Err(Error::InvalidArgument("lanczos start vector is zero"));
    }
    let scale_ref = beta;
    let mut p = vec![0.0; n];
    for it in 0..steps.min(n) {
        q.iter_mut().for_each(|v| *v /= beta);
        u.iter_mut().for_each(|v| *v /= beta);
        a.apply(&q, &mut p);
        let alpha = dot(&p, &q);
        alphas.push(alpha);
        qs.push(q.clone());
        us.push(u.clone());
        // Two passes of classical Gram-Schmidt against all previous vectors.
        for _ in 0..2 {
            for (qi, ui) in qs.iter().zip(&us) {
                let c = dot(&p, qi);
                axpy(-c, ui, &mut p);
            }
        }
        u.copy_from_slice(&p);
        prec_inv.apply(&u, &mut q);
        beta = metric_norm(&u, &q, it + 1)?;
        if it + 1 == steps.min(n) || beta <= 1e-12 * scale_ref.max(alpha.abs()) {
            break;
        }
        betas.push(beta);
    }
    let ritz = tridiag_eigvals(&alphas, &betas)?;
    Ok((ritz[0], ritz[ritz.len() - 1]))
}
