//! Dense symmetric eigensolvers: Householder tridiagonalization followed by
//! the implicit QL algorithm with Wilkinson-type shifts (the classic
//! `tred2`/`tql2` pair).

use alloc::vec;
use alloc::vec::Vec;

use super::{DenseCholesky, DenseMatrix};
use crate::math::{hypot, sqrt};
use crate::{Error, Result};

/// Relative asymmetry accepted by the dense eigensolvers.
const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: DenseMatrix,
}

fn check_symmetric(m: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL * m.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric matrix.
pub fn sym_eig_dense(m: &DenseMatrix) -> Result<SymEigen> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut v = m.clone();
    v.symmetrize();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, true);
    tql2(&mut d, &mut e, Some(&mut v))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues (ascending) of a symmetric matrix, without eigenvectors.
pub fn sym_eigvals_dense(m: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut v = m.clone();
    v.symmetrize();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, false);
    tql2(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (`off.len() == diag.len() - 1`).
pub fn tridiag_eigvals(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, found: off.len() });
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    tql2(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues (ascending) of the pencil `a x = lambda s x` with `s` SPD,
/// computed through the reduction `L^{-1} a L^{-T}`, `s = L L^T`.
pub fn gen_sym_eig(a: &DenseMatrix, s: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    check_symmetric(s)?;
    if a.rows() != s.rows() {
        return Err(Error::DimensionMismatch { expected: s.rows(), found: a.rows() });
    }
    let chol = DenseCholesky::factor(s)?;
    let c = chol.congruence_inverse(a)?;
    sym_eigvals_dense(&c)
}

/// Householder reduction to tridiagonal form. On exit `d` holds the diagonal,
/// `e[1..]` the subdiagonal. With `accumulate`, `v` holds the orthogonal
/// transformation.
fn tred2(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = v[(j, j)];
        }
        e[0] = 0.0;
        return;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on a symmetric tridiagonal matrix (`d` diagonal,
/// `e[1..]` subdiagonal). Rotations are applied to `v` when given.
fn tql2(d: &mut [f64], e: &mut [f64], mut v: Option<&mut DenseMatrix>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    let max_iter = 50 * n.max(10);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        for k in 0..n {
                            h = v[(k, i + 1)];
                            v[(k, i + 1)] = s * v[(k, i)] + c * h;
                            v[(k, i)] = c * v[(k, i)] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
