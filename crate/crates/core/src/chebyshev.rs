//! Chebyshev-type polynomials behind the condition number bounds.
//!
//! `P_j(x) = U_j(x/2)` with `U_j` the Chebyshev polynomials of the second
//! kind, and `Pbar_j = P_j - P_{j-1}`. Both satisfy `Q_{i+1} = x Q_i - Q_{i-1}`,
//! starting from `(1, x)` and `(1, x - 1)` respectively. The roots of `Pbar_j`
//! are `2 cos((2i - 1) pi / (2j + 1))`, `i = 1..=j`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::{sym_eigvals_dense, DenseMatrix};
use crate::math::{cos, sin};
use crate::{Error, Result};

/// Polynomial in monomial form, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRecurrence {
    pub degree: usize,
    pub coefficients: Vec<f64>,
}

impl PolyRecurrence {
    fn from_recurrence(j: usize, first: [f64; 2]) -> Self {
        let mut prev = vec![1.0];
        if j == 0 {
            return Self { degree: 0, coefficients: prev };
        }
        let mut cur = first.to_vec();
        for _ in 1..j {
            let mut next = vec![0.0; cur.len() + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += c;
            }
            for (k, c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = cur;
            cur = next;
        }
        Self { degree: j, coefficients: cur }
    }

    /// `P_j` in monomial form.
    pub fn p(j: usize) -> Self {
        Self::from_recurrence(j, [0.0, 1.0])
    }

    /// `Pbar_j` in monomial form.
    pub fn pbar(j: usize) -> Self {
        Self::from_recurrence(j, [-1.0, 1.0])
    }

    /// Horner evaluation. Loses accuracy for large degree; prefer [`p_eval`]/[`pbar_eval`].
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn recurrence_eval(j: usize, x: f64, first: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, first);
    for _ in 1..j {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_j(x)` by forward recurrence.
pub fn p_eval(j: usize, x: f64) -> f64 {
    recurrence_eval(j, x, x)
}

/// `Pbar_j(x)` by forward recurrence.
pub fn pbar_eval(j: usize, x: f64) -> f64 {
    recurrence_eval(j, x, x - 1.0)
}

/// Roots of `Pbar_j` in descending order.
pub fn pbar_roots(j: usize) -> Result<Vec<f64>> {
    if j == 0 {
        return Err(Error::InvalidArgument("Pbar_0 is constant and has no roots"));
    }
    let denom = (2 * j + 1) as f64;
    Ok((1..=j).map(|i| 2.0 * cos((2 * i - 1) as f64 * PI / denom)).collect())
}

/// Modulus of the root of `Pbar_j` closest to zero: `2 sin(pi / (2(2j+1)))`.
pub fn smallest_abs_root(j: usize) -> f64 {
    2.0 * sin(PI / (2.0 * (2 * j + 1) as f64))
}

/// Largest root of `Pbar_j`: `2 cos(pi / (2j+1))`.
pub fn largest_root(j: usize) -> f64 {
    2.0 * cos(PI / (2 * j + 1) as f64)
}

/// Young's inequality weights `eps_1, ..., eps_{n-1}` that equalize the
/// diagonal of the upper bound matrix for an `n`-block system.
///
/// `eps_{n-1}` is the largest root of `Pbar_n`; the others follow from
/// `eps_{n-i} = P_i(eps_{n-1}) / P_{i-1}(eps_{n-1})`. Index 0 holds `eps_1`.
pub fn epsilon_sequence(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument("epsilon sequence needs n >= 2"));
    }
    let top = largest_root(n);
    let mut eps = vec![0.0; n - 1];
    eps[n - 2] = top;
    for i in 2..n {
        eps[n - 1 - i] = p_eval(i, top) / p_eval(i - 1, top);
    }
    Ok(eps)
}

/// Theoretical bounds for an `n`-block Schur complement preconditioned system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub n: usize,
    /// Upper bound of `||M||`: `2 cos(pi/(2n+1))`.
    pub norm_bound: f64,
    /// Upper bound of `||M^{-1}||`: `1 / (2 sin(pi/(2(2n+1))))`.
    pub inv_norm_bound: f64,
    /// `norm_bound * inv_norm_bound = cos(pi/(2n+1)) / sin(pi/(2(2n+1)))`.
    pub cond_bound: f64,
}

///
/// `n = 1` is allowed and gives the trivial bounds `1, 1, 1`.
pub fn bounds(n: usize) -> Result<BoundSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("bounds need n >= 1"));
    }
    let norm_bound = largest_root(n);
    let inv_norm_bound = 1.0 / smallest_abs_root(n);
    Ok(BoundSet { n, norm_bound, inv_norm_bound, cond_bound: norm_bound * inv_norm_bound })
}

/// The integer matrix `Q_j^{-1}`: symmetric tridiagonal with diagonal
/// `(1, 0, ..., 0)` and off-diagonal entries `-1, 1, -1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub j: usize,
    /// Row-major `j x j` entries of `Q_j^{-1}`.
    pub entries: Vec<i64>,
}

impl QMatrix {
    pub fn new(j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidArgument("Q_j needs j >= 1"));
        }
        let mut entries = vec![0i64; j * j];
        entries[0] = 1;
        for i in 0..j - 1 {
            let v = if i % 2 == 0 { -1 } else { 1 };
            entries[i * j + i + 1] = v;
            entries[(i + 1) * j + i] = v;
        }
        Ok(Self { j, entries })
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.j + c]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let data = self.entries.iter().map(|&v| v as f64).collect();
        DenseMatrix::from_row_major(self.j, self.j, data).expect("square")
    }
}

/// Spectral norm of `Q_j`, i.e. `1 / min |eig(Q_j^{-1})|`, computed densely.
pub fn q_matrix_norm(j: usize) -> Result<f64> {
    let q = QMatrix::new(j)?;
    let eig = sym_eigvals_dense(&q.to_dense())?;
    let min_abs = eig.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    Ok(1.0 / min_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;
    use approx::assert_abs_diff_eq;
    use std::vec::Vec;

    /// Bisection on a sign change of `Pbar_j`, independent of the closed form.
    fn bisect(j: usize, mut lo: f64, mut hi: f64) -> f64 {
        let flo = pbar_eval(j, lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (pbar_eval(j, mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn bisection_roots(j: usize) -> Vec<f64> {
        // Shifted grid so no sample lands exactly on a root.
        let grid = 20000;
        let h = 4.0 / grid as f64;
        let xs: Vec<f64> = (0..=grid + 1).map(|k| -2.0 - 0.5 * h * 0.713 + h * k as f64).collect();
        let mut roots = Vec::new();
        for w in xs.windows(2) {
            if pbar_eval(j, w[0]) * pbar_eval(j, w[1]) < 0.0 {
                roots.push(bisect(j, w[0], w[1]));
            }
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        roots
    }

    #[test]
    fn pbar_eval_examples() {
        assert_eq!(pbar_eval(1, 1.0), 0.0);
        assert_abs_diff_eq!(pbar_eval(2, 2.0 * cos(PI / 5.0)), 0.0, epsilon = 1e-12);
        // Pbar_4 = x^4 - x^3 - 3x^2 + 2x + 1, expanded by hand.
        let x: f64 = 0.7;
        let expected = x.powi(4) - x.powi(3) - 3.0 * x * x + 2.0 * x + 1.0;
        assert_abs_diff_eq!(pbar_eval(4, x), expected, epsilon = 1e-14);
        assert_eq!(PolyRecurrence::pbar(4).coefficients, vec![1.0, 2.0, -3.0, -1.0, 1.0]);
    }

    #[test]
    fn p_is_scaled_chebyshev_second_kind() {
        // U_j(cos t) = sin((j+1) t) / sin t
        for j in 0..12 {
            for k in 0..20 {
                let t = 0.05 + 3.0 * k as f64 / 20.0;
                let x = 2.0 * cos(t);
                let u = sin((j + 1) as f64 * t) / sin(t);
                assert_abs_diff_eq!(p_eval(j, x), u, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn monomial_and_recurrence_agree() {
        for j in 0..9 {
            let p = PolyRecurrence::p(j);
            let pb = PolyRecurrence::pbar(j);
            assert_eq!(p.degree, j);
            for k in 0..10 {
                let x = -2.0 + 0.4 * k as f64;
                assert_abs_diff_eq!(p.eval(x), p_eval(j, x), epsilon = 1e-10);
                assert_abs_diff_eq!(pb.eval(x), pbar_eval(j, x), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn roots_examples() {
        let r1 = pbar_roots(1).unwrap();
        assert_eq!(r1.len(), 1);
        assert_abs_diff_eq!(r1[0], 1.0, epsilon = 1e-15);
        let r2 = pbar_roots(2).unwrap();
        assert_abs_diff_eq!(r2[0], 0.5 * (sqrt(5.0) + 1.0), epsilon = 1e-14);
        assert_abs_diff_eq!(r2[1], -0.5 * (sqrt(5.0) - 1.0), epsilon = 1e-14);
        let r3 = pbar_roots(3).unwrap();
        let oracle = bisection_roots(3);
        assert_eq!(oracle.len(), 3);
        for (a, b) in r3.iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert!(pbar_roots(0).is_err());
    }

    #[test]
    fn roots_against_bisection_oracle() {
        for j in 1..=10 {
            let closed = pbar_roots(j).unwrap();
            let oracle = bisection_roots(j);
            assert_eq!(closed.len(), oracle.len());
            for (a, b) in closed.iter().zip(&oracle) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
            for r in &closed {
                assert!(pbar_eval(j, *r).abs() <= 1e-10);
            }
            assert!(closed.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn roots_interlace() {
        for j in 1..10 {
            let a = pbar_roots(j).unwrap();
            let b = pbar_roots(j + 1).unwrap();
            // Descending: b[0] > a[0] > b[1] > a[1] > ... > a[j-1] > b[j].
            for i in 0..j {
                assert!(b[i] > a[i] && a[i] > b[i + 1], "j = {j}, i = {i}");
            }
        }
    }

    #[test]
    fn smallest_root_examples() {
        assert_abs_diff_eq!(smallest_abs_root(1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(smallest_abs_root(2), 0.5 * (sqrt(5.0) - 1.0), epsilon = 1e-15);
        for j in 1..=10 {
            let m = pbar_roots(j).unwrap().iter().fold(f64::INFINITY, |m, r| m.min(r.abs()));
            assert_abs_diff_eq!(smallest_abs_root(j), m, epsilon = 1e-12);
        }
    }

    #[test]
    fn epsilon_chain_identities() {
        let e2 = epsilon_sequence(2).unwrap();
        assert_eq!(e2.len(), 1);
        assert_abs_diff_eq!(e2[0], 2.0 * cos(PI / 5.0), epsilon = 1e-15);
        assert_abs_diff_eq!(1.0 + 1.0 / e2[0], e2[0], epsilon = 1e-12);

        let e3 = epsilon_sequence(3).unwrap();
        assert_abs_diff_eq!(e3[1], 1.801_937_735_804_838, epsilon = 1e-12);
        assert_abs_diff_eq!(e3[0], e3[1] - 1.0 / e3[1], epsilon = 1e-12);
        assert_abs_diff_eq!(pbar_eval(3, e3[1]), 0.0, epsilon = 1e-12);

        for n in 2..=8 {
            let eps = epsilon_sequence(n).unwrap();
            let top = eps[n - 2];
            assert_abs_diff_eq!(1.0 + 1.0 / eps[0], top, epsilon = 1e-12);
            for i in 2..n {
                assert_abs_diff_eq!(eps[i - 2] + 1.0 / eps[i - 1], top, epsilon = 1e-12);
            }
            assert!(eps.iter().all(|&e| e >= 1.0));
            for i in 0..n {
                assert!(pbar_eval(i, top) >= 0.0);
            }
        }
        assert!(epsilon_sequence(1).is_err());
    }

    #[test]
    fn bound_examples() {
        let b2 = bounds(2).unwrap();
        assert_abs_diff_eq!(b2.cond_bound, (3.0 + sqrt(5.0)) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b2.norm_bound, 0.5 * (sqrt(5.0) + 1.0), epsilon = 1e-14);
        assert_abs_diff_eq!(b2.inv_norm_bound, 1.0 / (0.5 * (sqrt(5.0) - 1.0)), epsilon = 1e-14);
        let b1 = bounds(1).unwrap();
        assert_abs_diff_eq!(b1.cond_bound, 1.0, epsilon = 1e-14);
        assert!(bounds(0).is_err());
        let b3 = bounds(3).unwrap();
        assert!((b3.cond_bound - 4.05).abs() < 5e-3);
        let mut prev = 0.0;
        for n in 2..20 {
            let c = bounds(n).unwrap().cond_bound;
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn q_matrix_structure() {
        let q = QMatrix::new(4).unwrap();
        let expected = [1, -1, 0, 0, -1, 0, 1, 0, 0, 1, 0, -1, 0, 0, -1, 0];
        assert_eq!(q.entries, expected.to_vec());
    }

    /// Characteristic polynomial coefficients (ascending) by Faddeev-LeVerrier.
    fn char_poly(a: &DenseMatrix) -> Vec<f64> {
        let n = a.rows();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut m = DenseMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = a.matmul(&m).unwrap();
            for i in 0..n {
                next[(i, i)] += coeffs[n - k + 1];
            }
            m = next;
            let am = a.matmul(&m).unwrap();
            let trace: f64 = (0..n).map(|i| am[(i, i)]).sum();
            coeffs[n - k] = -trace / k as f64;
        }
        coeffs
    }

    #[test]
    fn q_characteristic_polynomial_is_pbar() {
        for j in 1..=8 {
            let cp = char_poly(&QMatrix::new(j).unwrap().to_dense());
            let pb = PolyRecurrence::pbar(j).coefficients;
            for (a, b) in cp.iter().zip(&pb) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "j={j}: {cp:?} vs {pb:?}");
            }
        }
    }

    #[test]
    fn q_norm_examples() {
        assert_abs_diff_eq!(q_matrix_norm(1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q_matrix_norm(2).unwrap(), (1.0 + sqrt(5.0)) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            q_matrix_norm(7).unwrap(),
            1.0 / (2.0 * sin(PI / 30.0)),
            epsilon = 1e-12
        );
        for j in 1..=10 {
            assert_abs_diff_eq!(q_matrix_norm(j).unwrap(), 1.0 / smallest_abs_root(j), epsilon = 1e-12);
        }
    }

    #[test]
    fn q_inverse_eigenvalues_are_pbar_roots() {
        let eig = sym_eigvals_dense(&QMatrix::new(5).unwrap().to_dense()).unwrap();
        let mut roots = pbar_roots(5).unwrap();
        roots.reverse();
        for (a, b) in eig.iter().zip(&roots) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}
