use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Univariate spline space on `[0, 1]` with `2^level` uniform spans, degree
/// `p` and `C^k` continuity at interior knots (`k = -1` is discontinuous).
///
/// The knot vector is open: both ends have multiplicity `p + 1`, interior
/// knots multiplicity `p - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSpace1D {
    degree: usize,
    smoothness: i32,
    level: u32,
    knots: Vec<f64>,
    /// Knot index `s` with `knots[s] <= x < knots[s+1]` for each element.
    element_span: Vec<usize>,
}

/// Nonzero basis functions at a point: `ders[k][j]` is the `k`-th derivative
/// of basis function `first + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub first: usize,
    pub ders: Vec<Vec<f64>>,
}

impl SplineSpace1D {
    pub fn new(degree: usize, smoothness: i32, level: u32) -> Result<Self> {
        if smoothness < -1 || smoothness >= degree as i32 {
            return Err(Error::InvalidArgument("smoothness must satisfy -1 <= k < p"));
        }
        if level > 20 {
            return Err(Error::InvalidArgument("level too large"));
        }
        let mult = (degree as i32 - smoothness) as usize;
        let spans = 1usize << level;
        let mut knots = vec![0.0; degree + 1];
        let mut element_span = Vec::with_capacity(spans);
        element_span.push(degree);
        for e in 1..spans {
            let t = e as f64 / spans as f64;
            knots.extend(core::iter::repeat_n(t, mult));
            element_span.push(knots.len() - 1);
        }
        knots.extend(core::iter::repeat_n(1.0, degree + 1));
        Ok(Self { degree, smoothness, level, knots, element_span })
    }

    /// Maximal smoothness space `k = p - 1`.
    pub fn maximal(degree: usize, level: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive"));
        }
        Self::new(degree, degree as i32 - 1, level)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn smoothness(&self) -> i32 {
        self.smoothness
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn dim(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn num_elements(&self) -> usize {
        self.element_span.len()
    }

    /// Parameter interval of element `e`.
    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        let n = self.num_elements() as f64;
        (e as f64 / n, (e + 1) as f64 / n)
    }

    pub fn element_of(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        let n = self.num_elements();
        Ok(((x * n as f64) as usize).min(n - 1))
    }

    /// Values and derivatives up to order `max_deriv` (at most 2) of the
    /// nonzero basis functions at `x`.
    pub fn eval_basis(&self, x: f64, max_deriv: usize) -> Result<BasisEval> {
        let e = self.element_of(x)?;
        self.eval_in_element(e, x, max_deriv)
    }

    /// Like [`eval_basis`](Self::eval_basis) but uses the polynomial piece of
    /// element `e`, which also covers the element end points.
    pub fn eval_in_element(&self, e: usize, x: f64, max_deriv: usize) -> Result<BasisEval> {
        if max_deriv > 2 {
            return Err(Error::InvalidArgument("derivatives above second order are not supported"));
        }
        if e >= self.num_elements() {
            return Err(Error::InvalidArgument("element index out of range"));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        let span = self.element_span[e];
        Ok(BasisEval { first: span - self.degree, ders: ders_basis_funs(&self.knots, span, self.degree, x, max_deriv) })
    }
}

/// Cox-de Boor values and derivatives of the `p + 1` functions nonzero on
/// knot span `span` (Piegl and Tiller, algorithm A2.3).
fn ders_basis_funs(knots: &[f64], span: usize, p: usize, x: f64, nd: usize) -> Vec<Vec<f64>> {
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    let mut ders = vec![vec![0.0; p + 1]; nd + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let mut a = vec![vec![0.0; p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=nd.min(p) {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            core::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = p as f64;
    for k in 1..=nd.min(p) {
        for v in ders[k].iter_mut() {
            *v *= factor;
        }
        factor *= (p - k) as f64;
    }
    ders
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn dimensions() {
        for p in 1..5 {
            for l in 0..5 {
                assert_eq!(SplineSpace1D::maximal(p, l).unwrap().dim(), (1 << l) + p);
            }
        }
        // C^0 quadratics on two spans: 0 0 0 .5 .5 1 1 1
        assert_eq!(SplineSpace1D::new(2, 0, 1).unwrap().dim(), 5);
        assert_eq!(SplineSpace1D::new(2, -1, 1).unwrap().dim(), 6);
        assert!(SplineSpace1D::new(2, 2, 1).is_err());
    }

    #[test]
    fn hats() {
        let s = SplineSpace1D::maximal(1, 1).unwrap();
        let b = s.eval_basis(0.25, 1).unwrap();
        assert_eq!(b.first, 0);
        assert_abs_diff_eq!(b.ders[0][0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ders[0][1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.ders[1][0], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.ders[1][1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn bernstein_quadratic() {
        let s = SplineSpace1D::maximal(2, 0).unwrap();
        for &x in &[0.0, 0.3, 0.5, 1.0] {
            let b = s.eval_basis(x, 2).unwrap();
            let y = 1.0 - x;
            let oracle = [[y * y, 2.0 * x * y, x * x], [-2.0 * y, 2.0 - 4.0 * x, 2.0 * x], [2.0, -4.0, 2.0]];
            for k in 0..3 {
                for j in 0..3 {
                    assert_abs_diff_eq!(b.ders[k][j], oracle[k][j], epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn out_of_domain() {
        let s = SplineSpace1D::maximal(2, 2).unwrap();
        assert!(matches!(s.eval_basis(1.5, 0), Err(Error::OutOfDomain(_))));
        assert!(s.eval_basis(-0.1, 0).is_err());
        assert!(s.eval_basis(0.5, 3).is_err());
    }

    #[test]
    fn second_derivative_of_linear_is_zero() {
        let s = SplineSpace1D::maximal(1, 2).unwrap();
        let b = s.eval_basis(0.4, 2).unwrap();
        assert!(b.ders[2].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let s = SplineSpace1D::new(3, 1, 2).unwrap();
        let h = 1e-6;
        for &x in &[0.1, 0.33, 0.6, 0.9] {
            let e = s.element_of(x).unwrap();
            let b = s.eval_in_element(e, x, 2).unwrap();
            let bp = s.eval_in_element(e, x + h, 1).unwrap();
            let bm = s.eval_in_element(e, x - h, 1).unwrap();
            for j in 0..4 {
                let d1 = (bp.ders[0][j] - bm.ders[0][j]) / (2.0 * h);
                let d2 = (bp.ders[1][j] - bm.ders[1][j]) / (2.0 * h);
                assert_abs_diff_eq!(b.ders[1][j], d1, epsilon = 1e-6);
                assert_abs_diff_eq!(b.ders[2][j], d2, epsilon = 1e-5);
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(x in 0.0f64..=1.0, p in 1usize..5, l in 0u32..5, dk in 1i32..3) {
            let k = (p as i32 - dk).max(-1);
            let s = SplineSpace1D::new(p, k, l).unwrap();
            let b = s.eval_basis(x, 2).unwrap();
            let sum: f64 = b.ders[0].iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-13);
            prop_assert!(b.ders[0].iter().all(|&v| v >= -1e-15));
            prop_assert!(b.ders[1].iter().sum::<f64>().abs() <= 1e-10);
            prop_assert!(b.first + p < s.dim());
        }
    }
}
