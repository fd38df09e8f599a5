use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::cos;

/// Gauss-Legendre rule with `q` points on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(q: usize) -> Self {
        assert!(q > 0, "a quadrature rule needs at least one point");
        let mut points = vec![0.0; q];
        let mut weights = vec![0.0; q];
        for i in 0..q {
            // Newton iteration on P_q from the Chebyshev-like initial guess.
            let mut x = cos(PI * (i as f64 + 0.75) / (q as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(q, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(q, x);
            if d != 0.0 {
                dp = d;
            }
            // Map from [-1, 1] to [0, 1].
            points[q - 1 - i] = 0.5 * (1.0 + x);
            weights[q - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let h = b - a;
        (self.points.iter().map(|t| a + h * t).collect(), self.weights.iter().map(|w| h * w).collect())
    }
}

/// `(P_n(x), P_n'(x))`
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}
