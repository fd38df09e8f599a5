use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Polynomial in up to three variables, stored as a sorted list of monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    terms: Vec<([u32; 3], f64)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(&[([0, 0, 0], c)])
    }

    /// The coordinate `xi_var`.
    pub fn var(var: usize) -> Self {
        let mut e = [0; 3];
        e[var] = 1;
        Self::from_terms(&[(e, 1.0)])
    }

    pub fn from_terms(terms: &[([u32; 3], f64)]) -> Self {
        let mut t = terms.to_vec();
        t.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<([u32; 3], f64)> = Vec::with_capacity(t.len());
        for (e, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| *c != 0.0);
        Self { terms: out }
    }

    pub fn terms(&self) -> &[([u32; 3], f64)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = *c;
                for (k, &ek) in e.iter().enumerate() {
                    for _ in 0..ek {
                        v *= x[k];
                    }
                }
                v
            })
            .sum()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let t: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = *e;
                e2[var] -= 1;
                (e2, c * e[var] as f64)
            })
            .collect();
        Self::from_terms(&t)
    }

    pub fn add(&self, other: &Poly) -> Self {
        let mut t = self.terms.clone();
        t.extend_from_slice(&other.terms);
        Self::from_terms(&t)
    }

    pub fn sub(&self, other: &Poly) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let t: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c * s)).collect();
        Self::from_terms(&t)
    }

    pub fn mul(&self, other: &Poly) -> Self {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                t.push(([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb));
            }
        }
        Self::from_terms(&t)
    }

    /// Degree in variable `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }
}

/// Map, Jacobian `jac[k][a] = dF_k/dxi_a` and Hessians `hess[k][a][b]` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoEval {
    pub x: [f64; 3],
    pub jac: [[f64; 3]; 3],
    pub hess: [[[f64; 3]; 3]; 3],
}

/// Polynomial parametrization `F: (0,1)^d -> Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryMap {
    dim: usize,
    components: Vec<Poly>,
    jac: Vec<Vec<Poly>>,
    hess: Vec<Vec<Vec<Poly>>>,
    det: Poly,
}

impl GeometryMap {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let dim = components.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument("geometry dimension must be 1, 2 or 3"));
        }
        for c in &components {
            if (dim..3).any(|v| c.degree_in(v) > 0) {
                return Err(Error::InvalidArgument("geometry uses more variables than its dimension"));
            }
        }
        let jac: Vec<Vec<Poly>> =
            components.iter().map(|c| (0..dim).map(|a| c.derivative(a)).collect()).collect();
        let hess = jac
            .iter()
            .map(|row| row.iter().map(|p| (0..dim).map(|b| p.derivative(b)).collect()).collect())
            .collect();
        let det = poly_det(&jac);
        Ok(Self { dim, components, jac, hess, det })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(Poly::var).collect())
    }

    /// Quarter of an annulus with radii 1 and 2, as a polynomial map.
    pub fn annulus_2d() -> Self {
        let f1 = Poly::from_terms(&[
            ([0, 0, 0], 1.0),
            ([1, 0, 0], 1.0),
            ([1, 1, 0], -1.0),
            ([0, 2, 0], -1.0),
        ]);
        let f2 = Poly::from_terms(&[
            ([1, 1, 0], 2.0),
            ([1, 2, 0], -1.0),
            ([0, 1, 0], 2.0),
            ([0, 2, 0], -1.0),
        ]);
        Self::new(vec![f1, f2]).expect("valid map")
    }

    /// Twisted cubic deformation of the unit cube.
    pub fn twisted_3d() -> Self {
        let f1 = Poly::from_terms(&[
            ([1, 3, 1], 1.5),
            ([1, 3, 0], -1.0),
            ([1, 2, 1], -1.5),
            ([1, 0, 0], 1.0),
            ([0, 3, 1], 0.5),
            ([0, 3, 0], 0.5),
            ([0, 2, 1], 1.5),
            ([0, 2, 0], -1.5),
            ([0, 0, 0], 1.0),
        ]);
        let f2 = Poly::from_terms(&[
            ([1, 3, 0], 1.0),
            ([1, 2, 0], -3.0),
            ([1, 1, 0], 3.0),
            ([0, 3, 0], -0.5),
            ([0, 1, 0], 1.5),
        ]);
        let f3 = Poly::from_terms(&[
            ([0, 3, 1], -1.0),
            ([0, 3, 0], 0.5),
            ([0, 2, 0], 1.5),
            ([0, 0, 1], 1.0),
        ]);
        Self::new(vec![f1, f2, f3]).expect("valid map")
    }

    /// `F(xi) = offset + matrix * xi`.
    pub fn affine(matrix: &[[f64; 3]; 3], offset: &[f64; 3], dim: usize) -> Result<Self> {
        let comps = (0..dim)
            .map(|k| {
                let mut p = Poly::constant(offset[k]);
                for a in 0..dim {
                    p = p.add(&Poly::var(a).scale(matrix[k][a]));
                }
                p
            })
            .collect();
        Self::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `det J` as a polynomial.
    pub fn jacobian_determinant(&self) -> &Poly {
        &self.det
    }

    pub fn eval(&self, xi: &[f64; 3]) -> GeoEval {
        let mut out = GeoEval { x: [0.0; 3], jac: [[0.0; 3]; 3], hess: [[[0.0; 3]; 3]; 3] };
        for k in 0..self.dim {
            out.x[k] = self.components[k].eval(xi);
            for a in 0..self.dim {
                out.jac[k][a] = self.jac[k][a].eval(xi);
                for b in 0..self.dim {
                    out.hess[k][a][b] = self.hess[k][a][b].eval(xi);
                }
            }
        }
        out
    }
}

fn poly_det(j: &[Vec<Poly>]) -> Poly {
    match j.len() {
        1 => j[0][0].clone(),
        2 => j[0][0].mul(&j[1][1]).sub(&j[0][1].mul(&j[1][0])),
        _ => {
            let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
                j[r1][c1].mul(&j[r2][c2]).sub(&j[r1][c2].mul(&j[r2][c1]))
            };
            j[0][0]
                .mul(&minor(1, 2, 1, 2))
                .sub(&j[0][1].mul(&minor(1, 2, 0, 2)))
                .add(&j[0][2].mul(&minor(1, 2, 0, 1)))
        }
    }
}

/// Determinant of the leading `d x d` block.
pub(crate) fn det(m: &[[f64; 3]; 3], d: usize) -> f64 {
    match d {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

/// Inverse of the leading `d x d` block via the adjugate.
pub(crate) fn inverse(m: &[[f64; 3]; 3], d: usize) -> [[f64; 3]; 3] {
    let det = det(m, d);
    let mut inv = [[0.0; 3]; 3];
    match d {
        1 => inv[0][0] = 1.0 / m[0][0],
        2 => {
            inv[0][0] = m[1][1] / det;
            inv[0][1] = -m[0][1] / det;
            inv[1][0] = -m[1][0] / det;
            inv[1][1] = m[0][0] / det;
        }
        _ => {
            for i in 0..3 {
                for j in 0..3 {
                    let (r1, r2) = ((j + 1) % 3, (j + 2) % 3);
                    let (c1, c2) = ((i + 1) % 3, (i + 2) % 3);
                    inv[i][j] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / det;
                }
            }
        }
    }
    inv
}
