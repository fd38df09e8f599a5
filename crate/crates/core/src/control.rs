//! Optimality systems of elliptic optimal control problems, discretized with
//! tensor-product splines, in block tridiagonal form.
//!
//! Four problems are available:
//!
//! * `BoundaryObservation`: distributed control, observation of the normal
//!   derivative on the boundary, strong state equation. Unknowns `(f, w, u)`,
//!   three blocks `(alpha M, 0, K_b)` with couplings `M` and `K'`.
//! * `DistributedStrong`: distributed control and observation, strong state
//!   equation, same ordering and couplings with `A_3 = M`.
//! * `DistributedVeryWeak`: distributed control and observation, very weak
//!   state equation. Unknowns `((u, f), w)` as a two-block system.
//! * `BoundaryControl`: boundary control, distributed observation, very weak
//!   state equation. Unknowns `((u, f), w)` with `f` on the boundary.
//!
//! States with the strong equation and multipliers with the very weak one
//! live in the zero-trace subspace of the spline space.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::linalg::{CsrMatrix, SparseSymMatrix, Triplet};
use crate::math::{cos, sin};
use crate::saddle::{schur_update, BlockTridiagSystem, PrecondBlock, SchurPreconditioner};
use crate::spline::{Assembler, BoundarySpace, GeometryMap, SplineSpace1D, TensorSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    DistributedVeryWeak,
    DistributedStrong,
    BoundaryControl,
    BoundaryObservation,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::DistributedVeryWeak,
        ProblemKind::DistributedStrong,
        ProblemKind::BoundaryControl,
        ProblemKind::BoundaryObservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DistributedVeryWeak => "distributed_very_weak",
            Self::DistributedStrong => "distributed_strong",
            Self::BoundaryControl => "boundary_control",
            Self::BoundaryObservation => "boundary_observation",
        }
    }

    /// Number of blocks of the optimality system.
    pub fn blocks(self) -> usize {
        match self {
            Self::DistributedVeryWeak | Self::BoundaryControl => 2,
            Self::DistributedStrong | Self::BoundaryObservation => 3,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or(Error::InvalidArgument("unknown problem; expected distributed_very_weak, distributed_strong, boundary_control or boundary_observation"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    /// The identity map on `(0,1)^d`.
    UnitSquare,
    Annulus2d,
    Twisted3d,
}

impl GeometryKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::UnitSquare => "unit_square",
            Self::Annulus2d => "annulus_2d",
            Self::Twisted3d => "twisted_3d",
        }
    }

    /// The curved domain used for experiments in dimension `d`.
    pub fn default_for(d: usize) -> Self {
        match d {
            2 => Self::Annulus2d,
            3 => Self::Twisted3d,
            _ => Self::UnitSquare,
        }
    }

    pub fn build(self, d: usize) -> Result<GeometryMap> {
        match (self, d) {
            (Self::UnitSquare, _) => GeometryMap::identity(d),
            (Self::Annulus2d, 2) => Ok(GeometryMap::annulus_2d()),
            (Self::Twisted3d, 3) => Ok(GeometryMap::twisted_3d()),
            _ => Err(Error::InvalidArgument("geometry does not exist in this dimension")),
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_square" | "unit_cube" | "identity" => Ok(Self::UnitSquare),
            "annulus_2d" => Ok(Self::Annulus2d),
            "twisted_3d" => Ok(Self::Twisted3d),
            _ => Err(Error::InvalidArgument("unknown geometry; expected unit_square, annulus_2d or twisted_3d")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConfig {
    pub problem: ProblemKind,
    pub dim: usize,
    pub degree: usize,
    pub level: u32,
    pub alpha: f64,
    pub geometry: GeometryKind,
    /// Smoothness of the `L^2` spaces of control and multiplier in the
    /// strong formulations; `None` means maximal smoothness `p - 1`.
    pub test_smoothness: Option<i32>,
    /// Gauss points per direction; `None` uses the assembler default.
    pub quad_points: Option<usize>,
}

impl ProblemConfig {
    pub fn new(problem: ProblemKind, dim: usize, degree: usize, level: u32, alpha: f64) -> Self {
        Self { problem, dim, degree, level, alpha, geometry: GeometryKind::default_for(dim), test_smoothness: None, quad_points: None }
    }

    pub fn with_geometry(mut self, geometry: GeometryKind) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_test_smoothness(mut self, k: i32) -> Self {
        self.test_smoothness = Some(k);
        self
    }

    pub fn with_quad_points(mut self, q: usize) -> Self {
        self.quad_points = Some(q);
        self
    }

    fn assembler<'a>(&self, geo: &'a GeometryMap) -> Assembler<'a> {
        match self.quad_points {
            Some(q) => Assembler::with_points(geo, q),
            None => Assembler::new(geo),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument("alpha must be positive"));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidArgument("dimension must be 1, 2 or 3"));
        }
        if self.degree < 2 {
            return Err(Error::InvalidArgument("degree must be at least 2 for H^2 conforming states"));
        }
        if self.problem == ProblemKind::BoundaryControl && self.dim < 2 {
            return Err(Error::InvalidArgument("boundary control needs dimension 2 or 3"));
        }
        if self.test_smoothness.is_some()
            && !matches!(self.problem, ProblemKind::BoundaryObservation | ProblemKind::DistributedStrong)
        {
            return Err(Error::InvalidArgument("a test space smoothness only applies to the strong formulations"));
        }
        if self.quad_points == Some(0) {
            return Err(Error::InvalidArgument("quadrature needs at least one point"));
        }
        self.geometry.build(self.dim).map(|_| ())
    }

    /// Total number of unknowns, from the space dimensions alone.
    pub fn dof(&self) -> Result<usize> {
        self.validate()?;
        let n = SplineSpace1D::maximal(self.degree, self.level)?.dim();
        let full = n.pow(self.dim as u32);
        let interior = (n - 2).pow(self.dim as u32);
        Ok(match self.problem {
            ProblemKind::BoundaryObservation | ProblemKind::DistributedStrong => {
                let k = self.test_smoothness.unwrap_or(self.degree as i32 - 1);
                let w = SplineSpace1D::new(self.degree, k, self.level)?.dim().pow(self.dim as u32);
                2 * w + interior
            }
            ProblemKind::DistributedVeryWeak => 2 * full + interior,
            ProblemKind::BoundaryControl => {
                full + BoundarySpace::new(TensorSpace::uniform(self.dim, SplineSpace1D::maximal(self.degree, self.level)?)?).dim()
                    + interior
            }
        })
    }
}

/// `sin(2 pi x_1) sin(4 pi x_2) sin(6 pi x_3)`, truncated to the dimension.
pub fn data_function(x: &[f64; 3], dim: usize) -> f64 {
    (0..dim).map(|k| sin(2.0 * PI * (k + 1) as f64 * x[k])).product()
}

/// Gradient of [`data_function`].
pub fn data_gradient(x: &[f64; 3], dim: usize) -> [f64; 3] {
    let mut g = [0.0; 3];
    for (a, ga) in g.iter_mut().enumerate().take(dim) {
        *ga = (0..dim)
            .map(|k| {
                let w = 2.0 * PI * (k + 1) as f64;
                if k == a {
                    w * cos(w * x[k])
                } else {
                    sin(w * x[k])
                }
            })
            .product();
    }
    g
}

/// Normal derivative of [`data_function`] for the outward normal `n`.
pub fn data_normal_derivative(x: &[f64; 3], n: &[f64; 3], dim: usize) -> f64 {
    let g = data_gradient(x, dim);
    g[0] * n[0] + g[1] * n[1] + g[2] * n[2]
}

/// Discretized optimality system with right-hand side and the sparse
/// preconditioner.
#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub config: ProblemConfig,
    pub system: BlockTridiagSystem,
    pub rhs: Vec<f64>,
    pub practical: SchurPreconditioner,
    pub labels: Vec<&'static str>,
    /// Exact Schur complement blocks except the last; the last one is formed
    /// densely by [`exact_schur_precond`].
    leading_exact: Vec<SparseSymMatrix>,
}

impl AssembledProblem {
    pub fn dof(&self) -> usize {
        self.system.total_dim()
    }

    pub fn nnz(&self) -> usize {
        self.system.assemble_full().nnz_upper()
    }
}

/// Builds the optimality system for `cfg`.
pub fn build(cfg: &ProblemConfig) -> Result<AssembledProblem> {
    Discretization::new(cfg)?.problem(cfg.alpha)
}

pub fn build_boundary_observation(cfg: &ProblemConfig) -> Result<AssembledProblem> {
    expect_kind(cfg, &[ProblemKind::BoundaryObservation])?;
    build(cfg)
}

pub fn build_distributed(cfg: &ProblemConfig) -> Result<AssembledProblem> {
    expect_kind(cfg, &[ProblemKind::DistributedVeryWeak, ProblemKind::DistributedStrong])?;
    build(cfg)
}

pub fn build_boundary_control(cfg: &ProblemConfig) -> Result<AssembledProblem> {
    expect_kind(cfg, &[ProblemKind::BoundaryControl])?;
    build(cfg)
}

fn expect_kind(cfg: &ProblemConfig, kinds: &[ProblemKind]) -> Result<()> {
    if kinds.contains(&cfg.problem) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("builder called with a different problem kind"))
    }
}

fn all_rows(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).collect()
}

/// `[a | b]` for matrices with the same number of rows.
fn hstack(a: &CsrMatrix, b: &CsrMatrix) -> CsrMatrix {
    let mut t: Vec<Triplet> = a.iter().collect();
    t.extend(b.iter().map(|(i, j, v)| (i, j + a.cols(), v)));
    CsrMatrix::from_triplets(a.rows(), a.cols() + b.cols(), &t).expect("sizes agree")
}

#[derive(Debug, Clone)]
enum Parts {
    /// `(f, w, u)`: blocks `(alpha M, 0, a3)`, couplings `M`, `K'`;
    /// preconditioner `(alpha M, M / alpha, a3 + alpha B)`.
    Strong { m: SparseSymMatrix, kt: CsrMatrix, a3: SparseSymMatrix, b: SparseSymMatrix },
    /// `((u, f), w)`: blocks `(diag(M, alpha m_f), 0)`, coupling `b1`;
    /// preconditioner `(diag(M, alpha m_f), x / alpha + B)`.
    VeryWeak { m: SparseSymMatrix, m_f: SparseSymMatrix, b1: CsrMatrix, x: SparseSymMatrix, b: SparseSymMatrix },
}

/// The `alpha`-independent matrices and right-hand side of a problem.
/// Systems for several `alpha` are cheap to derive from one assembly.
#[derive(Debug, Clone)]
pub struct Discretization {
    config: ProblemConfig,
    parts: Parts,
    rhs: Vec<f64>,
}

impl Discretization {
    pub fn new(cfg: &ProblemConfig) -> Result<Self> {
        cfg.validate()?;
        let geo = cfg.geometry.build(cfg.dim)?;
        let asm = cfg.assembler(&geo);
        let s = TensorSpace::uniform(cfg.dim, SplineSpace1D::maximal(cfg.degree, cfg.level)?)?;
        let z = s.zero_trace();
        let dim = cfg.dim;
        let (parts, rhs) = match cfg.problem {
            ProblemKind::BoundaryObservation | ProblemKind::DistributedStrong => {
                let w_space = match cfg.test_smoothness {
                    Some(k) => TensorSpace::uniform(dim, SplineSpace1D::new(cfg.degree, k, cfg.level)?)?,
                    None => s.clone(),
                };
                let nw = w_space.dim();
                let m = asm.mass(&w_space)?;
                let k = asm.laplacian_strong(&s, &w_space)?.select(&all_rows(nw), nw, &z.map, z.dim);
                let b = asm.biharmonic(&s)?.select(&z.map, z.dim);
                let (a3, r) = if cfg.problem == ProblemKind::BoundaryObservation {
                    let kb = asm.normal_derivative_mass(&s)?.select(&z.map, z.dim);
                    (kb, asm.rhs_normal_data(&s, &|x, n| data_normal_derivative(x, n, dim))?)
                } else {
                    (asm.mass(&s)?.select(&z.map, z.dim), asm.load(&s, &|x| data_function(x, dim))?)
                };
                let mut rhs = vec![0.0; 2 * nw];
                rhs.extend_from_slice(&z.restrict(&r));
                (Parts::Strong { m, kt: k.transpose(), a3, b }, rhs)
            }
            ProblemKind::DistributedVeryWeak | ProblemKind::BoundaryControl => {
                let n = s.dim();
                let m = asm.mass(&s)?;
                // K[w][u] = -int u lap w, with w in the zero-trace space.
                let k = asm.laplacian_strong(&s, &s)?.transpose().select(&z.map, z.dim, &all_rows(n), n);
                let b = asm.biharmonic(&s)?.select(&z.map, z.dim);
                let (m_f, b1, x) = if cfg.problem == ProblemKind::DistributedVeryWeak {
                    let m_wf = m.to_csr().select(&z.map, z.dim, &all_rows(n), n);
                    (m.clone(), hstack(&k, &m_wf), m.select(&z.map, z.dim))
                } else {
                    let bs = BoundarySpace::new(s.clone());
                    let nmat =
                        asm.boundary_normal_coupling(&bs, &s)?.select(&all_rows(bs.dim()), bs.dim(), &z.map, z.dim);
                    let kb = asm.normal_derivative_mass(&s)?.select(&z.map, z.dim);
                    (asm.boundary_space_mass(&bs)?, hstack(&k, &nmat.transpose()), kb)
                };
                let mut rhs = asm.load(&s, &|x| data_function(x, dim))?;
                rhs.resize(n + m_f.dim() + z.dim, 0.0);
                (Parts::VeryWeak { m, m_f, b1, x, b }, rhs)
            }
        };
        Ok(Self { config: *cfg, parts, rhs })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.config
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// The system and practical preconditioner for one value of `alpha`.
    pub fn problem(&self, alpha: f64) -> Result<AssembledProblem> {
        let config = ProblemConfig { alpha, ..self.config };
        config.validate()?;
        match &self.parts {
            Parts::Strong { m, kt, a3, b } => {
                let nw = m.dim();
                let s1 = m.scaled(alpha);
                let s2 = m.scaled(1.0 / alpha);
                let s3 = a3.add_scaled(alpha, b)?;
                let system =
                    BlockTridiagSystem::new(vec![s1.clone(), SparseSymMatrix::zeros(nw), a3.clone()], vec![m.to_csr(), kt.clone()])?;
                let practical = SchurPreconditioner::from_sparse(vec![s1.clone(), s2.clone(), s3])?;
                Ok(AssembledProblem {
                    config,
                    system,
                    rhs: self.rhs.clone(),
                    practical,
                    labels: vec!["f", "w", "u"],
                    leading_exact: vec![s1, s2],
                })
            }
            Parts::VeryWeak { m, m_f, b1, x, b } => {
                let a1 = SparseSymMatrix::block_diagonal(&[m, &m_f.scaled(alpha)]);
                let third = x.scaled(1.0 / alpha).add_scaled(1.0, b)?;
                let system = BlockTridiagSystem::new(vec![a1.clone(), SparseSymMatrix::zeros(b1.rows())], vec![b1.clone()])?;
                let practical = SchurPreconditioner::from_sparse(vec![a1.clone(), third])?;
                Ok(AssembledProblem {
                    config,
                    system,
                    rhs: self.rhs.clone(),
                    practical,
                    labels: vec!["(u,f)", "w"],
                    leading_exact: vec![a1],
                })
            }
        }
    }
}

/// Exact Schur complement preconditioner. The leading blocks are sparse and
/// coincide with the practical ones (`S_2 = M / alpha` for three blocks); the
/// last block is formed densely and must not exceed `cap` rows.
pub fn exact_schur_precond(prob: &AssembledProblem, cap: usize) -> Result<SchurPreconditioner> {
    let n = prob.system.n();
    let last_dim = prob.system.block_dims()[n - 1];
    if last_dim > cap {
        return Err(Error::DenseCapExceeded { size: last_dim, cap });
    }
    let mut blocks = Vec::with_capacity(n);
    for (i, m) in prob.leading_exact.iter().enumerate() {
        blocks.push(PrecondBlock::sparse(m.clone()).map_err(|_| Error::SchurNotPositiveDefinite { stage: i + 1 })?);
    }
    let last = schur_update(&prob.system.a(n - 1).to_dense(), prob.system.b(n - 2), &blocks[n - 2])?;
    blocks.push(PrecondBlock::dense(last).map_err(|_| Error::SchurNotPositiveDefinite { stage: n })?);
    Ok(SchurPreconditioner::from_blocks(blocks))
}
