use alloc::vec;
use alloc::vec::Vec;

use super::SplineSpace1D;
use crate::{Error, Result};

/// Tensor product of univariate spline spaces on the same mesh level.
///
/// Basis functions are numbered lexicographically with the first direction
/// running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSpace {
    factors: Vec<SplineSpace1D>,
}

impl TensorSpace {
    pub fn new(factors: Vec<SplineSpace1D>) -> Result<Self> {
        if !(1..=3).contains(&factors.len()) {
            return Err(Error::InvalidArgument("tensor spaces have 1 to 3 factors"));
        }
        if factors.iter().any(|f| f.num_elements() != factors[0].num_elements()) {
            return Err(Error::InvalidArgument("all factors must share the mesh level"));
        }
        Ok(Self { factors })
    }

    /// `d` copies of the same univariate space.
    pub fn uniform(d: usize, space: SplineSpace1D) -> Result<Self> {
        Self::new(vec![space; d])
    }

    pub fn dim_space(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[SplineSpace1D] {
        &self.factors
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn max_degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    pub fn num_elements(&self) -> usize {
        self.factors[0].num_elements()
    }

    pub fn index(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        for (k, f) in self.factors.iter().enumerate().rev() {
            idx = idx * f.dim() + multi[k];
        }
        idx
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        self.factors
            .iter()
            .map(|f| {
                let i = idx % f.dim();
                idx /= f.dim();
                i
            })
            .collect()
    }

    /// Whether basis function `idx` is one of the first or last functions in
    /// some direction, i.e. has a nonzero trace on the boundary.
    pub fn on_boundary(&self, idx: usize) -> bool {
        self.multi_index(idx).iter().zip(&self.factors).any(|(&i, f)| i == 0 || i + 1 == f.dim())
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        (0..self.dim()).map(|i| self.on_boundary(i)).collect()
    }

    /// Index map onto the zero-trace subspace spanned by the functions not on
    /// the boundary.
    pub fn zero_trace(&self) -> ZeroTraceMap {
        let mut map = vec![None; self.dim()];
        let mut count = 0;
        for (i, m) in map.iter_mut().enumerate() {
            if !self.on_boundary(i) {
                *m = Some(count);
                count += 1;
            }
        }
        ZeroTraceMap { map, dim: count }
    }
}

/// Renumbering of the interior basis functions of a tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTraceMap {
    pub map: Vec<Option<usize>>,
    pub dim: usize,
}

impl ZeroTraceMap {
    pub fn identity(dim: usize) -> Self {
        Self { map: (0..dim).map(Some).collect(), dim }
    }

    /// Extends a restricted vector by zeros.
    pub fn prolong(&self, x: &[f64]) -> Vec<f64> {
        self.map.iter().map(|m| m.map_or(0.0, |i| x[i])).collect()
    }

    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (v, m) in x.iter().zip(&self.map) {
            if let Some(i) = m {
                out[*i] = *v;
            }
        }
        out
    }
}
