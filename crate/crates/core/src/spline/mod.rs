//! Tensor-product B-spline discretization on polynomially mapped cubes.
//!
//! Spaces live on the parameter domain `(0,1)^d`; a [`GeometryMap`] `F`
//! carries them to the physical domain. Derivatives are pulled back through
//! `F`, including the second order terms needed for the Laplacian.

mod assembly;
mod basis;
mod geometry;
mod quadrature;
mod tensor;

pub use assembly::{Assembler, BoundaryFn, BoundarySpace, ScalarFn};
pub use basis::{BasisEval, SplineSpace1D};
pub use geometry::{GeoEval, GeometryMap, Poly};
pub use quadrature::GaussRule;
pub use tensor::{TensorSpace, ZeroTraceMap};
