//! Bound states of Schrödinger operators with a strongly attractive δ
//! interaction on closed curves in ℝ² and closed surfaces in ℝ³.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod birman_schwinger;
pub mod comparison;
pub mod error;
pub mod floquet;
pub mod geometry;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod specfun;
pub mod spectrum;
pub mod transverse;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CurveGeometryF64 = geometry::CurveGeometry<f64>;
pub type SurfaceGeometryF64 = geometry::SurfaceGeometry<f64>;
pub type BsMatrixF64 = birman_schwinger::BsMatrix<f64>;
pub type BoundStateSetF64 = birman_schwinger::BoundStateSet<f64>;
pub type ComparisonSpectrumF64 = comparison::ComparisonSpectrum<f64>;
pub type TransverseProblemF64 = transverse::TransverseProblem<f64>;
pub type PeriodicChainF64 = floquet::PeriodicChain<f64>;
pub type BandStructureF64 = floquet::BandStructure<f64>;
