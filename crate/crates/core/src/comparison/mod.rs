//! Spectra of the comparison operators `−Δ_Γ + K − M²` (surfaces) and
//! `−∂_s² − k²/4` (curves, optionally with a Floquet phase).

mod curve;
mod residual;
mod surface;

pub use curve::{curve_comparison_spectrum, curve_comparison_spectrum_with, CurveOptions};
pub use residual::{asymptotic_residual, ResidualRow, ResidualTable};
pub use surface::{sphere_comparison_spectrum, torus_comparison_spectrum, torus_comparison_spectrum_with};

use crate::scalar::Real;
use crate::spectrum::{expand_levels, Level, Provenance};

/// Ordered comparison eigenvalues `μ₁ ≤ μ₂ ≤ …` with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSpectrum<T: Real> {
    pub levels: Vec<Level<T>>,
    /// Floquet quasimomentum, when a phase condition was imposed.
    pub theta: Option<T>,
    pub provenance: Provenance,
    pub discretization: String,
}

impl<T: Real> ComparisonSpectrum<T> {
    /// Eigenvalues repeated by multiplicity.
    pub fn eigenvalues(&self) -> Vec<T> {
        expand_levels(&self.levels)
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}
