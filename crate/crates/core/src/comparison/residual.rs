use super::ComparisonSpectrum;
use crate::birman_schwinger::BoundStateSet;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualRow<T> {
    /// Index counting multiplicity, from 0.
    pub j: usize,
    pub lambda: T,
    pub mu: T,
    /// `λ_j + α²/4 − μ_j`.
    pub residual: T,
    /// `|residual| · α / ln α`.
    pub scaled: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualTable<T> {
    pub alpha: T,
    pub rows: Vec<ResidualRow<T>>,
    /// Fewer bound states than comparison eigenvalues.
    pub truncated: bool,
}

/// Pairs `λ_j` with `μ_j` index by index. Both lists are sorted with
/// multiplicity, so degenerate groups are compared as sorted blocks.
pub fn asymptotic_residual<T: Real>(
    bound: &BoundStateSet<T>,
    comparison: &ComparisonSpectrum<T>,
    alpha: T,
) -> Result<ResidualTable<T>> {
    if !(alpha > T::one()) {
        return Err(Error::InvalidInput(format!(
            "residual scaling needs α > 1, got {alpha}"
        )));
    }
    let lambdas = bound.eigenvalues();
    let mus = comparison.eigenvalues();
    let shift = alpha * alpha * lit(0.25);
    let scale = alpha / alpha.ln();
    let rows = lambdas
        .iter()
        .zip(&mus)
        .enumerate()
        .map(|(j, (&lambda, &mu))| {
            let residual = lambda + shift - mu;
            ResidualRow {
                j,
                lambda,
                mu,
                residual,
                scaled: residual.abs() * scale,
            }
        })
        .collect();
    Ok(ResidualTable {
        alpha,
        rows,
        truncated: lambdas.len() < mus.len(),
    })
}
