//! Shared spectrum bookkeeping.

use crate::scalar::Real;

/// Where a set of eigenvalues came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Roots of `α q_j(κ) = 1` with a Nyström discretization of `Q_κ`.
    BirmanSchwingerRoot,
    /// Roots of `α q(κ) = 1` with closed-form mode eigenvalues.
    ModeMatching,
    /// Direct discretization of a comparison operator.
    ComparisonOperator,
    /// Closed-form comparison spectrum.
    ExactComparison,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::BirmanSchwingerRoot => "bs-nystrom-root",
            Provenance::ModeMatching => "mode-matching",
            Provenance::ComparisonOperator => "comparison-operator",
            Provenance::ExactComparison => "exact-comparison",
        }
    }
}

/// A value with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level<T> {
    pub value: T,
    pub multiplicity: usize,
}

/// Groups sorted values into levels whose members differ by at most
/// `rel_tol · max(1, |value|)` from the first member.
pub fn group_levels<T: Real>(sorted: &[T], rel_tol: T) -> Vec<Level<T>> {
    let mut out: Vec<Level<T>> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some(l) if (v - l.value).abs() <= rel_tol * l.value.abs().max(T::one()) => l.multiplicity += 1,
            _ => out.push(Level {
                value: v,
                multiplicity: 1,
            }),
        }
    }
    out
}

/// Expands levels into a flat list, each value repeated by multiplicity.
pub fn expand_levels<T: Copy>(levels: &[Level<T>]) -> Vec<T> {
    levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity))
        .collect()
}
