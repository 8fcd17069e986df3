//! Bound states from the Birman–Schwinger condition `α q_j(κ) = 1`.

use super::kernel::Dimension;
use super::modes::ModeFamily;
use super::nystrom::{assemble_curve_bs, assemble_surface_bs};
use crate::error::{Error, Result};
use crate::geometry::{CurveGeometry, SurfaceGeometry};
use crate::roots::{brent, RootReport};
use crate::scalar::{lit, Real};
use crate::spectrum::Provenance;

/// Threshold half-width inside which `α q(0+) ≈ 1` is treated as ambiguous.
pub const THRESHOLD_TOL: f64 = 1e-8;

/// Ordered eigenvalues `q_1(κ) ≥ q_2(κ) ≥ …` of a discretized `Q_κ`.
pub trait BranchSpectrum<T: Real>: Send + Sync {
    /// The `count` largest eigenvalues at `kappa`, largest first.
    fn top_eigenvalues(&self, kappa: T, count: usize) -> Result<Vec<T>>;

    fn dimension(&self) -> Dimension;

    /// Characteristic length, used for the small-κ end of root brackets.
    fn length_scale(&self) -> T;

    /// `|Γ|`: length in 2D, area in 3D.
    fn measure(&self) -> T;

    fn describe(&self) -> String;
}

/// Nyström branches on a closed curve.
#[derive(Clone, Debug)]
pub struct CurveNystrom<T: Real> {
    pub curve: CurveGeometry<T>,
}

impl<T: Real> BranchSpectrum<T> for CurveNystrom<T> {
    fn top_eigenvalues(&self, kappa: T, count: usize) -> Result<Vec<T>> {
        let mut ev = assemble_curve_bs(&self.curve, kappa)?.eigenvalues_desc();
        ev.truncate(count);
        Ok(ev)
    }

    fn dimension(&self) -> Dimension {
        Dimension::Two
    }

    fn length_scale(&self) -> T {
        self.curve.diameter() * lit(0.5)
    }

    fn measure(&self) -> T {
        self.curve.length()
    }

    fn describe(&self) -> String {
        format!("curve nystrom N={}", self.curve.len())
    }
}

/// Nyström branches on a closed surface.
#[derive(Clone, Debug)]
pub struct SurfaceNystrom<T: Real> {
    pub surface: SurfaceGeometry<T>,
}

impl<T: Real> BranchSpectrum<T> for SurfaceNystrom<T> {
    fn top_eigenvalues(&self, kappa: T, count: usize) -> Result<Vec<T>> {
        let mut ev = assemble_surface_bs(&self.surface, kappa)?.eigenvalues_desc();
        ev.truncate(count);
        Ok(ev)
    }

    fn dimension(&self) -> Dimension {
        Dimension::Three
    }

    fn length_scale(&self) -> T {
        (self.surface.area() / (lit::<T>(4.0) * T::pi())).sqrt()
    }

    fn measure(&self) -> T {
        self.surface.area()
    }

    fn describe(&self) -> String {
        let (nu, nv) = self.surface.shape();
        format!("surface nystrom {nu}x{nv}")
    }
}

/// One (possibly degenerate) bound-state level.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundState<T: Real> {
    /// `λ = −κ²`.
    pub lambda: T,
    pub kappa: T,
    pub multiplicity: usize,
    /// Index of the first branch (counting multiplicity) in this level.
    pub branch: usize,
    /// Angular mode for mode-matched levels.
    pub mode: Option<u32>,
    /// `|α q(κ) − 1|` at the root.
    pub residual: T,
    pub root: RootReport<T>,
}

/// Bound states ordered `λ₁ ≤ λ₂ ≤ …`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundStateSet<T: Real> {
    pub alpha: T,
    pub states: Vec<BoundState<T>>,
    pub provenance: Provenance,
    /// Fewer eigenvalues bind than were requested.
    pub truncated: bool,
    pub requested: usize,
    pub discretization: String,
}

impl<T: Real> BoundStateSet<T> {
    /// Eigenvalues repeated by multiplicity.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.states
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.lambda, s.multiplicity))
            .collect()
    }

    /// Number of eigenvalues counting multiplicity.
    pub fn len(&self) -> usize {
        self.states.iter().map(|s| s.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn max_residual(&self) -> T {
        self.states.iter().fold(T::zero(), |m, s| m.max(s.residual))
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("coupling must be positive, got {alpha}")));
    }
    Ok(())
}

fn root_tol<T: Real>(kappa: T) -> T {
    lit::<T>(1e-12).max(T::eps() * lit(4.0) * kappa.abs())
}

/// `ln(α q)`, which has the same sign as `α q − 1` and is nearly linear in
/// `κ` near the root; non-positive `q` maps to a large negative value.
fn log_condition<T: Real>(alpha: T, q: T) -> T {
    if q > T::zero() {
        (alpha * q).ln()
    } else {
        lit(-1e3)
    }
}

/// Solves `α q(κ) = 1` for a decreasing `q` on `[lo, hi]`, doubling `hi`
/// while the bracket lacks a sign change at the upper end.
pub(crate) fn solve_branch<T: Real, F: FnMut(T) -> Result<T>>(
    mut q: F,
    alpha: T,
    lo: T,
    hi: T,
) -> Result<(T, RootReport<T>, T)> {
    let mut hi = hi;
    for _ in 0..8 {
        if alpha * q(hi)? < T::one() {
            break;
        }
        hi *= lit(2.0);
    }
    let tol = root_tol(hi);
    let report = brent(|k| Ok(log_condition(alpha, q(k)?)), lo, hi, tol, 200)?;
    let kappa = report.root;
    let residual = (alpha * q(kappa)? - T::one()).abs();
    Ok((kappa, report, residual))
}

/// Relative κ gap below which consecutive Nyström roots form one level.
const LEVEL_TOL: f64 = 1e-8;

/// Bound states from the `j_max` largest Nyström branches.
pub fn solve_bound_states<T: Real>(
    spectrum: &dyn BranchSpectrum<T>,
    alpha: T,
    j_max: usize,
) -> Result<BoundStateSet<T>> {
    check_alpha(alpha)?;
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    let eps = lit::<T>(1e-6) / spectrum.length_scale();
    let count = j_max + 5;
    let at_eps = spectrum.top_eigenvalues(eps, count)?;
    let mut roots: Vec<(T, RootReport<T>, T)> = Vec::new();
    for j in 0..j_max.min(at_eps.len()) {
        if alpha * at_eps[j] <= T::one() {
            break;
        }
        let branch = |k: T| -> Result<T> {
            let ev = spectrum.top_eigenvalues(k, count)?;
            Ok(ev.get(j).copied().unwrap_or_else(T::zero))
        };
        roots.push(solve_branch(branch, alpha, eps, alpha)?);
    }
    let truncated = roots.len() < j_max;
    let mut states: Vec<BoundState<T>> = Vec::new();
    for (j, (kappa, report, residual)) in roots.into_iter().enumerate() {
        if let Some(last) = states.last_mut() {
            if (last.kappa - kappa).abs() <= lit::<T>(LEVEL_TOL) * kappa {
                last.multiplicity += 1;
                last.residual = last.residual.max(residual);
                continue;
            }
        }
        states.push(BoundState {
            lambda: -kappa * kappa,
            kappa,
            multiplicity: 1,
            branch: j,
            mode: None,
            residual,
            root: report,
        });
    }
    Ok(BoundStateSet {
        alpha,
        states,
        provenance: Provenance::BirmanSchwingerRoot,
        truncated,
        requested: j_max,
        discretization: spectrum.describe(),
    })
}

/// Bound states of an exactly solvable family, mode by mode, until at least
/// `j_max` eigenvalues (counting multiplicity) are found or no further mode
/// binds.
pub fn solve_mode_bound_states<T: Real>(
    family: &dyn ModeFamily<T>,
    alpha: T,
    j_max: usize,
) -> Result<BoundStateSet<T>> {
    check_alpha(alpha)?;
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    let scale = family.length_scale();
    let mut states = Vec::new();
    let mut total = 0;
    let mut mode = 0u32;
    while total < j_max {
        if alpha * family.q_limit(mode) <= T::one() {
            break;
        }
        // Near-threshold and weakly bound modes have tiny roots: shrink the
        // lower end until the bracket holds.
        let mut lo = lit::<T>(1e-6) / scale;
        let mut found = false;
        for _ in 0..8 {
            if alpha * family.q(mode, lo)? > T::one() {
                found = true;
                break;
            }
            lo *= lit(1e-3);
        }
        if !found {
            break;
        }
        let (kappa, root, residual) = solve_branch(|k| family.q(mode, k), alpha, lo, alpha)?;
        let multiplicity = family.multiplicity(mode);
        states.push(BoundState {
            lambda: -kappa * kappa,
            kappa,
            multiplicity,
            branch: total,
            mode: Some(mode),
            residual,
            root,
        });
        total += multiplicity;
        mode += 1;
    }
    Ok(BoundStateSet {
        alpha,
        states,
        provenance: Provenance::ModeMatching,
        truncated: total < j_max,
        requested: j_max,
        discretization: family.describe(),
    })
}

/// Number of discrete eigenvalues below zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountReport {
    /// Branches with `α q(0+) > 1` beyond the ambiguity band.
    pub count: usize,
    /// Branches with `|α q(0+) − 1| < 1e−8`, excluded from `count`.
    pub ambiguous: usize,
}

impl CountReport {
    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous > 0
    }

    pub fn upper(&self) -> usize {
        self.count + self.ambiguous
    }
}

fn classify<T: Real>(aq: T, report: &mut CountReport, multiplicity: usize) -> bool {
    let tol = lit::<T>(THRESHOLD_TOL);
    if (aq - T::one()).abs() < tol {
        report.ambiguous += multiplicity;
        true
    } else if aq > T::one() {
        report.count += multiplicity;
        true
    } else {
        false
    }
}

/// Counts eigenvalues of `α Q_{κ→0+}` above one on a Nyström discretization.
pub fn count_bound_states<T: Real>(spectrum: &dyn BranchSpectrum<T>, alpha: T) -> Result<CountReport> {
    check_alpha(alpha)?;
    let eps = lit::<T>(1e-6) / spectrum.length_scale();
    let ev = spectrum.top_eigenvalues(eps, usize::MAX)?;
    let mut report = CountReport { count: 0, ambiguous: 0 };
    for q in ev {
        if !classify(alpha * q, &mut report, 1) {
            break;
        }
    }
    Ok(report)
}

/// Mode-threshold count `Σ mult(n)` over modes with `α q_n(0+) > 1`.
pub fn count_mode_bound_states<T: Real>(family: &dyn ModeFamily<T>, alpha: T) -> Result<CountReport> {
    check_alpha(alpha)?;
    let mut report = CountReport { count: 0, ambiguous: 0 };
    let mut mode = 0u32;
    while classify(alpha * family.q_limit(mode), &mut report, family.multiplicity(mode)) {
        mode += 1;
        if mode > 1_000_000 {
            return Err(Error::NoConvergence("mode count did not terminate".into()));
        }
    }
    Ok(report)
}

/// Weyl estimate `|Γ| α² / 16π`.
pub fn weyl_estimate<T: Real>(area: T, alpha: T) -> T {
    area * alpha * alpha / (lit::<T>(16.0) * T::pi())
}
