//! The transverse operators `T±_{α,a}` on `(−a, a)`: `−∂_u² − α δ(u)` with
//! Dirichlet ends (`T⁺`) or ends carrying the boundary term `−c_a |ψ(±a)|²`
//! (`T⁻`), and the two-sided bounds on their single negative eigenvalue.

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::scalar::{lit, Real};

/// Regime constant in `α > c · max{1/a, c_a}`.
pub const REGIME_CONSTANT: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary<T> {
    /// `ψ(±a) = 0`.
    Dirichlet,
    /// Natural ends with coefficient `c_a ≥ 0`: `ψ'(±a) = ±c_a ψ(±a)`.
    Neumann { c_a: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseProblem<T> {
    pub alpha: T,
    pub half_width: T,
    pub boundary: Boundary<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseEigenvalue<T> {
    /// `κ = −k²`.
    pub energy: T,
    pub k: T,
    /// `k² − α²/4`, formed without cancellation.
    pub shift: T,
    /// Matching-condition residual at the root.
    pub residual: T,
    pub iterations: usize,
    /// Inside the regime `α > 4 max{1/a, c_a}` with `c_a a < 1`.
    pub guaranteed: bool,
}

impl<T: Real> TransverseProblem<T> {
    fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !(self.half_width > T::zero()) || !self.half_width.is_finite() {
            return Err(Error::InvalidInput(format!(
                "transverse problem needs α > 0 and 0 < a < ∞ (α={}, a={})",
                self.alpha, self.half_width
            )));
        }
        if let Boundary::Neumann { c_a } = self.boundary {
            if !(c_a >= T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "boundary coefficient must be ≥ 0, got {c_a}"
                )));
            }
        }
        Ok(())
    }

    pub fn in_regime(&self) -> bool {
        let c_a = match self.boundary {
            Boundary::Dirichlet => T::zero(),
            Boundary::Neumann { c_a } => c_a,
        };
        // c_a·a ≥ 1 binds an odd end state (k coth(ka) = c_a), so the
        // negative eigenvalue is no longer single.
        self.alpha > lit::<T>(REGIME_CONSTANT) * (T::one() / self.half_width).max(c_a)
            && c_a * self.half_width < T::one()
    }

    /// Matching condition for the even eigenfunction, zero at the root.
    ///
    /// Dirichlet: `ψ = sinh(k(a−|u|))`, so `2k coth(ka) = α`.
    /// With ends: `ψ = cosh(k(a−|u|)) − (c_a/k) sinh(k(a−|u|))` and the jump
    /// `ψ'(0+) − ψ'(0−) = −α ψ(0)` give
    /// `2(k tanh(ka) − c_a) = α (1 − (c_a/k) tanh(ka))`.
    pub fn matching(&self, k: T) -> T {
        let a = self.half_width;
        let t = (k * a).tanh();
        match self.boundary {
            Boundary::Dirichlet => lit::<T>(2.0) * k / t - self.alpha,
            Boundary::Neumann { c_a } => lit::<T>(2.0) * (k * t - c_a) - self.alpha * (T::one() - c_a * t / k),
        }
    }
}

/// Solves for the single negative eigenvalue `−k²`.
pub fn solve_transverse<T: Real>(problem: &TransverseProblem<T>) -> Result<TransverseEigenvalue<T>> {
    problem.validate()?;
    let alpha = problem.alpha;
    let a = problem.half_width;
    let half = alpha * lit(0.5);
    let spread = (lit::<T>(10.0) * (-alpha * a * lit(0.5)).exp()).max(T::eps() * lit(64.0));
    let mut lo = half * (T::one() - spread);
    let mut hi = half * (T::one() + spread);
    let f = |k: T| problem.matching(k);
    let mut bracketed = false;
    for _ in 0..60 {
        if lo > T::zero() && f(lo) < T::zero() && f(hi) > T::zero() {
            bracketed = true;
            break;
        }
        let width = hi - lo;
        lo = (lo - width).max(half * lit(1e-12));
        hi += width;
    }
    if !bracketed {
        return Err(Error::Regime(format!(
            "no sign change of the matching condition on [{lo}, {hi}] (α={alpha}, a={a}); \
             f(lo)={}, f(hi)={}",
            f(lo),
            f(hi)
        )));
    }
    let tol = T::eps() * lit(8.0) * half;
    let report = brent(|k| Ok(f(k)), lo, hi, tol, 300)?;
    let k = report.root;
    let shift = (k - half) * (k + half);
    Ok(TransverseEigenvalue {
        energy: -k * k,
        k,
        shift,
        residual: f(k).abs(),
        iterations: report.iterations,
        guaranteed: problem.in_regime(),
    })
}

/// Layer half-width `a(α) = 6 ln(α)/α`.
pub fn layer_halfwidth<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::one()) {
        return Err(Error::InvalidInput(format!(
            "layer half-width needs α > 1, got {alpha}"
        )));
    }
    Ok(lit::<T>(6.0) * alpha.ln() / alpha)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsRow<T> {
    pub alpha: T,
    pub half_width: T,
    pub c_a: T,
    pub kappa_minus: T,
    pub kappa_plus: T,
    /// `−α²/4`.
    pub reference: T,
    /// `−α²/4 · (1 − 8 e^{−αa/2})`.
    pub upper: T,
    /// `(−κ⁻ − α²/4) / ((α²/4) e^{−αa/2})`.
    pub c_n: T,
    pub minus_below: bool,
    pub plus_above: bool,
    pub plus_below_upper: bool,
    pub guaranteed: bool,
}

impl<T> BoundsRow<T> {
    pub fn holds(&self) -> bool {
        self.minus_below && self.plus_above && self.plus_below_upper
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport<T> {
    pub rows: Vec<BoundsRow<T>>,
    /// `max ĉ_N / ĉ_N(α_min)` over the grid.
    pub c_n_growth: T,
    /// `max ĉ_N / min ĉ_N`.
    pub c_n_spread: T,
}

impl<T: Real> BoundsReport<T> {
    /// Every in-regime row satisfies the strict inequality chain.
    pub fn all_hold(&self) -> bool {
        self.rows.iter().filter(|r| r.guaranteed).all(BoundsRow::holds)
    }

    /// Boundedness witness: no `ĉ_N` exceeds twice its value at the smallest α.
    pub fn c_n_bounded(&self) -> bool {
        self.c_n_growth <= lit(2.0)
    }
}

/// Evaluates the inequality chain `κ⁻ < −α²/4 < κ⁺ < −α²/4(1 − 8e^{−αa/2})`
/// with `a = a(α)` on an increasing α grid.
pub fn transverse_bounds_check<T: Real>(alphas: &[T], c_a: T) -> Result<BoundsReport<T>> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("empty α grid".into()));
    }
    if alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("α grid must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let a = layer_halfwidth(alpha)?;
        let plus = solve_transverse(&TransverseProblem {
            alpha,
            half_width: a,
            boundary: Boundary::Dirichlet,
        })?;
        let minus = solve_transverse(&TransverseProblem {
            alpha,
            half_width: a,
            boundary: Boundary::Neumann { c_a },
        })?;
        let quarter = alpha * alpha * lit(0.25);
        let decay = (-alpha * a * lit(0.5)).exp();
        let reference = -quarter;
        let upper = -quarter * (T::one() - lit::<T>(8.0) * decay);
        let c_n = minus.shift / (quarter * decay);
        rows.push(BoundsRow {
            alpha,
            half_width: a,
            c_a,
            kappa_minus: minus.energy,
            kappa_plus: plus.energy,
            reference,
            upper,
            c_n,
            // Compare through the shifts k² − α²/4 to avoid cancellation.
            minus_below: minus.shift > T::zero(),
            plus_above: plus.shift < T::zero(),
            plus_below_upper: -plus.shift < lit::<T>(8.0) * quarter * decay,
            guaranteed: plus.guaranteed && minus.guaranteed,
        });
    }
    let first = rows[0].c_n;
    let max = rows.iter().fold(first, |m, r| m.max(r.c_n));
    let min = rows.iter().fold(first, |m, r| m.min(r.c_n));
    Ok(BoundsReport {
        rows,
        c_n_growth: max / first,
        c_n_spread: max / min,
    })
}
