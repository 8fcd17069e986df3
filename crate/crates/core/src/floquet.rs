//! Bloch–Floquet bands of a chain of identical disjoint loops repeated with
//! period `L` along the x axis.

use nalgebra::{DMatrix, Vector2};
use num_complex::Complex;

use crate::birman_schwinger::{curve_self_block, k0_over_two_pi};
use crate::error::{Error, Result};
use crate::geometry::CurveGeometry;
use crate::roots::brent;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Kernel value below which lattice terms are dropped.
pub const LATTICE_CUTOFF: f64 = 1e-14;
/// Largest number of lattice shells summed before reporting a truncation error.
pub const MAX_SHELLS: usize = 400;

/// One loop per period cell `(x_c − L/2, x_c + L/2) × ℝ`, `x_c` the centre of
/// the loop's x-extent.
#[derive(Clone, Debug)]
pub struct PeriodicChain<T: Real> {
    loop_geometry: CurveGeometry<T>,
    period: T,
    margin: T,
    diameter: T,
}

impl<T: Real> PeriodicChain<T> {
    pub fn new(loop_geometry: CurveGeometry<T>, period: T) -> Result<Self> {
        if !(period > T::zero()) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        let (lo, hi) = loop_geometry.extent(0);
        let margin = (period - (hi - lo)) * lit(0.5);
        if !(margin > T::zero()) {
            return Err(Error::UnsupportedGeometry(format!(
                "loop of width {} does not fit strictly inside a cell of period {}",
                hi - lo,
                period
            )));
        }
        let diameter = loop_geometry.diameter();
        Ok(PeriodicChain {
            loop_geometry,
            period,
            margin,
            diameter,
        })
    }

    pub fn loop_geometry(&self) -> &CurveGeometry<T> {
        &self.loop_geometry
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Distance from the loop to the cell boundary.
    pub fn margin(&self) -> T {
        self.margin
    }

    /// Number of shells `n*` with `K₀(κ(n*L − diam))/2π < 1e−14`, and a
    /// bound on the entrywise tail beyond it.
    pub fn shells(&self, kappa: T) -> Result<(usize, T)> {
        let cutoff = lit::<T>(LATTICE_CUTOFF);
        let mut n = 1usize;
        loop {
            let gap = from_usize::<T>(n) * self.period - self.diameter;
            if gap > T::zero() && k0_over_two_pi(kappa * gap)? < cutoff {
                break;
            }
            n += 1;
            if n > MAX_SHELLS {
                let gap = from_usize::<T>(MAX_SHELLS) * self.period - self.diameter;
                return Err(Error::Truncation {
                    achieved: to_f64(k0_over_two_pi(kappa * gap.max(self.period))?),
                    terms: MAX_SHELLS,
                });
            }
        }
        // Σ_{m>n*} K₀(κ(mL − diam))/2π over both signs, summed until negligible.
        let mut tail = T::zero();
        for m in n + 1..n + 200 {
            let gap = from_usize::<T>(m) * self.period - self.diameter;
            let t = k0_over_two_pi(kappa * gap)?;
            tail += t;
            if t < tail * T::eps() {
                break;
            }
        }
        Ok((n, tail * lit(2.0) * self.loop_geometry.spacing()))
    }
}

/// Bloch–Birman–Schwinger matrix at one quasimomentum.
#[derive(Clone, Debug)]
pub struct BlochMatrix<T: Real> {
    pub kappa: T,
    pub theta: T,
    pub matrix: DMatrix<Complex<T>>,
    pub shells: usize,
    /// Entrywise bound on the dropped lattice terms.
    pub tail_bound: T,
    /// `tail_bound / min |A_ii|`.
    pub relative_tail: T,
}

impl<T: Real> BlochMatrix<T> {
    /// `max |A − A*ᵀ|`.
    pub fn hermiticity_defect(&self) -> T {
        let a = &self.matrix;
        let mut d = T::zero();
        for i in 0..a.nrows() {
            for j in 0..=i {
                let x = a[(i, j)] - a[(j, i)].conj();
                d = d.max((x.re * x.re + x.im * x.im).sqrt());
            }
        }
        d
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues_desc(&self) -> Vec<T> {
        let mut ev: Vec<T> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }
}

/// `A(θ) = Σ_n e^{inθ} Q_κ^{(n)}`, where `Q^{(n)}` couples the loop to its
/// translate by `nL e₁`. For `ψ(x + L e₁) = e^{iθ} ψ(x)`, the `n = 0` term
/// uses the log-singular rule and the others the trapezoid rule.
pub fn bloch_bs_matrix<T: Real>(chain: &PeriodicChain<T>, kappa: T, theta: T) -> Result<BlochMatrix<T>> {
    if !(kappa > T::zero()) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    let curve = &chain.loop_geometry;
    let (base, _) = curve_self_block(curve, kappa)?;
    let (shells, tail_bound) = chain.shells(kappa)?;
    let n = curve.len();
    let h = curve.spacing();
    let pts = curve.points();
    let mut a = base.map(|x| Complex::new(x, T::zero()));
    for s in 1..=shells {
        let shift = Vector2::new(from_usize::<T>(s) * chain.period, T::zero());
        let ang = from_usize::<T>(s) * theta;
        let phase = Complex::new(ang.cos(), ang.sin());
        for i in 0..n {
            for j in 0..n {
                // Q^{(s)}_{ij} = Q^{(−s)}_{ji}
                let r = (pts[i] - pts[j] - shift).norm();
                let v = k0_over_two_pi(kappa * r)? * h;
                if v == T::zero() {
                    continue;
                }
                a[(i, j)] += phase * v;
                a[(j, i)] += phase.conj() * v;
            }
        }
    }
    let min_diag = (0..n).fold(lit::<T>(f64::INFINITY), |m, i| m.min(a[(i, i)].re.abs()));
    Ok(BlochMatrix {
        kappa,
        theta,
        matrix: a,
        shells,
        tail_bound,
        relative_tail: tail_bound / min_diag,
    })
}

/// Extent of one Floquet band over the quasimomentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSummary<T> {
    pub index: usize,
    pub min: T,
    pub max: T,
    pub theta_at_min: T,
    pub theta_at_max: T,
    /// Size of the correction made by edge refinement (grid-resolution estimate).
    pub edge_error: T,
    /// The branch binds at every θ sample.
    pub complete: bool,
}

impl<T: Real> BandSummary<T> {
    pub fn width(&self) -> T {
        self.max - self.min
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandStructure<T: Real> {
    pub alpha: T,
    pub thetas: Vec<T>,
    /// `values[j][t]` is `λ_j(α, θ_t)`, `None` where branch `j` does not bind.
    pub values: Vec<Vec<Option<T>>>,
    pub bands: Vec<BandSummary<T>>,
    /// Samples where two branch roots fell within 1e−10 of each other.
    pub near_crossings: usize,
    /// Largest relative lattice tail over all assembled matrices.
    pub max_relative_tail: T,
    pub discretization: String,
}

/// `m` uniform quasimomenta on `[0, 2π)`.
pub fn theta_grid<T: Real>(m: usize) -> Vec<T> {
    (0..m)
        .map(|i| T::two_pi() * from_usize::<T>(i) / from_usize::<T>(m))
        .collect()
}

struct BranchSolver<'a, T: Real> {
    chain: &'a PeriodicChain<T>,
    alpha: T,
    count: usize,
    max_tail: T,
}

impl<'a, T: Real> BranchSolver<'a, T> {
    fn eigenvalues(&mut self, kappa: T, theta: T) -> Result<Vec<T>> {
        let m = bloch_bs_matrix(self.chain, kappa, theta)?;
        self.max_tail = self.max_tail.max(m.relative_tail);
        let mut ev = m.eigenvalues_desc();
        ev.truncate(self.count);
        Ok(ev)
    }

    /// Root of `α q_j(κ, θ) = 1` near `guess`; `None` if no bracket exists
    /// above the lattice-sum limit.
    fn root(&mut self, j: usize, theta: T, guess: T) -> Result<Option<T>> {
        let alpha = self.alpha;
        let cond = |s: &mut Self, k: T| -> Result<T> {
            let q = s.eigenvalues(k, theta)?.get(j).copied().unwrap_or_else(T::zero);
            Ok(if q > T::zero() { (alpha * q).ln() } else { lit(-1e3) })
        };
        let mut delta: T = lit(1e-3);
        let mut lo = guess * (T::one() - delta);
        let mut hi = guess * (T::one() + delta);
        let mut f_lo = match cond(self, lo) {
            Ok(v) => v,
            Err(Error::Truncation { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut f_hi = cond(self, hi)?;
        for _ in 0..40 {
            if f_lo > T::zero() && f_hi < T::zero() {
                break;
            }
            delta *= lit(4.0);
            if f_lo <= T::zero() {
                lo = guess * (T::one() - delta.min(lit(0.999)));
                if delta >= lit(0.999) {
                    lo *= lit(0.5);
                }
                f_lo = match cond(self, lo) {
                    Ok(v) => v,
                    Err(Error::Truncation { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
            }
            if f_hi >= T::zero() {
                hi = guess * (T::one() + delta);
                f_hi = cond(self, hi)?;
            }
        }
        if !(f_lo > T::zero() && f_hi < T::zero()) {
            return Ok(None);
        }
        let tol = lit::<T>(1e-12).max(T::eps() * lit(4.0) * hi);
        let report = brent(|k| cond(self, k), lo, hi, tol, 200)?;
        Ok(Some(report.root))
    }
}

/// Band functions `θ ↦ λ_j(α, θ)` for branches `j < j_max`, with each band's
/// extremes refined by a parabola through the extreme sample and its
/// neighbours, then re-evaluated at the vertex.
pub fn band_functions<T: Real>(
    chain: &PeriodicChain<T>,
    alpha: T,
    thetas: &[T],
    j_max: usize,
) -> Result<BandStructure<T>> {
    if !(alpha > T::zero()) || j_max == 0 || thetas.len() < 3 {
        return Err(Error::InvalidInput(
            "band computation needs α > 0, j_max ≥ 1 and ≥ 3 θ samples".into(),
        ));
    }
    let mut solver = BranchSolver {
        chain,
        alpha,
        count: j_max + 5,
        max_tail: T::zero(),
    };
    let mut values = vec![vec![None; thetas.len()]; j_max];
    let mut near_crossings = 0;
    let start = alpha * lit(0.5);
    for j in 0..j_max {
        let mut guess = if j == 0 {
            start
        } else {
            values[j - 1][0].map(|l: T| (-l).sqrt()).unwrap_or(start)
        };
        for (t, &theta) in thetas.iter().enumerate() {
            if let Some(k) = solver.root(j, theta, guess)? {
                values[j][t] = Some(-k * k);
                guess = k;
                if j > 0 {
                    if let Some(prev) = values[j - 1][t] {
                        if (prev + k * k).abs() <= lit(1e-10) {
                            near_crossings += 1;
                        }
                    }
                }
            }
        }
    }

    let m = thetas.len();
    let step = T::two_pi() / from_usize(m);
    let mut bands = Vec::new();
    for (j, row) in values.iter().enumerate() {
        if row.iter().any(Option::is_none) {
            let present: Vec<(usize, T)> = row.iter().enumerate().filter_map(|(i, v)| v.map(|x| (i, x))).collect();
            if let (Some(lo), Some(hi)) = (
                present.iter().min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()),
                present.iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()),
            ) {
                bands.push(BandSummary {
                    index: j,
                    min: lo.1,
                    max: hi.1,
                    theta_at_min: thetas[lo.0],
                    theta_at_max: thetas[hi.0],
                    edge_error: T::zero(),
                    complete: false,
                });
            }
            continue;
        }
        let vals: Vec<T> = row.iter().map(|v| v.unwrap_or_else(T::zero)).collect();
        let mut summary = BandSummary {
            index: j,
            min: vals[0],
            max: vals[0],
            theta_at_min: thetas[0],
            theta_at_max: thetas[0],
            edge_error: T::zero(),
            complete: true,
        };
        for want_max in [false, true] {
            let idx = (0..m)
                .max_by(|&a, &b| {
                    let o = vals[a].partial_cmp(&vals[b]).unwrap();
                    if want_max {
                        o
                    } else {
                        o.reverse()
                    }
                })
                .unwrap_or(0);
            let (ym, y0, yp) = (vals[(idx + m - 1) % m], vals[idx], vals[(idx + 1) % m]);
            let curv = ym - lit::<T>(2.0) * y0 + yp;
            let mut best = y0;
            let mut at = thetas[idx];
            let mut err = T::zero();
            if curv != T::zero() {
                let offset = (ym - yp) / (lit::<T>(2.0) * curv);
                if offset.abs() <= T::one() && offset.abs() > lit(1e-3) {
                    let vertex = y0 - (ym - yp) * offset * lit(0.25);
                    let th = thetas[idx] + offset * step;
                    if let Some(k) = solver.root(j, th, (-y0).sqrt())? {
                        let v = -k * k;
                        err = (v - vertex).abs().max((v - y0).abs());
                        if (want_max && v > best) || (!want_max && v < best) {
                            best = v;
                            at = th;
                        }
                    }
                }
            }
            if want_max {
                summary.max = best;
                summary.theta_at_max = at;
            } else {
                summary.min = best;
                summary.theta_at_min = at;
            }
            summary.edge_error = summary.edge_error.max(err);
        }
        bands.push(summary);
    }
    Ok(BandStructure {
        alpha,
        thetas: thetas.to_vec(),
        values,
        bands,
        near_crossings,
        max_relative_tail: solver.max_tail,
        discretization: format!(
            "bloch nystrom N={} period={} theta samples={m}",
            chain.loop_geometry.len(),
            to_f64(chain.period)
        ),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap<T> {
    pub lower: T,
    pub upper: T,
    /// Band whose maximum is the lower edge.
    pub below: usize,
    /// Band whose minimum is the upper edge.
    pub above: usize,
    /// Narrower than ten times the edge-refinement estimate.
    pub tentative: bool,
}

impl<T: Real> Gap<T> {
    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

/// Open gaps below zero between the computed bands: maximal intervals that
/// meet no band, bounded on both sides by a band.
pub fn gap_report<T: Real>(bands: &BandStructure<T>) -> Vec<Gap<T>> {
    let mut sorted: Vec<&BandSummary<T>> = bands.bands.iter().collect();
    sorted.sort_by(|a, b| a.min.partial_cmp(&b.min).unwrap_or(std::cmp::Ordering::Equal));
    let mut gaps = Vec::new();
    let mut reach: Option<&BandSummary<T>> = None;
    for b in sorted {
        if let Some(r) = reach {
            if b.min > r.max && b.min < T::zero() {
                let slack = (r.edge_error + b.edge_error) * lit(10.0);
                gaps.push(Gap {
                    lower: r.max,
                    upper: b.min,
                    below: r.index,
                    above: b.index,
                    tentative: b.min - r.max <= slack,
                });
            }
            if b.max > r.max {
                reach = Some(b);
            }
        } else {
            reach = Some(b);
        }
    }
    gaps
}
