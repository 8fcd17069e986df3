//! Birman–Schwinger reduction: `−κ²` is an eigenvalue of `−Δ − α δ_Γ` iff
//! `α Q_κ` has eigenvalue one, with `Q_κ` the free resolvent restricted to Γ.

mod kernel;
mod modes;
mod nystrom;
mod solve;

pub use kernel::{green_kernel, Dimension};
pub use modes::{circle_mode_q, sphere_mode_q, CircleModes, ModeFamily, SphereModes};
pub use nystrom::{assemble_curve_bs, assemble_surface_bs, recommended_curve_nodes, BsMatrix};
pub use solve::{
    count_bound_states, count_mode_bound_states, solve_bound_states, solve_mode_bound_states, weyl_estimate,
    BoundState, BoundStateSet, BranchSpectrum, CountReport, CurveNystrom, SurfaceNystrom, THRESHOLD_TOL,
};

pub(crate) use kernel::k0_over_two_pi;
pub(crate) use nystrom::curve_self_block;
