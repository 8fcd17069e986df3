use thiserror::Error;

/// Errors raised by the geometry, special-function and spectral solvers.
///
/// Numeric payloads are stored as `f64` so the error type is independent of
/// the scalar the solver runs in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate parametrization: det g = {det_g:e}{}", at_node(.node))]
    DegenerateParametrization { node: Option<usize>, det_g: f64 },

    #[error("ill-conditioned geometry{}: {detail}", at_node(.node))]
    IllConditionedGeometry { node: Option<usize>, detail: String },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("overflow evaluating {what} (use the scaled representation)")]
    Overflow { what: String },

    #[error("kernel singularity at r = 0; use the singular quadrature path")]
    Singularity,

    #[error("root bracket failure on [{lo:e}, {hi:e}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    RootBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("outside the strong-coupling regime: {0}")]
    Regime(String),

    #[error("lattice sum truncation budget exceeded: tail bound {achieved:e} with {terms} cells")]
    Truncation { achieved: f64, terms: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn at_node(node: &Option<usize>) -> String {
    node.map(|n| format!(" at node {n}")).unwrap_or_default()
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
