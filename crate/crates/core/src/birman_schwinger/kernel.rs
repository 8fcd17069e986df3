use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::{bessel_k0, MAX_ARGUMENT};

/// Ambient dimension of the free resolvent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Two,
    Three,
}

/// Free resolvent kernel of `−Δ + κ²`: `K₀(κr)/2π` in the plane,
/// `e^{−κr}/4πr` in space.
pub fn green_kernel<T: Real>(dim: Dimension, kappa: T, r: T) -> Result<T> {
    if !(kappa > T::zero()) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if r == T::zero() {
        return Err(Error::Singularity);
    }
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("distance must be positive, got {r}")));
    }
    match dim {
        Dimension::Two => k0_over_two_pi(kappa * r),
        Dimension::Three => Ok((-kappa * r).exp() / (lit::<T>(4.0) * T::pi() * r)),
    }
}

/// `K₀(x)/2π`, zero past the underflow point.
pub(crate) fn k0_over_two_pi<T: Real>(x: T) -> Result<T> {
    if x > lit(MAX_ARGUMENT) {
        return Ok(T::zero());
    }
    Ok(bessel_k0(x)? / T::two_pi())
}
