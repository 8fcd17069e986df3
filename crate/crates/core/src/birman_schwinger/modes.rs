//! Closed-form Birman–Schwinger eigenvalues of the circle and the sphere.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::specfun::{bessel_ik_product, Order};

fn check<T: Real>(kappa: T, radius: T) -> Result<()> {
    if !(kappa > T::zero()) || !(radius > T::zero()) {
        return Err(Error::Domain(format!(
            "kappa and radius must be positive (kappa={kappa}, R={radius})"
        )));
    }
    Ok(())
}

/// `q_n(κ) = R I_|n|(κR) K_|n|(κR)`, the eigenvalue of `Q_κ` on the circle of
/// radius `R` for the Fourier mode `e^{inθ}`.
pub fn circle_mode_q<T: Real>(n: i32, kappa: T, radius: T) -> Result<T> {
    check(kappa, radius)?;
    Ok(radius * bessel_ik_product(Order::integer(n.unsigned_abs()), kappa * radius)?)
}

/// `q_l(κ) = R I_{l+½}(κR) K_{l+½}(κR)`, the eigenvalue of `Q_κ` on the
/// sphere of radius `R` for degree-`l` spherical harmonics; equals
/// `(2/π) κR² i_l(κR) k_l(κR)`.
pub fn sphere_mode_q<T: Real>(l: u32, kappa: T, radius: T) -> Result<T> {
    check(kappa, radius)?;
    Ok(radius * bessel_ik_product(Order::half_odd(l), kappa * radius)?)
}

/// A family of exactly solvable Birman–Schwinger branches indexed by an
/// angular mode, ordered so that `q` decreases with the mode index.
pub trait ModeFamily<T: Real>: Send + Sync {
    fn q(&self, mode: u32, kappa: T) -> Result<T>;

    /// `lim_{κ→0+} q(mode, κ)`; infinite for logarithmically divergent modes.
    fn q_limit(&self, mode: u32) -> T;

    fn multiplicity(&self, mode: u32) -> usize;

    /// Characteristic length, used for the small-κ end of root brackets.
    fn length_scale(&self) -> T;

    /// `|Γ|`: length in 2D, area in 3D.
    fn measure(&self) -> T;

    fn describe(&self) -> String;
}

#[derive(Clone, Copy, Debug)]
pub struct CircleModes<T: Real> {
    pub radius: T,
}

impl<T: Real> ModeFamily<T> for CircleModes<T> {
    fn q(&self, mode: u32, kappa: T) -> Result<T> {
        circle_mode_q(mode as i32, kappa, self.radius)
    }

    fn q_limit(&self, mode: u32) -> T {
        if mode == 0 {
            lit(f64::INFINITY)
        } else {
            self.radius / from_usize::<T>(2 * mode as usize)
        }
    }

    fn multiplicity(&self, mode: u32) -> usize {
        if mode == 0 {
            1
        } else {
            2
        }
    }

    fn length_scale(&self) -> T {
        self.radius
    }

    fn measure(&self) -> T {
        T::two_pi() * self.radius
    }

    fn describe(&self) -> String {
        format!("circle modes R={}", self.radius)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SphereModes<T: Real> {
    pub radius: T,
}

impl<T: Real> ModeFamily<T> for SphereModes<T> {
    fn q(&self, mode: u32, kappa: T) -> Result<T> {
        sphere_mode_q(mode, kappa, self.radius)
    }

    fn q_limit(&self, mode: u32) -> T {
        self.radius / from_usize::<T>(2 * mode as usize + 1)
    }

    fn multiplicity(&self, mode: u32) -> usize {
        2 * mode as usize + 1
    }

    fn length_scale(&self) -> T {
        self.radius
    }

    fn measure(&self) -> T {
        lit::<T>(4.0) * T::pi() * self.radius * self.radius
    }

    fn describe(&self) -> String {
        format!("sphere modes R={}", self.radius)
    }
}
