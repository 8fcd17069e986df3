//! Built-in curves and surfaces.

use nalgebra::{Vector2, Vector3};

use super::curve::ClosedCurve;
use super::surface::{AxisKind, ChartJet, SurfaceChart};
use crate::scalar::{from_usize, Real};

/// Circle of radius `radius` centred at `center`, traversed `turns` times.
#[derive(Clone, Copy, Debug)]
pub struct Circle<T: Real> {
    pub radius: T,
    pub center: Vector2<T>,
    pub turns: u32,
}

impl<T: Real> Circle<T> {
    pub fn new(radius: T) -> Self {
        Circle {
            radius,
            center: Vector2::zeros(),
            turns: 1,
        }
    }
}

impl<T: Real> ClosedCurve<T> for Circle<T> {
    fn period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, t: T) -> Vector2<T> {
        let a = t * from_usize::<T>(self.turns as usize);
        self.center + Vector2::new(a.cos(), a.sin()) * self.radius
    }

    fn derivatives(&self, t: T) -> Option<(Vector2<T>, Vector2<T>)> {
        let w = from_usize::<T>(self.turns as usize);
        let (s, c) = (t * w).sin_cos();
        let r = self.radius;
        Some((Vector2::new(-s, c) * (r * w), Vector2::new(-c, -s) * (r * w * w)))
    }
}

/// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y).
#[derive(Clone, Copy, Debug)]
pub struct Ellipse<T: Real> {
    pub a: T,
    pub b: T,
}

impl<T: Real> ClosedCurve<T> for Ellipse<T> {
    fn period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, t: T) -> Vector2<T> {
        Vector2::new(self.a * t.cos(), self.b * t.sin())
    }

    fn derivatives(&self, t: T) -> Option<(Vector2<T>, Vector2<T>)> {
        let (s, c) = t.sin_cos();
        Some((
            Vector2::new(-self.a * s, self.b * c),
            Vector2::new(-self.a * c, -self.b * s),
        ))
    }
}

/// Star-shaped curve `r(t) = R (1 + Σ aₖ cos kt + bₖ sin kt)`, k = 1, 2, ….
#[derive(Clone, Debug)]
pub struct PerturbedCircle<T: Real> {
    pub radius: T,
    pub cos_coeffs: Vec<T>,
    pub sin_coeffs: Vec<T>,
}

impl<T: Real> PerturbedCircle<T> {
    fn radial(&self, t: T) -> (T, T, T) {
        let (mut r, mut dr, mut ddr) = (T::one(), T::zero(), T::zero());
        let terms = self.cos_coeffs.len().max(self.sin_coeffs.len());
        for k in 1..=terms {
            let kf = from_usize::<T>(k);
            let a = self.cos_coeffs.get(k - 1).copied().unwrap_or_else(T::zero);
            let b = self.sin_coeffs.get(k - 1).copied().unwrap_or_else(T::zero);
            let (s, c) = (t * kf).sin_cos();
            r += a * c + b * s;
            dr += kf * (b * c - a * s);
            ddr -= kf * kf * (a * c + b * s);
        }
        (r * self.radius, dr * self.radius, ddr * self.radius)
    }
}

impl<T: Real> ClosedCurve<T> for PerturbedCircle<T> {
    fn period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, t: T) -> Vector2<T> {
        let (r, _, _) = self.radial(t);
        Vector2::new(t.cos(), t.sin()) * r
    }

    fn derivatives(&self, t: T) -> Option<(Vector2<T>, Vector2<T>)> {
        let (r, dr, ddr) = self.radial(t);
        let e = Vector2::new(t.cos(), t.sin());
        let ep = Vector2::new(-t.sin(), t.cos());
        let two = T::one() + T::one();
        Some((e * dr + ep * r, e * (ddr - r) + ep * (dr * two)))
    }
}

/// A closed curve given only by a point map; derivatives come from finite
/// differences.
pub struct FnCurve<T, F> {
    pub period: T,
    pub map: F,
}

impl<T: Real, F: Fn(T) -> Vector2<T> + Send + Sync> ClosedCurve<T> for FnCurve<T, F> {
    fn period(&self) -> T {
        self.period
    }

    fn point(&self, t: T) -> Vector2<T> {
        (self.map)(t)
    }
}

/// Sphere in polar coordinates `(θ, φ)`.
#[derive(Clone, Copy, Debug)]
pub struct Sphere<T: Real> {
    pub radius: T,
}

impl<T: Real> SurfaceChart<T> for Sphere<T> {
    fn u_range(&self) -> (T, T) {
        (T::zero(), T::pi())
    }

    fn u_kind(&self) -> AxisKind {
        AxisKind::PoleCapped
    }

    fn v_period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, u: T, v: T) -> Vector3<T> {
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        Vector3::new(su * cv, su * sv, cu) * self.radius
    }

    fn jet(&self, u: T, v: T) -> Option<ChartJet<T>> {
        let r = self.radius;
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        Some(ChartJet {
            p: Vector3::new(su * cv, su * sv, cu) * r,
            pu: Vector3::new(cu * cv, cu * sv, -su) * r,
            pv: Vector3::new(-su * sv, su * cv, T::zero()) * r,
            puu: Vector3::new(-su * cv, -su * sv, -cu) * r,
            puv: Vector3::new(-cu * sv, cu * cv, T::zero()) * r,
            pvv: Vector3::new(-su * cv, -su * sv, T::zero()) * r,
        })
    }

    fn v_invariant(&self) -> bool {
        true
    }
}

/// Torus `((R + r cos u) cos v, (R + r cos u) sin v, −r sin u)`; the sign of
/// the last component makes `p_u × p_v` point outward.
#[derive(Clone, Copy, Debug)]
pub struct Torus<T: Real> {
    pub major: T,
    pub minor: T,
}

impl<T: Real> SurfaceChart<T> for Torus<T> {
    fn u_range(&self) -> (T, T) {
        (T::zero(), T::two_pi())
    }

    fn u_kind(&self) -> AxisKind {
        AxisKind::Periodic
    }

    fn v_period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, u: T, v: T) -> Vector3<T> {
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        let rho = self.major + self.minor * cu;
        Vector3::new(rho * cv, rho * sv, -self.minor * su)
    }

    fn jet(&self, u: T, v: T) -> Option<ChartJet<T>> {
        let (big, r) = (self.major, self.minor);
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        let rho = big + r * cu;
        Some(ChartJet {
            p: Vector3::new(rho * cv, rho * sv, -r * su),
            pu: Vector3::new(-r * su * cv, -r * su * sv, -r * cu),
            pv: Vector3::new(-rho * sv, rho * cv, T::zero()),
            puu: Vector3::new(-r * cu * cv, -r * cu * sv, r * su),
            puv: Vector3::new(r * su * sv, -r * su * cv, T::zero()),
            pvv: Vector3::new(-rho * cv, -rho * sv, T::zero()),
        })
    }

    fn v_invariant(&self) -> bool {
        true
    }
}

/// Axisymmetric perturbation of a sphere, `r(θ) = R (1 + Σ aₖ cos kθ)`,
/// k = 1, 2, …. Derivatives come from finite differences.
#[derive(Clone, Debug)]
pub struct PerturbedSphere<T: Real> {
    pub radius: T,
    pub coeffs: Vec<T>,
}

impl<T: Real> SurfaceChart<T> for PerturbedSphere<T> {
    fn u_range(&self) -> (T, T) {
        (T::zero(), T::pi())
    }

    fn u_kind(&self) -> AxisKind {
        AxisKind::PoleCapped
    }

    fn v_period(&self) -> T {
        T::two_pi()
    }

    fn point(&self, u: T, v: T) -> Vector3<T> {
        let mut r = T::one();
        for (k, &a) in self.coeffs.iter().enumerate() {
            r += a * (u * from_usize::<T>(k + 1)).cos();
        }
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        Vector3::new(su * cv, su * sv, cu) * (r * self.radius)
    }

    fn v_invariant(&self) -> bool {
        true
    }
}
