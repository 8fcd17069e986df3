//! Modified Bessel functions `I_ν`, `K_ν` for integer and half-odd-integer
//! orders, plus the modified spherical pair `i_l`, `k_l`.
//!
//! All evaluations go through the exponentially scaled pair
//! `(e^{-x} I_ν(x), e^{x} K_ν(x))`. `K` is seeded at order 0 or 1/2 (series
//! for small `x`; Steed's continued fraction otherwise; closed form for
//! half-odd orders) and recurred upward. `I` then follows from the ratio
//! `I_{ν+1}/I_ν` (continued fraction) and the Wronskian
//! `I_ν K_{ν+1} + I_{ν+1} K_ν = 1/x`.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Largest supported order.
pub const MAX_ORDER: u32 = 200;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 700.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
const MAX_CF_TERMS: usize = 200_000;

/// Bessel order restricted to `n` or `n + 1/2`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(u32);

impl Order {
    pub const fn integer(n: u32) -> Self {
        Order(2 * n)
    }

    /// The order `l + 1/2`.
    pub const fn half_odd(l: u32) -> Self {
        Order(2 * l + 1)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn value<T: Real>(self) -> T {
        from_usize::<T>(self.0 as usize) * lit(0.5)
    }
}

fn check_domain<T: Real>(order: Order, x: T) -> Result<()> {
    if !(x > T::zero()) || x > lit(MAX_ARGUMENT) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "modified Bessel argument must satisfy 0 < x <= {MAX_ARGUMENT}, got {}",
            to_f64(x)
        )));
    }
    if order.0 > 2 * MAX_ORDER {
        return Err(Error::Domain(format!(
            "modified Bessel order {} exceeds {MAX_ORDER}",
            order.0 as f64 / 2.0
        )));
    }
    Ok(())
}

/// Power series of `I_0` and `I_1`; all terms positive.
fn i0_i1_series<T: Real>(x: T) -> (T, T) {
    let q = x * x * lit(0.25);
    let mut t0 = T::one();
    let mut t1 = T::one();
    let mut s0 = T::one();
    let mut s1 = T::one();
    for k in 1..500usize {
        let kf: T = from_usize(k);
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + T::one()));
        s0 += t0;
        s1 += t1;
        if t0 <= T::eps() * s0 * lit(0.25) && t1 <= T::eps() * s1 * lit(0.25) {
            break;
        }
    }
    (s0, s1 * x * lit(0.5))
}

/// `I_0(x)` by its power series; used on kernel hot paths with small `x`.
pub fn bessel_i0_series<T: Real>(x: T) -> T {
    i0_i1_series(x).0
}

/// Unscaled `K_0`, `K_1` for `0 < x <= 2`.
fn k0_k1_small<T: Real>(x: T) -> (T, T) {
    let (i0, i1) = i0_i1_series(x);
    let q = x * x * lit(0.25);
    let mut term = T::one();
    let mut harmonic = T::zero();
    let mut tail = T::zero();
    for k in 1..200usize {
        let kf: T = from_usize(k);
        term *= q / (kf * kf);
        harmonic += T::one() / kf;
        let add = term * harmonic;
        tail += add;
        if add <= T::eps() * tail.abs() * lit(0.25) {
            break;
        }
    }
    let k0 = -((x * lit(0.5)).ln() + lit(EULER_GAMMA)) * i0 + tail;
    let k1 = (T::one() / x - i1 * k0) / i0;
    (k0, k1)
}

/// Scaled `e^x K_0`, `e^x K_1` for `x > 2` by Steed's continued fraction.
fn k0_k1_steed_scaled<T: Real>(x: T) -> Result<(T, T)> {
    let two: T = lit(2.0);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1: T = lit(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    let mut converged = false;
    for i in 2..MAX_CF_TERMS {
        let fi: T = from_usize(i);
        a -= two * (fi - T::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < T::eps() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Steed continued fraction for K".into()));
    }
    h *= a1;
    let k0 = (T::pi() / (two * x)).sqrt() / s;
    let k1 = k0 * (x + lit(0.5) - h) / x;
    Ok((k0, k1))
}

/// Scaled `e^x K_μ`, `e^x K_{μ+1}` with `μ ∈ {0, 1/2}`.
fn k_seed_scaled<T: Real>(half_odd: bool, x: T) -> Result<(T, T)> {
    if half_odd {
        let k = (T::pi() / (lit::<T>(2.0) * x)).sqrt();
        Ok((k, k * (T::one() + T::one() / x)))
    } else if x <= lit(2.0) {
        let (k0, k1) = k0_k1_small(x);
        let e = x.exp();
        Ok((k0 * e, k1 * e))
    } else {
        k0_k1_steed_scaled(x)
    }
}

/// Ratio `I_{ν+1}(x) / I_ν(x)` by the continued fraction
/// `1/(2(ν+1)/x + 1/(2(ν+2)/x + …))` (modified Lentz).
fn i_ratio<T: Real>(nu: T, x: T) -> Result<T> {
    let tiny: T = lit(1e-30);
    let two: T = lit(2.0);
    let mut f = tiny;
    let mut c = f;
    let mut d = T::zero();
    for k in 1..MAX_CF_TERMS {
        let b = two * (nu + from_usize::<T>(k)) / x;
        d = b + d;
        if d == T::zero() {
            d = tiny;
        }
        c = b + T::one() / c;
        if c == T::zero() {
            c = tiny;
        }
        d = T::one() / d;
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() < T::eps() {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence("continued fraction for I ratio".into()))
}

/// Scaled `K` at orders `ν` and `ν+1`, by upward recurrence.
fn k_pair_scaled<T: Real>(order: Order, x: T) -> Result<(T, T)> {
    let half_odd = !order.is_integer();
    let (mut k_lo, mut k_hi) = k_seed_scaled(half_odd, x)?;
    let mu: T = if half_odd { lit(0.5) } else { T::zero() };
    let steps = (order.0 / 2) as usize;
    for step in 1..=steps {
        let nu = mu + from_usize::<T>(step);
        let next = k_lo + lit::<T>(2.0) * nu / x * k_hi;
        k_lo = k_hi;
        k_hi = next;
        if !k_hi.is_finite() {
            return Err(Error::Overflow {
                what: format!("K_{}({})", to_f64(nu) + 1.0, to_f64(x)),
            });
        }
    }
    Ok((k_lo, k_hi))
}

/// Exponentially scaled pair `(e^{-x} I_ν(x), e^{x} K_ν(x))`.
pub fn bessel_ik_scaled<T: Real>(order: Order, x: T) -> Result<(T, T)> {
    check_domain(order, x)?;
    let (k_nu, k_next) = k_pair_scaled(order, x)?;
    let ratio = i_ratio(order.value::<T>(), x)?;
    let i_nu = T::one() / (x * (k_next + ratio * k_nu));
    Ok((i_nu, k_nu))
}

/// `I_ν(x)`.
pub fn bessel_i<T: Real>(order: Order, x: T) -> Result<T> {
    let (i, _) = bessel_ik_scaled(order, x)?;
    let v = i * x.exp();
    if !v.is_finite() {
        return Err(Error::Overflow {
            what: format!("I({})", to_f64(x)),
        });
    }
    Ok(v)
}

/// `K_ν(x)`.
pub fn bessel_k<T: Real>(order: Order, x: T) -> Result<T> {
    check_domain(order, x)?;
    let (k, _) = k_pair_scaled(order, x)?;
    Ok(k * (-x).exp())
}

/// `K_0(x)` only, without the `I` continued fraction; kernel hot path.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    bessel_k(Order::integer(0), x)
}

/// Product `I_ν(x) K_ν(x)` computed from ratios, so it never overflows even
/// where the factors individually do.
pub fn bessel_ik_product<T: Real>(order: Order, x: T) -> Result<T> {
    check_domain(order, x)?;
    let half_odd = !order.is_integer();
    let (k_lo, k_hi) = k_seed_scaled(half_odd, x)?;
    // rho = K_{ν+1}/K_ν, recurred upward: rho_ν = 1/rho_{ν-1} + 2ν/x.
    let mut rho = k_hi / k_lo;
    let mu: T = if half_odd { lit(0.5) } else { T::zero() };
    for step in 1..=(order.0 / 2) as usize {
        let nu = mu + from_usize::<T>(step);
        rho = T::one() / rho + lit::<T>(2.0) * nu / x;
    }
    let ratio = i_ratio(order.value::<T>(), x)?;
    Ok(T::one() / (x * (rho + ratio)))
}

/// Modified spherical Bessel pair `i_l(x) = √(π/2x) I_{l+1/2}(x)`,
/// `k_l(x) = √(π/2x) K_{l+1/2}(x)`, so `i_0 = sinh x / x` and
/// `k_0 = (π/2) e^{-x} / x`.
pub fn mod_sph_ik<T: Real>(l: u32, x: T) -> Result<(T, T)> {
    let order = Order::half_odd(l);
    let (i, k) = bessel_ik_scaled(order, x)?;
    let pref = (T::pi() / (lit::<T>(2.0) * x)).sqrt();
    let iv = i * x.exp() * pref;
    let kv = k * (-x).exp() * pref;
    if !iv.is_finite() || !kv.is_finite() {
        return Err(Error::Overflow {
            what: format!("i_{l}, k_{l} at {}", to_f64(x)),
        });
    }
    Ok((iv, kv))
}
