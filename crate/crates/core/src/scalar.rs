//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing amplitudes and matrix entries: `f32` or `f64`.
///
/// The tolerance hooks scale the numerical contracts to the precision of the
/// type. For `f64` they are the contract values themselves.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Tolerance for exact algebraic identities (norms, unitarity).
    fn identity_tol() -> Self;
    /// Tolerance for Hermiticity and unit trace of density matrices.
    fn hermitian_tol() -> Self;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    fn psd_tol() -> Self;

    /// Lossless for `f64`, rounding for `f32`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f64 {
    fn identity_tol() -> Self {
        1e-12
    }
    fn hermitian_tol() -> Self {
        1e-10
    }
    fn psd_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn identity_tol() -> Self {
        1e-5
    }
    fn hermitian_tol() -> Self {
        1e-5
    }
    fn psd_tol() -> Self {
        1e-4
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let r = theta % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // `-tiny % tau + tau` can round up to exactly `tau`
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_lands_in_half_open_interval() {
        for x in [-7.0_f64, -1e-18, 0.0, 3.0, 6.283185307179586, 20.0] {
            let w = wrap_angle(x);
            assert!((0.0..std::f64::consts::TAU).contains(&w), "{x} -> {w}");
            let turns = (w - x) / std::f64::consts::TAU;
            assert!((turns - turns.round()).abs() < 1e-12);
        }
        assert_eq!(wrap_angle(-std::f64::consts::PI), std::f64::consts::PI);
    }

    #[test]
    fn cis_has_unit_modulus() {
        for k in 0..16 {
            let z = cis(k as f32 * 0.4);
            assert!((z.norm() - 1.0).abs() < f32::identity_tol());
        }
    }
}
