//! Scalar abstraction shared by every numeric routine in the crate.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Floating-point scalar accepted by the generic core (`f32` or `f64`).
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
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn c() -> Self {
        Self::lit(SPEED_OF_LIGHT)
    }

    fn k_b() -> Self {
        Self::lit(BOLTZMANN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Linear power ratio to decibels.
#[inline]
pub fn to_db<T: Real>(x: T) -> T {
    T::lit(10.0) * x.log10()
}

/// Decibels to linear power ratio.
#[inline]
pub fn from_db<T: Real>(x: T) -> T {
    T::lit(10.0).powf(x / T::lit(10.0))
}

/// Normalized sinc, `sin(pi x)/(pi x)` with `sinc(0) = 1`.
pub fn sinc<T: Real>(x: T) -> T {
    let px = T::PI() * x;
    if px.abs() < T::lit(1e-8) {
        T::one() - px * px / T::lit(6.0)
    } else {
        px.sin() / px
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        for &x in &[1e-18, 0.56, 1.0, 65536.0] {
            assert!((from_db(to_db(x)) / x - 1.0_f64).abs() < 1e-12);
        }
        assert!((to_db(2.0_f32) - 3.0103).abs() < 1e-4);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0_f64), 1.0);
        assert!(sinc(1.0_f64).abs() < 1e-15);
        assert!((sinc(0.5_f64) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!((sinc(1e-9_f64) - 1.0).abs() < 1e-15);
    }
}
