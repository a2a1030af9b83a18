//! Real scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + serde::Serialize
    + serde::de::DeserializeOwned
    + 'static
{
    /// Relative floor for numerical rank decisions.
    ///
    /// `1e-12` in double precision, scaled up for types with a coarser
    /// unit roundoff.
    fn rank_eps() -> Self {
        let floor = Self::lit(1e-12);
        let rounding = Self::epsilon() * Self::lit(100.0);
        floor.max(rounding)
    }

    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac<T: Scalar>(x: T) -> T {
    let r = x - x.floor();
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer.
#[inline]
pub fn dist_to_integer<T: Scalar>(x: T) -> T {
    (x - x.round()).abs()
}

/// `e^{2πiθ}` evaluated on the reduced phase `frac(θ)`.
///
/// The reduced phase is shifted into `[-1/2, 1/2)` before the trig calls.
#[inline]
pub fn unit_phase<T: Scalar>(theta: T) -> num_complex::Complex<T> {
    let mut r = frac(theta);
    if r >= T::lit(0.5) {
        r = r - T::one();
    }
    let angle = T::TAU() * r;
    num_complex::Complex::new(angle.cos(), angle.sin())
}

/// Pairwise (fixed-tree) summation; bit-stable for a given input order.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(-1e-20_f64), 0.0);
        assert_eq!(frac(2.25_f64), 0.25);
        assert_eq!(frac(-0.25_f64), 0.75);
    }

    #[test]
    fn unit_phase_quarter_turns() {
        let z = unit_phase(0.25_f64);
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let z = unit_phase(1e6_f64 + 0.5);
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    #[test]
    fn rank_eps_per_precision() {
        assert_eq!(f64::rank_eps(), 1e-12);
        assert!(f32::rank_eps() > 1e-6);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
