//! Scalar abstraction for the numeric core.
//!
//! Everything downstream of [`crate::specialfn`] is generic over a real
//! scalar type. `f64` is the working type for all tables and scans; the
//! double-double type in [`crate::ddouble`] plugs in behind the same trait
//! when an oracle cross-check needs ~31 significant digits.

use std::fmt;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, NumAssignOps, ToPrimitive};

/// A real scalar with the arithmetic and elementary functions the library
/// needs. Implemented for `f32`, `f64` and [`crate::DoubleDouble`].
pub trait RealScalar:
    Num
    + NumAssignOps
    + FromPrimitive
    + ToPrimitive
    + Neg<Output = Self>
    + PartialOrd
    + Copy
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Approximate count of significant decimal digits carried by the type.
    const DIGITS: u32;

    /// Exact widening conversion from `f64`.
    fn embed(v: f64) -> Self;

    /// Nearest `f64` to this value.
    fn nearest_f64(self) -> f64;

    /// Builds a value from a two-part `f64` split (`hi + lo`). Used for
    /// frozen constants that need more than 53 bits of mantissa.
    fn from_parts(hi: f64, lo: f64) -> Self {
        Self::embed(hi) + Self::embed(lo)
    }

    /// Machine epsilon of the type.
    fn epsilon() -> Self;

    fn pi() -> Self;

    fn ln_2() -> Self;

    /// The Euler-Mascheroni constant, stored to full type precision.
    fn euler_gamma() -> Self;

    fn abs(self) -> Self;

    fn floor(self) -> Self;

    fn sqrt(self) -> Self;

    fn ln(self) -> Self;

    fn exp(self) -> Self;

    fn powi(self, n: i32) -> Self;

    fn powf(self, e: Self) -> Self {
        (self.ln() * e).exp()
    }

    /// `ln(1 + t)`, accurate for small `t`.
    ///
    /// The default expands `2 atanh(t / (2 + t))`, which keeps full relative
    /// accuracy for `|t| <= 1/2`; larger arguments fall back to plain `ln`.
    fn ln_1p(self) -> Self {
        let half = Self::embed(0.5);
        if self.abs() > half {
            return (Self::one() + self).ln();
        }
        let u = self / (Self::embed(2.0) + self);
        let u2 = u * u;
        let mut sum = Self::zero();
        let mut power = u;
        let mut k = 1u32;
        loop {
            let term = power / Self::embed(f64::from(k));
            sum += term;
            if term.abs() <= sum.abs() * Self::epsilon() || k > 61 {
                break;
            }
            power *= u2;
            k += 2;
        }
        sum * Self::embed(2.0)
    }

    fn is_finite(self) -> bool;

    fn is_nan(self) -> bool;

    fn maximum(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn minimum(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn recip(self) -> Self {
        Self::one() / self
    }
}

impl RealScalar for f64 {
    const DIGITS: u32 = 15;

    #[inline]
    fn embed(v: f64) -> Self {
        v
    }

    #[inline]
    fn nearest_f64(self) -> f64 {
        self
    }

    #[inline]
    fn epsilon() -> Self {
        f64::EPSILON
    }

    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }

    #[inline]
    fn ln_2() -> Self {
        std::f64::consts::LN_2
    }

    #[inline]
    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn floor(self) -> Self {
        f64::floor(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }

    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }

    #[inline]
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }

    #[inline]
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    #[inline]
    fn is_nan(self) -> bool {
        f64::is_nan(self)
    }
}

impl RealScalar for f32 {
    const DIGITS: u32 = 6;

    #[inline]
    fn embed(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn nearest_f64(self) -> f64 {
        f64::from(self)
    }

    #[inline]
    fn epsilon() -> Self {
        f32::EPSILON
    }

    #[inline]
    fn pi() -> Self {
        std::f32::consts::PI
    }

    #[inline]
    fn ln_2() -> Self {
        std::f32::consts::LN_2
    }

    #[inline]
    fn euler_gamma() -> Self {
        0.577_215_7
    }

    #[inline]
    fn abs(self) -> Self {
        f32::abs(self)
    }

    #[inline]
    fn floor(self) -> Self {
        f32::floor(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        f32::sqrt(self)
    }

    #[inline]
    fn ln(self) -> Self {
        f32::ln(self)
    }

    #[inline]
    fn exp(self) -> Self {
        f32::exp(self)
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        f32::powi(self, n)
    }

    #[inline]
    fn powf(self, e: Self) -> Self {
        f32::powf(self, e)
    }

    #[inline]
    fn ln_1p(self) -> Self {
        f32::ln_1p(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }

    #[inline]
    fn is_nan(self) -> bool {
        f32::is_nan(self)
    }
}

/// Neumaier-compensated accumulator. Used wherever a long reduction must not
/// lose low-order bits (mixed-norm sums, harmonic sums in test oracles).
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<S> {
    sum: S,
    compensation: S,
}

impl<S: RealScalar> CompensatedSum<S> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: S::zero(),
            compensation: S::zero(),
        }
    }

    pub fn add(&mut self, value: S) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> S {
        self.sum + self.compensation
    }
}

impl<S: RealScalar> Default for CompensatedSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_1p_matches_std_for_f64() {
        for &t in &[1e-18, 1e-9, 1e-3, 0.1, 0.49, -0.3, -1e-12] {
            let got = <f64 as RealScalar>::ln_1p(t);
            assert!((got - t.ln_1p()).abs() <= 1e-16 * t.abs().max(1e-300));
        }
    }

    #[test]
    fn compensated_sum_beats_naive_on_harmonic_tail() {
        let mut comp = CompensatedSum::<f64>::new();
        let mut naive = 0.0f64;
        for k in 1..=1_000_000u32 {
            let term = 1.0 / f64::from(k);
            comp.add(term);
            naive += term;
        }
        // Reference from summing smallest-first, which is near-exact.
        let mut reference = 0.0f64;
        for k in (1..=1_000_000u32).rev() {
            reference += 1.0 / f64::from(k);
        }
        assert!((comp.total() - reference).abs() <= 1e-12);
        assert!((comp.total() - reference).abs() <= (naive - reference).abs() + 1e-13);
    }

    #[test]
    fn f32_embed_round_trips_small_integers() {
        assert_eq!(<f32 as RealScalar>::embed(42.0), 42.0f32);
        assert_eq!(42.0f32.nearest_f64(), 42.0);
    }
}
