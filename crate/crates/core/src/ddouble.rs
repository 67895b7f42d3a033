//! Double-double arithmetic.
//!
//! A [`DoubleDouble`] is an unevaluated sum `hi + lo` of two `f64` values
//! with `|lo| <= ulp(hi)/2`, carrying roughly 31 significant decimal digits.
//! It backs the extended-precision mode used to cross-check the default
//! `f64` pipeline; see [`crate::scalar::RealScalar`].
//!
//! The error-free transforms and the exp/ln/sqrt kernels follow the
//! standard double-double algorithms (Dekker/Knuth two-sum and two-product,
//! Karp square roots, argument-reduced Taylor exponentials and Newton
//! logarithms).

// The hi components of the split constants below necessarily match the f64
// constants they extend.
#![allow(clippy::approx_constant)]

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::scalar::RealScalar;

/// `a + b` with exact rounding error, no precondition on magnitudes.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `a + b` with exact rounding error, requires `|a| >= |b|` or either zero.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// `a * b` with exact rounding error.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Extended-precision scalar stored as a normalized pair of doubles.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub const PI: Self = DoubleDouble {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const LN_2: Self = DoubleDouble {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    pub const EULER_GAMMA: Self = DoubleDouble {
        hi: 0.5772156649015329,
        lo: -4.942915152430645e-18,
    };

    /// Builds a value from two parts, renormalizing so `|lo| <= ulp(hi)/2`.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        DoubleDouble { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by a power of two.
    #[inline]
    fn mul_pow2(self, p: f64) -> Self {
        DoubleDouble {
            hi: self.hi * p,
            lo: self.lo * p,
        }
    }

    #[inline]
    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        DoubleDouble { hi, lo }
    }

    #[inline]
    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - DoubleDouble::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + 2.0 * self.hi * self.lo + self.lo * self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn floor(self) -> Self {
        let f = self.hi.floor();
        if f == self.hi {
            let (hi, lo) = quick_two_sum(f, self.lo.floor());
            DoubleDouble { hi, lo }
        } else {
            DoubleDouble { hi: f, lo: 0.0 }
        }
    }

    pub fn trunc(self) -> Self {
        if self.hi < 0.0 {
            -(-self).floor()
        } else {
            self.floor()
        }
    }

    /// Square root by Karp's method: one refinement of the `f64` seed keeps
    /// the result within a few units of double-double precision.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return DoubleDouble::ZERO;
        }
        if self.hi < 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - DoubleDouble::from_f64(ax).sqr();
        DoubleDouble::from_f64(ax).add_f64(diff.hi * (x * 0.5))
    }

    /// Exponential: reduce by `ln 2` and a factor of 512, run a short Taylor
    /// series, then square the result back up.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return DoubleDouble::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - DoubleDouble::LN_2.mul_f64(k)).mul_pow2(1.0 / 512.0);

        // e^r - 1 for |r| <= ln2/1024
        let mut sum = r;
        let mut term = r;
        let mut i = 2u32;
        loop {
            term = (term * r).div_f64(f64::from(i));
            sum += term;
            if term.hi.abs() < 1e-40 || i > 24 {
                break;
            }
            i += 1;
        }
        // Undo the 2^9 scaling: s <- (1 + s)^2 - 1, nine times.
        for _ in 0..9 {
            sum = sum.mul_pow2(2.0) + sum.sqr();
        }
        (sum + DoubleDouble::ONE).mul_pow2(2f64.powi(k as i32))
    }

    /// Natural logarithm via two Newton steps on `e^y = x` from the `f64`
    /// seed; each step doubles the correct digits.
    pub fn ln(self) -> Self {
        if self.is_zero() {
            return DoubleDouble::from_f64(f64::NEG_INFINITY);
        }
        if self.hi < 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        if self == DoubleDouble::ONE {
            return DoubleDouble::ZERO;
        }
        let mut y = DoubleDouble::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DoubleDouble::ONE;
        }
        y
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return DoubleDouble::ONE;
        }
        let mut base = if n < 0 { DoubleDouble::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = DoubleDouble::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Renders the value in scientific notation with `digits` significant
    /// digits (at most 31 are meaningful).
    pub fn to_sci_string(self, digits: usize) -> String {
        let digits = digits.clamp(1, 31);
        if self.is_nan() {
            return "NaN".to_string();
        }
        if !self.is_finite() {
            return if self.hi > 0.0 { "inf" } else { "-inf" }.to_string();
        }
        if self.is_zero() {
            return format!("{:.*}e0", digits.saturating_sub(1), 0.0);
        }
        let neg = self.hi < 0.0;
        let mut x = self.abs();
        let ten = DoubleDouble::from_f64(10.0);
        let mut e = x.hi.abs().log10().floor() as i32;
        x /= ten.powi(e);
        if x.hi >= 10.0 {
            x /= ten;
            e += 1;
        } else if x.hi < 1.0 {
            x *= ten;
            e -= 1;
        }

        // One guard digit for rounding.
        let mut ds: Vec<i32> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = x.hi.floor() as i32;
            ds.push(d);
            x = (x - DoubleDouble::from_f64(f64::from(d))) * ten;
        }
        // Fix digits pushed to -1 or 10 by rounding in the scaled iterate.
        for i in (1..ds.len()).rev() {
            if ds[i] < 0 {
                ds[i] += 10;
                ds[i - 1] -= 1;
            } else if ds[i] > 9 {
                ds[i] -= 10;
                ds[i - 1] += 1;
            }
        }
        // Round on the guard digit.
        if ds[digits] >= 5 {
            let mut i = digits - 1;
            loop {
                ds[i] += 1;
                if ds[i] < 10 {
                    break;
                }
                ds[i] = 0;
                if i == 0 {
                    ds.insert(0, 1);
                    e += 1;
                    break;
                }
                i -= 1;
            }
        }
        ds.truncate(digits);

        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push(char::from(b'0' + ds[0] as u8));
        if digits > 1 {
            out.push('.');
            for &d in &ds[1..] {
                out.push(char::from(b'0' + d as u8));
            }
        }
        out.push('e');
        out.push_str(&e.to_string());
        out
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, o: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, o: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + self.hi * o.lo + self.lo * o.hi);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    #[inline]
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o.mul_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.mul_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        DoubleDouble { hi, lo }
    }
}

impl Rem for DoubleDouble {
    type Output = Self;

    fn rem(self, o: Self) -> Self {
        self - o * (self / o).trunc()
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, o: Self) {
        *self = *self / o;
    }
}

impl RemAssign for DoubleDouble {
    fn rem_assign(&mut self, o: Self) {
        *self = *self % o;
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            c => c,
        }
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(DoubleDouble::ZERO, |a, b| a + b)
    }
}

impl Product for DoubleDouble {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(DoubleDouble::ONE, |a, b| a * b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::ZERO
    }

    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble::ONE
    }
}

/// Error returned when parsing a [`DoubleDouble`] fails.
#[derive(Debug)]
pub struct ParseDoubleDoubleError(String);

impl fmt::Display for ParseDoubleDoubleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid double-double literal: {}", self.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = ParseDoubleDoubleError;

    /// Parses with `f64` precision only; the low component is zero.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseDoubleDoubleError(format!("unsupported radix {radix}")));
        }
        s.parse::<f64>()
            .map(DoubleDouble::from_f64)
            .map_err(|e| ParseDoubleDoubleError(e.to_string()))
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(v: i64) -> Option<Self> {
        let hi = v as f64;
        let lo = (v as i128 - hi as i128) as f64;
        Some(DoubleDouble::new(hi, lo))
    }

    fn from_u64(v: u64) -> Option<Self> {
        let hi = v as f64;
        let lo = (v as i128 - hi as i128) as f64;
        Some(DoubleDouble::new(hi, lo))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Some(DoubleDouble::from_f64(v))
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        if t.hi.abs() >= 9.3e18 {
            return None;
        }
        Some(t.hi as i64 + t.lo as i64)
    }

    fn to_u64(&self) -> Option<u64> {
        if self.hi < 0.0 {
            return None;
        }
        self.to_i64().map(|v| v as u64)
    }

    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_sci_string(f.precision().unwrap_or(31));
        f.pad(&s)
    }
}

impl RealScalar for DoubleDouble {
    const DIGITS: u32 = 31;

    #[inline]
    fn embed(v: f64) -> Self {
        DoubleDouble::from_f64(v)
    }

    #[inline]
    fn nearest_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn from_parts(hi: f64, lo: f64) -> Self {
        DoubleDouble::new(hi, lo)
    }

    #[inline]
    fn epsilon() -> Self {
        DoubleDouble::from_f64(4.93038065763132e-32) // 2^-104
    }

    #[inline]
    fn pi() -> Self {
        DoubleDouble::PI
    }

    #[inline]
    fn ln_2() -> Self {
        DoubleDouble::LN_2
    }

    #[inline]
    fn euler_gamma() -> Self {
        DoubleDouble::EULER_GAMMA
    }

    #[inline]
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }

    #[inline]
    fn floor(self) -> Self {
        DoubleDouble::floor(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }

    #[inline]
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }

    #[inline]
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        DoubleDouble::powi(self, n)
    }

    #[inline]
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }

    #[inline]
    fn is_nan(self) -> bool {
        DoubleDouble::is_nan(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type DD = DoubleDouble;

    fn dd(hi: f64, lo: f64) -> DD {
        DD::new(hi, lo)
    }

    /// |a - b| as a plain f64, good enough for 1e-30-scale assertions.
    fn diff(a: DD, b: DD) -> f64 {
        (a - b).hi.abs()
    }

    #[test]
    fn add_captures_low_order_bits() {
        let a = DD::from_f64(1.0);
        let b = DD::from_f64(1e-25);
        let s = a + b;
        assert_eq!((s - a).hi, 1e-25);
    }

    #[test]
    fn mul_reproduces_exact_products() {
        let a = dd(1.0 / 3.0, 0.0);
        let t = a.mul_f64(3.0);
        assert!(diff(t, DD::from_f64(1.0)) < 1e-16); // 1/3 was already rounded
        let exact = DD::from_f64(1.0) / DD::from_f64(3.0);
        assert!(diff(exact.mul_f64(3.0), DD::ONE) < 1e-31);
    }

    #[test]
    fn division_round_trips() {
        let x = DD::PI;
        let y = DD::from_f64(1.0) / DD::from_f64(7.0);
        let z = x / y * y;
        assert!(diff(z, x) < 1e-30);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = DD::from_f64(2.0);
        let r = two.sqrt();
        assert!(diff(r.sqr(), two) < 1e-31);
        // 40-digit reference for sqrt(2)
        let reference = dd(1.4142135623730951, -9.667293313452913e-17);
        assert!(diff(r, reference) < 1e-31);
    }

    #[test]
    fn exp_and_ln_match_references() {
        // e to 40 digits: 2.718281828459045235360287471352662497757
        let e = DD::ONE.exp();
        let reference = dd(2.718281828459045, 1.4456468917292502e-16);
        assert!(diff(e, reference) < 1e-30);

        let ln2 = DD::from_f64(2.0).ln();
        assert!(diff(ln2, DD::LN_2) < 1e-31);

        assert!(DD::ZERO.exp() == DD::ONE);
        assert!(DD::ONE.ln().is_zero());
    }

    #[test]
    fn exp_ln_round_trip_on_grid() {
        for i in 1..200 {
            let x = DD::from_f64(f64::from(i) * 0.37);
            let y = x.ln().exp();
            assert!(diff(y, x) / x.hi < 1e-29, "round trip at {}", x.hi);
        }
    }

    #[test]
    fn floor_handles_negative_low_component() {
        // 3 - tiny has floor 2.
        let x = DD::from_f64(3.0) + DD::from_f64(-1e-20);
        assert_eq!(x.floor().hi, 2.0);
        // Exactly 3 stays 3.
        assert_eq!(DD::from_f64(3.0).floor().hi, 3.0);
        // Negative values floor away from zero.
        let y = DD::from_f64(-2.5);
        assert_eq!(y.floor().hi, -3.0);
        assert_eq!(y.trunc().hi, -2.0);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = DD::from_f64(1.0) / DD::from_f64(3.0);
        let mut acc = DD::ONE;
        for _ in 0..11 {
            acc *= x;
        }
        assert!(diff(x.powi(11), acc) < 1e-35);
        assert!(diff(x.powi(-2), DD::from_f64(9.0)) < 1e-30);
    }

    #[test]
    fn display_prints_31_digits_of_pi() {
        assert_eq!(DD::PI.to_sci_string(31), "3.141592653589793238462643383280e0");
        assert_eq!(DD::from_f64(0.0).to_sci_string(5), "0.0000e0");
        assert_eq!(DD::from_f64(-1.5).to_sci_string(3), "-1.50e0");
        assert_eq!(dd(9.999999999, 0.0).to_sci_string(4), "1.000e1");
    }

    #[test]
    fn ordering_uses_both_components() {
        let a = DD::from_f64(1.0);
        let b = a + DD::from_f64(1e-25);
        assert!(b > a);
        assert!(a < b);
        assert!(a == DD::from_f64(1.0));
    }

    #[test]
    fn euler_gamma_split_is_normalized() {
        let g = DD::EULER_GAMMA;
        assert_eq!(DD::new(g.hi, g.lo), g);
        assert!((g.nearest_f64() - 0.5772156649015329).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn field_ops_are_consistent(a in -1e6f64..1e6, b in 0.1f64..1e6) {
            let x = DD::from_f64(a) / DD::from_f64(3.0);
            let y = DD::from_f64(b) / DD::from_f64(7.0);
            // (x + y) - y recovers x
            prop_assert!(diff((x + y) - y, x) <= 1e-22);
            // (x * y) / y recovers x
            prop_assert!(diff((x * y) / y, x) <= x.hi.abs().max(1.0) * 1e-30);
        }

        #[test]
        fn exp_respects_addition(a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let x = DD::from_f64(a);
            let y = DD::from_f64(b);
            let lhs = (x + y).exp();
            let rhs = x.exp() * y.exp();
            prop_assert!(diff(lhs, rhs) / lhs.hi.abs() <= 1e-29);
        }
    }
}
