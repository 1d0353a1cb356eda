//! Directed rounding from round-to-nearest hardware arithmetic.
//!
//! Each operation computes the nearest result, recovers the sign of the
//! rounding error with an error-free transformation (two-sum, or an FMA
//! residual for products, quotients and square roots) and steps one ulp
//! when the nearest result lies on the wrong side. Near the underflow
//! threshold the residual is no longer exact, so those inputs take an exact
//! dyadic path instead. No rounding-mode state is touched.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::format::Format;
use crate::hp::{Dyadic, Ext};
use crate::rounding::{round_to_format, Direction};

pub(crate) trait Ieee:
    Copy
    + PartialOrd
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    const FORMAT: Format;
    const ZERO: Self;
    const ONE: Self;
    const INFINITY: Self;
    const NEG_INFINITY: Self;
    const MAX: Self;
    /// Magnitude above which product and quotient residuals are exact.
    const SAFE_RESULT: Self;
    /// Magnitude above which dividend and radicand residuals are exact.
    const SAFE_OPERAND: Self;

    fn fma(self, b: Self, c: Self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn is_finite(self) -> bool;
    fn next_up(self) -> Self;
    fn next_down(self) -> Self;
    fn to_f64(self) -> f64;
    fn from_f64(x: f64) -> Self;
}

impl Ieee for f64 {
    const FORMAT: Format = Format::Binary64;
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const INFINITY: Self = f64::INFINITY;
    const NEG_INFINITY: Self = f64::NEG_INFINITY;
    const MAX: Self = f64::MAX;
    // 2^(emin + p) and 2^(emin + 2p)
    const SAFE_RESULT: Self = f64::from_bits(54 << 52);
    const SAFE_OPERAND: Self = f64::from_bits(107 << 52);

    fn fma(self, b: Self, c: Self) -> Self {
        self.mul_add(b, c)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn next_up(self) -> Self {
        crate::rounding::step(self, Format::Binary64, Direction::Up)
    }
    fn next_down(self) -> Self {
        crate::rounding::step(self, Format::Binary64, Direction::Down)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl Ieee for f32 {
    const FORMAT: Format = Format::Binary32;
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const INFINITY: Self = f32::INFINITY;
    const NEG_INFINITY: Self = f32::NEG_INFINITY;
    const MAX: Self = f32::MAX;
    // 2^(emin + p) and 2^(emin + 2p)
    const SAFE_RESULT: Self = f32::from_bits(25 << 23);
    const SAFE_OPERAND: Self = f32::from_bits(49 << 23);

    fn fma(self, b: Self, c: Self) -> Self {
        self.mul_add(b, c)
    }
    fn sqrt(self) -> Self {
        f32::sqrt(self)
    }
    fn abs(self) -> Self {
        f32::abs(self)
    }
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
    fn next_up(self) -> Self {
        crate::rounding::step(self as f64, Format::Binary32, Direction::Up) as f32
    }
    fn next_down(self) -> Self {
        crate::rounding::step(self as f64, Format::Binary32, Direction::Down) as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn from_f64(x: f64) -> Self {
        x as f32
    }
}

fn dy<T: Ieee>(x: T) -> Dyadic {
    Dyadic::from_f64(x.to_f64()).expect("finite operand")
}

fn exact_round<T: Ieee>(v: &Dyadic, dir: Direction) -> T {
    T::from_f64(round_to_format(&Ext::Finite(v.clone()), T::FORMAT, dir))
}

/// Steps `nearest` toward the true value when the residual says the true
/// value lies beyond it in direction `dir`.
fn adjust<T: Ieee>(nearest: T, residual_sign: Ordering, dir: Direction) -> T {
    match (dir, residual_sign) {
        (Direction::Down, Ordering::Less) => nearest.next_down(),
        (Direction::Up, Ordering::Greater) => nearest.next_up(),
        _ => nearest,
    }
}

fn sign<T: Ieee>(x: T) -> Ordering {
    x.partial_cmp(&T::ZERO).expect("residual is not NaN")
}

/// Result of an overflowed nearest operation, rounded in direction `dir`.
fn overflow<T: Ieee>(nearest: T, dir: Direction) -> T {
    match (dir, nearest > T::ZERO) {
        (Direction::Down, true) => T::MAX,
        (Direction::Up, false) => -T::MAX,
        _ => nearest,
    }
}

fn two_sum<T: Ieee>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

pub(crate) fn add<T: Ieee>(a: T, b: T, dir: Direction) -> T {
    let s = a + b;
    if !s.is_finite() {
        return if a.is_finite() && b.is_finite() {
            overflow(s, dir)
        } else {
            s
        };
    }
    let (_, err) = two_sum(a, b);
    adjust(s, sign(err), dir)
}

/// Product with the corner convention `0 · ∞ = 0`.
pub(crate) fn mul<T: Ieee>(a: T, b: T, dir: Direction) -> T {
    if a == T::ZERO || b == T::ZERO {
        return T::ZERO;
    }
    let p = a * b;
    if !a.is_finite() || !b.is_finite() {
        return p;
    }
    if !p.is_finite() {
        return overflow(p, dir);
    }
    if p.abs() < T::SAFE_RESULT {
        return exact_round(&dy(a).mul(&dy(b)), dir);
    }
    adjust(p, sign(a.fma(b, -p)), dir)
}

/// Quotient for a nonzero divisor; `finite / ±∞ = 0`.
pub(crate) fn div<T: Ieee>(a: T, b: T, dir: Direction) -> T {
    debug_assert!(b != T::ZERO);
    if a == T::ZERO {
        return T::ZERO;
    }
    let q = a / b;
    if !a.is_finite() || !b.is_finite() {
        // ∞/finite or finite/∞ are exact; ∞/∞ never reaches here.
        return q;
    }
    if !q.is_finite() {
        return overflow(q, dir);
    }
    if q.abs() < T::SAFE_RESULT || a.abs() < T::SAFE_OPERAND {
        let exact_dir = dy(a).div(&dy(b), T::FORMAT.precision() as u64 + 2, dir);
        return exact_round(&exact_dir, dir);
    }
    // a - q·b is exact here; a/b - q has its sign times the sign of b.
    let r = (-q).fma(b, a);
    let s = if b > T::ZERO { sign(r) } else { sign(r).reverse() };
    adjust(q, s, dir)
}

pub(crate) fn sqrt<T: Ieee>(a: T, dir: Direction) -> T {
    debug_assert!(a >= T::ZERO);
    if a == T::ZERO || !a.is_finite() {
        return a.abs();
    }
    if a < T::SAFE_OPERAND {
        let r = dy(a).sqrt(T::FORMAT.precision() as u64 + 2, dir);
        return exact_round(&r, dir);
    }
    let s = a.sqrt();
    // a - s² > 0 means the true root lies above s.
    let r = (-s).fma(s, a);
    adjust(s, sign(r), dir)
}

/// `a·b + c` for finite operands.
pub(crate) fn fma<T: Ieee>(a: T, b: T, c: T, dir: Direction) -> T {
    let r = a.fma(b, c);
    let exact = dy(a).mul(&dy(b)).add(&dy(c));
    if !r.is_finite() {
        return overflow(r, dir);
    }
    adjust(r, exact.cmp(&dy(r)), dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn safe_thresholds() {
        assert_eq!(f64::SAFE_RESULT, 2f64.powi(-1022 + 53));
        assert_eq!(f64::SAFE_OPERAND, 2f64.powi(-1022 + 106));
        assert_eq!(f32::SAFE_RESULT, 2f32.powi(-126 + 24));
        assert_eq!(f32::SAFE_OPERAND, 2f32.powi(-126 + 48));
    }

    #[test]
    fn add_brackets_inexact_sum() {
        let lo = add(0.1f64, 0.2, Direction::Down);
        let hi = add(0.1f64, 0.2, Direction::Up);
        assert_eq!(hi, lo.next_up());
        assert_eq!(add(1.0f64, 2.0, Direction::Down), 3.0);
        assert_eq!(add(f64::MAX, f64::MAX, Direction::Down), f64::MAX);
        assert_eq!(add(f64::MAX, f64::MAX, Direction::Up), f64::INFINITY);
        assert_eq!(add(-f64::MAX, -f64::MAX, Direction::Up), -f64::MAX);
    }

    #[test]
    fn mul_and_div() {
        assert_eq!(mul(3.0f64, 0.0, Direction::Up), 0.0);
        assert_eq!(mul(f64::INFINITY, 0.0, Direction::Up), 0.0);
        let t = f64::from_bits(1);
        assert_eq!(mul(t, 0.5, Direction::Down), 0.0);
        assert_eq!(mul(t, 0.5, Direction::Up), t);
        assert_eq!(mul(-t, 0.5, Direction::Down), -t);
        assert_eq!(div(1.0f64, 3.0, Direction::Up), (1.0f64 / 3.0).next_up());
        assert_eq!(div(1.0f64, 3.0, Direction::Down), 1.0 / 3.0);
        assert_eq!(div(1.0f64, f64::INFINITY, Direction::Down), 0.0);
        assert_eq!(div(-6.0f32, 3.0, Direction::Down), -2.0);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt(2.0f64, Direction::Up), f64::from_bits(0x3ff6a09e667f3bcd));
        assert_eq!(sqrt(2.0f64, Direction::Down), f64::from_bits(0x3ff6a09e667f3bcc));
        assert_eq!(sqrt(4.0f32, Direction::Down), 2.0);
        let t = f64::from_bits(2);
        assert!(sqrt(t, Direction::Down) < sqrt(t, Direction::Up));
    }

    #[test]
    fn fma_examples() {
        assert_eq!(fma(2.0f64, 3.0, 1.0, Direction::Down), 7.0);
        let eps = f64::EPSILON;
        // (1+eps)(1-eps) - 1 = -eps² exactly
        assert_eq!(fma(1.0 + eps, 1.0 - eps, -1.0, Direction::Up), -eps * eps);
        // 0.1f32 · 10 = 1.0000000149..., which rounds to nearest as 1.
        assert_eq!(fma(0.1f32, 10.0, 0.0, Direction::Down), 1.0);
        assert_eq!(fma(0.1f32, 10.0, 0.0, Direction::Up), 1.0f32.next_up());
    }
}
