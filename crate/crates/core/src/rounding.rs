//! Successor and predecessor in a format, the `nextOut` widening, and
//! directed rounding of exact values into a format.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::format::Format;
use crate::hp::{Dyadic, Ext};
use crate::interval::Interval;

/// Rounding direction: `Down` is toward −∞ (RD), `Up` toward +∞ (RU).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Down,
    Up,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RoundingError {
    #[error("NaN has no successor")]
    NaN,
    #[error("{value:e} is not a {format} value")]
    NotInFormat { value: f64, format: Format },
}

/// Maps a float encoding onto the signed integer line so that consecutive
/// format values have consecutive ordinals; both zeros map to 0.
fn ordinal64(x: f64) -> i64 {
    let bits = x.to_bits() as i64;
    if bits < 0 {
        -(bits & i64::MAX)
    } else {
        bits
    }
}

fn from_ordinal64(o: i64) -> f64 {
    if o < 0 {
        f64::from_bits((-o) as u64 | (1u64 << 63))
    } else {
        f64::from_bits(o as u64)
    }
}

fn ordinal32(x: f32) -> i32 {
    let bits = x.to_bits() as i32;
    if bits < 0 {
        -(bits & i32::MAX)
    } else {
        bits
    }
}

fn from_ordinal32(o: i32) -> f32 {
    if o < 0 {
        f32::from_bits((-o) as u32 | (1u32 << 31))
    } else {
        f32::from_bits(o as u32)
    }
}

fn check(x: f64, format: Format) -> Result<(), RoundingError> {
    if x.is_nan() {
        Err(RoundingError::NaN)
    } else if !format.contains(x) {
        Err(RoundingError::NotInFormat { value: x, format })
    } else {
        Ok(())
    }
}

/// Least member of `format` strictly greater than `x`; `+∞` is a fixed point.
pub fn next_up(x: f64, format: Format) -> Result<f64, RoundingError> {
    check(x, format)?;
    if x == f64::INFINITY {
        return Ok(x);
    }
    Ok(match format {
        Format::Binary64 => from_ordinal64(ordinal64(x) + 1),
        Format::Binary32 => from_ordinal32(ordinal32(x as f32) + 1) as f64,
    })
}

/// Greatest member of `format` strictly less than `x`, defined as `-next_up(-x)`.
pub fn next_down(x: f64, format: Format) -> Result<f64, RoundingError> {
    next_up(-x, format).map(|v| -v)
}

/// Infallible stepping for values already known to be format members.
pub(crate) fn step(x: f64, format: Format, dir: Direction) -> f64 {
    match dir {
        Direction::Up => next_up(x, format),
        Direction::Down => next_down(x, format),
    }
    .expect("endpoint is a format member")
}

/// Widens every finite endpoint by one format step; identity on the empty set.
pub fn next_out(x: &Interval) -> Interval {
    match x.bounds() {
        None => *x,
        Some((lo, hi)) => {
            let f = x.format();
            Interval::from_checked(step(lo, f, Direction::Down), step(hi, f, Direction::Up), f)
        }
    }
}

/// Greatest format value `<= v` (`Down`) or least format value `>= v` (`Up`).
///
/// Magnitudes beyond the largest finite value go to the infinity on the
/// outward side and to `±max_finite` on the inward side; magnitudes below the
/// smallest subnormal go to zero or `±min_subnormal` by direction. Zero
/// results are returned as `+0`.
pub fn round_to_format(v: &Ext, format: Format, dir: Direction) -> f64 {
    match v {
        Ext::NegInf => f64::NEG_INFINITY,
        Ext::PosInf => f64::INFINITY,
        Ext::Finite(d) => round_dyadic(d, format, dir),
    }
}

pub(crate) fn round_dyadic(d: &Dyadic, format: Format, dir: Direction) -> f64 {
    if d.is_zero() {
        return 0.0;
    }
    let neg = d.is_negative();
    // Round the magnitude toward zero or away from zero.
    let away = matches!((neg, dir), (false, Direction::Up) | (true, Direction::Down));
    let mag = round_magnitude(d, format, away);
    if neg && mag != 0.0 {
        -mag
    } else {
        mag
    }
}

fn round_magnitude(d: &Dyadic, format: Format, away: bool) -> f64 {
    let p = format.precision() as i64;
    let top = d.ilog2().expect("nonzero");
    if top > format.emax() {
        return if away { f64::INFINITY } else { format.max_finite() };
    }
    let quantum = (top - p + 1).max(format.subnormal_exponent());
    // Integer multiple of 2^quantum, truncated toward zero.
    let shift = quantum - d.exponent();
    let (mut m, inexact) = if shift <= 0 {
        (d.mantissa() << (-shift) as u64, false)
    } else if shift as u64 > d.significant_bits() + 1 {
        (BigUint::zero(), true)
    } else {
        let m = d.mantissa() >> shift as u64;
        // The mantissa is odd, so any right shift drops a one bit.
        (m, true)
    };
    if inexact && away {
        m += 1u32;
    }
    let m = m.to_u64().expect("at most p + 1 bits");
    if m == 0 {
        return 0.0;
    }
    let v = crate::hp::ldexp(m as f64, quantum);
    if v > format.max_finite() {
        return f64::INFINITY;
    }
    v
}

/// True when the exact value `v` is a member of `format`.
pub fn is_representable(v: &Ext, format: Format) -> bool {
    round_to_format(v, format, Direction::Down).to_bits()
        == round_to_format(v, format, Direction::Up).to_bits()
}

/// Compares an exact value with a format value.
pub(crate) fn cmp_ext_f64(v: &Ext, x: f64) -> Ordering {
    v.cmp(&Ext::from_f64(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B64: Format = Format::Binary64;
    const B32: Format = Format::Binary32;

    #[test]
    fn next_up_examples() {
        assert_eq!(next_up(f64::INFINITY, B64).unwrap(), f64::INFINITY);
        assert_eq!(next_up(0.0, B64).unwrap(), f64::from_bits(1));
        assert_eq!(next_up(-0.0, B64).unwrap(), f64::from_bits(1));
        assert_eq!(next_up(1.0, B64).unwrap(), 1.0 + f64::EPSILON);
        assert_eq!(next_up(f64::NEG_INFINITY, B64).unwrap(), -f64::MAX);
        assert_eq!(next_up(f64::MAX, B64).unwrap(), f64::INFINITY);
        assert_eq!(next_up(-f64::from_bits(1), B64).unwrap(), 0.0);
        assert_eq!(next_up(1.0, B32).unwrap(), 1.0 + f32::EPSILON as f64);
        assert_eq!(next_up(f32::MAX as f64, B32).unwrap(), f64::INFINITY);
        assert_eq!(next_up(0.0, B32).unwrap(), B32.min_subnormal());
    }

    #[test]
    fn next_down_examples() {
        assert_eq!(next_down(f64::NEG_INFINITY, B64).unwrap(), f64::NEG_INFINITY);
        assert_eq!(next_down(0.0, B64).unwrap(), -f64::from_bits(1));
        assert_eq!(next_down(-1.0, B64).unwrap(), -(1.0 + f64::EPSILON));
        assert_eq!(next_down(1.0, B64).unwrap(), 1.0 - f64::EPSILON / 2.0);
    }

    #[test]
    fn errors() {
        assert_eq!(next_up(f64::NAN, B64), Err(RoundingError::NaN));
        assert!(matches!(next_down(0.1, B32), Err(RoundingError::NotInFormat { .. })));
    }

    #[test]
    fn agrees_with_std_successors() {
        let xs = [
            0.0, -0.0, 1.0, -1.0, 0.1, 3.0e-310, -3.0e-310, f64::MAX, -f64::MAX, f64::MIN_POSITIVE,
            1e300, -7.5,
        ];
        for x in xs {
            assert_eq!(next_up(x, B64).unwrap().to_bits(), x.next_up().to_bits(), "{x:e}");
            assert_eq!(next_down(x, B64).unwrap().to_bits(), x.next_down().to_bits(), "{x:e}");
            let y = x as f32;
            assert_eq!(next_up(y as f64, B32).unwrap(), y.next_up() as f64);
        }
    }

    #[test]
    fn rounding_examples() {
        let half = Ext::from_f64(0.5);
        assert_eq!(round_to_format(&half, B64, Direction::Down), 0.5);
        let big = Ext::Finite(Dyadic::pow2(1025));
        assert_eq!(round_to_format(&big, B64, Direction::Up), f64::INFINITY);
        assert_eq!(round_to_format(&big, B64, Direction::Down), f64::MAX);
        assert_eq!(round_to_format(&-&big, B64, Direction::Down), f64::NEG_INFINITY);
        let tiny = Ext::Finite(Dyadic::pow2(-2000));
        assert_eq!(round_to_format(&tiny, B64, Direction::Down), 0.0);
        assert_eq!(round_to_format(&tiny, B64, Direction::Up), f64::from_bits(1));
        assert_eq!(round_to_format(&-&tiny, B64, Direction::Down), -f64::from_bits(1));
        assert_eq!(round_to_format(&-&tiny, B64, Direction::Up).to_bits(), 0f64.to_bits());
        let third = Ext::Finite(Dyadic::one().div(&Dyadic::from_i64(3), 200, Direction::Down));
        assert_eq!(round_to_format(&third, B32, Direction::Down), (1.0f32 / 3.0).next_down() as f64);
        assert_eq!(round_to_format(&third, B32, Direction::Up), (1.0f32 / 3.0) as f64);
    }

    #[test]
    fn rounding_just_below_max_rounds_up_to_infinity() {
        let above_max = Dyadic::from_f64(f64::MAX).unwrap().add(&Dyadic::pow2(900));
        let v = Ext::Finite(above_max);
        assert_eq!(round_to_format(&v, B64, Direction::Up), f64::INFINITY);
        assert_eq!(round_to_format(&v, B64, Direction::Down), f64::MAX);
    }

    #[test]
    fn representability() {
        assert!(is_representable(&Ext::from_f64(0.1), B64));
        assert!(!is_representable(&Ext::from_f64(0.1), B32));
        assert!(is_representable(&Ext::PosInf, B32));
        assert!(!is_representable(&Ext::Finite(Dyadic::pow2(-1075)), B64));
        assert!(is_representable(&Ext::zero(), B64));
    }
}
