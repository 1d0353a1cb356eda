//! Binary interchange formats used for interval endpoints.

use std::fmt;
use std::str::FromStr;

/// Target floating-point format of interval endpoints.
///
/// Endpoint values are always carried as `f64`; a binary32 endpoint is an
/// `f64` that is exactly representable as `f32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Binary32,
    Binary64,
}

impl Format {
    pub const ALL: [Format; 2] = [Format::Binary32, Format::Binary64];

    /// Significand width in bits, including the hidden bit.
    pub const fn precision(self) -> u32 {
        match self {
            Format::Binary32 => 24,
            Format::Binary64 => 53,
        }
    }

    pub const fn emax(self) -> i64 {
        match self {
            Format::Binary32 => 127,
            Format::Binary64 => 1023,
        }
    }

    pub const fn emin(self) -> i64 {
        1 - self.emax()
    }

    /// Exponent of the smallest positive subnormal, `emin - p + 1`.
    pub const fn subnormal_exponent(self) -> i64 {
        self.emin() - self.precision() as i64 + 1
    }

    pub fn min_subnormal(self) -> f64 {
        match self {
            Format::Binary32 => f32::from_bits(1) as f64,
            Format::Binary64 => f64::from_bits(1),
        }
    }

    pub fn min_normal(self) -> f64 {
        match self {
            Format::Binary32 => f32::MIN_POSITIVE as f64,
            Format::Binary64 => f64::MIN_POSITIVE,
        }
    }

    pub fn max_finite(self) -> f64 {
        match self {
            Format::Binary32 => f32::MAX as f64,
            Format::Binary64 => f64::MAX,
        }
    }

    /// True when `x` (which may be infinite) is a member of this format.
    /// NaN is never a member.
    pub fn contains(self, x: f64) -> bool {
        match self {
            Format::Binary64 => !x.is_nan(),
            Format::Binary32 => !x.is_nan() && (x as f32) as f64 == x,
        }
    }

    /// Short token used in pair files and the adapter protocol.
    pub const fn token(self) -> &'static str {
        match self {
            Format::Binary32 => "b32",
            Format::Binary64 => "b64",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown format `{0}` (expected b32 or b64)")]
pub struct UnknownFormat(pub String);

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "b32" | "binary32" => Ok(Format::Binary32),
            "b64" | "binary64" => Ok(Format::Binary64),
            _ => Err(UnknownFormat(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_match_interchange_formats() {
        for f in Format::ALL {
            let p = f.precision() as i32;
            assert_eq!(f.min_subnormal(), 2f64.powi(f.subnormal_exponent() as i32));
            assert_eq!(f.min_normal(), 2f64.powi(f.emin() as i32));
            let max = (2.0 - 2f64.powi(1 - p)) * 2f64.powi(f.emax() as i32);
            assert_eq!(f.max_finite(), max);
        }
        assert_eq!(Format::Binary64.subnormal_exponent(), -1074);
        assert_eq!(Format::Binary32.subnormal_exponent(), -149);
    }

    #[test]
    fn membership() {
        assert!(Format::Binary32.contains(0.5));
        assert!(!Format::Binary32.contains(0.1));
        assert!(Format::Binary32.contains(f64::INFINITY));
        assert!(!Format::Binary64.contains(f64::NAN));
        assert!(!Format::Binary32.contains(f64::MAX));
    }

    #[test]
    fn tokens_round_trip() {
        for f in Format::ALL {
            assert_eq!(f.token().parse::<Format>().unwrap(), f);
        }
        assert!("b16".parse::<Format>().is_err());
    }
}
