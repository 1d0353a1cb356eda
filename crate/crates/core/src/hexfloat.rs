//! Hexadecimal floating-point text for endpoints and intervals.
//!
//! Endpoints are written like C's `%a`: `0x1.4p+3`, `-0x1p+0`, `0x0p+0`,
//! subnormal binary64 values as `0x0.0000000000001p-1022`, infinities as
//! `inf` / `-inf`. Binary32 endpoints are written as the same real number,
//! so they use the binary64 spelling. Intervals are `[lo,hi]`, `[empty]` or
//! `[entire]`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::format::Format;
use crate::hp::{Dyadic, Ext};
use crate::interval::Interval;
use crate::rounding::is_representable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HexError {
    #[error("malformed hex float `{0}`")]
    Malformed(String),
    #[error("`{text}` is not exactly representable in {format}")]
    NotRepresentable { text: String, format: Format },
    #[error("malformed interval `{0}`")]
    MalformedInterval(String),
    #[error("invalid interval `{0}`")]
    InvalidInterval(String),
}

pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sign = if x.is_sign_negative() && x != 0.0 { "-" } else { "" };
    if x == 0.0 {
        return "0x0p+0".to_string();
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, exp) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { "" } else { "." };
    format!("{sign}0x{lead}{dot}{digits}p{exp:+}")
}

/// Parses a hex float, requiring the value to be exact in `format`.
pub fn parse_hex(text: &str, format: Format) -> Result<f64, HexError> {
    let value = parse_exact(text)?;
    if !is_representable(&value, format) {
        return Err(HexError::NotRepresentable {
            text: text.to_string(),
            format,
        });
    }
    // Exact by the check above.
    Ok(crate::rounding::round_to_format(
        &value,
        format,
        crate::rounding::Direction::Down,
    ))
}

fn parse_exact(text: &str) -> Result<Ext, HexError> {
    let bad = || HexError::Malformed(text.to_string());
    let (neg, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    if matches!(body, "inf" | "infinity" | "Inf" | "INF") {
        return Ok(if neg { Ext::NegInf } else { Ext::PosInf });
    }
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (mantissa, exponent) = body.split_once(['p', 'P']).ok_or_else(bad)?;
    let exponent: i64 = exponent.parse().map_err(|_| bad())?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let mut m = BigUint::zero();
    for c in int_part.chars().chain(frac_part.chars()) {
        let d = c.to_digit(16).ok_or_else(bad)?;
        m = (m << 4u32) + d;
    }
    let e = exponent
        .checked_sub(4 * frac_part.len() as i64)
        .ok_or_else(bad)?;
    Ok(Ext::Finite(Dyadic::from_parts(neg, m, e)))
}

pub fn format_interval(x: &Interval) -> String {
    match x.bounds() {
        None => "[empty]".to_string(),
        Some(_) if x.is_entire() => "[entire]".to_string(),
        Some((a, b)) => format!("[{},{}]", format_hex(a), format_hex(b)),
    }
}

pub fn parse_interval(text: &str, format: Format) -> Result<Interval, HexError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| HexError::MalformedInterval(text.to_string()))?;
    match inner.trim() {
        "empty" => return Ok(Interval::empty(format)),
        "entire" => return Ok(Interval::entire(format)),
        _ => {}
    }
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| HexError::MalformedInterval(text.to_string()))?;
    let lo = parse_hex(a.trim(), format)?;
    let hi = parse_hex(b.trim(), format)?;
    Interval::new(lo, hi, format).map_err(|_| HexError::InvalidInterval(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B64: Format = Format::Binary64;

    #[test]
    fn formatting() {
        assert_eq!(format_hex(10.0), "0x1.4p+3");
        assert_eq!(format_hex(-1.0), "-0x1p+0");
        assert_eq!(format_hex(0.0), "0x0p+0");
        assert_eq!(format_hex(-0.0), "0x0p+0");
        assert_eq!(format_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        assert_eq!(format_hex(1.0 + f64::EPSILON), "0x1.0000000000001p+0");
        assert_eq!(format_hex(2f64.sqrt()), "0x1.6a09e667f3bcdp+0");
        assert_eq!(format_hex(f64::MAX), "0x1.fffffffffffffp+1023");
        assert_eq!(format_hex(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_hex(0.1f32 as f64), "0x1.99999ap-4");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_hex("0x1.4p+3", B64).unwrap(), 10.0);
        assert_eq!(parse_hex("-0x1p+0", B64).unwrap(), -1.0);
        assert_eq!(parse_hex("0x0.0000000000001p-1022", B64).unwrap(), f64::from_bits(1));
        assert_eq!(parse_hex("0x1p-1074", B64).unwrap(), f64::from_bits(1));
        assert_eq!(parse_hex("0x10p-4", B64).unwrap(), 1.0);
        assert_eq!(parse_hex("0x.8p1", B64).unwrap(), 1.0);
        assert_eq!(parse_hex("-inf", B64).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(parse_hex("0x1p-1075", B64), Err(HexError::NotRepresentable { .. })));
        assert!(matches!(
            parse_hex("0x1.99999999999ap-4", Format::Binary32),
            Err(HexError::NotRepresentable { .. })
        ));
        assert!(parse_hex("1.5", B64).is_err());
        assert!(parse_hex("0x1.gp+0", B64).is_err());
        assert!(parse_hex("0xp+0", B64).is_err());
    }

    #[test]
    fn intervals() {
        let x = parse_interval("[0x0p+0,0x1.4p+3]", B64).unwrap();
        assert_eq!(x, Interval::new(0.0, 10.0, B64).unwrap());
        assert!(parse_interval("[empty]", B64).unwrap().is_empty());
        assert!(parse_interval("[entire]", B64).unwrap().is_entire());
        assert!(parse_interval("[-inf,inf]", B64).unwrap().is_entire());
        assert!(matches!(
            parse_interval("[0x1p+1,0x1p+0]", B64),
            Err(HexError::InvalidInterval(_))
        ));
        assert!(parse_interval("[0x1p+0", B64).is_err());
        assert_eq!(format_interval(&x), "[0x0p+0,0x1.4p+3]");
    }

    proptest! {
        #[test]
        fn hex_round_trip_b64(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            let back = parse_hex(&format_hex(x), B64).unwrap();
            prop_assert!(back == x);
            if x != 0.0 {
                prop_assert_eq!(back.to_bits(), x.to_bits());
            }
        }

        #[test]
        fn hex_round_trip_b32(bits in any::<u32>()) {
            let x = f32::from_bits(bits);
            prop_assume!(!x.is_nan());
            let back = parse_hex(&format_hex(x as f64), Format::Binary32).unwrap();
            prop_assert!(back == x as f64);
        }
    }
}
