//! Decimal rendering of intervals with outward rounding.
//!
//! Endpoints are printed with 17 significant digits, the lower endpoint
//! rounded toward −∞ and the upper toward +∞, so the printed interval
//! always contains the stored one. Exponents use Rust's plain `e` style:
//! `1.0000000000000003e0`, `-4.9406564584124655e-324`.

use crate::interval::Interval;
use crate::rounding::Direction;

pub const SIGNIFICANT_DIGITS: usize = 17;

/// `x` rounded in direction `dir` to [`SIGNIFICANT_DIGITS`] digits.
pub fn format_directed(x: f64, dir: Direction) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return format!("0.{}e0", "0".repeat(SIGNIFICANT_DIGITS - 1));
    }
    let neg = x < 0.0;
    // Every finite double has an exact decimal expansion of at most 767
    // significant digits, so this rendering is exact.
    let exact = format!("{:.800e}", x.abs());
    let (mantissa, exp) = exact.split_once('e').expect("exponent present");
    let mut exp: i32 = exp.parse().expect("integer exponent");
    let all: Vec<u8> = mantissa.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let (kept, rest) = all.split_at(SIGNIFICANT_DIGITS);
    let mut digits = kept.to_vec();
    let inexact = rest.iter().any(|&d| d != 0);
    let away = matches!((neg, dir), (false, Direction::Up) | (true, Direction::Down));
    if inexact && away {
        let mut i = digits.len();
        loop {
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
                if i == 0 {
                    digits.insert(0, 1);
                    digits.pop();
                    exp += 1;
                    break;
                }
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let text: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
    format!(
        "{}{}.{}e{}",
        if neg { "-" } else { "" },
        &text[..1],
        &text[1..],
        exp
    )
}

/// `[lo,hi]` with outward-rounded decimal endpoints, or `[empty]`.
pub fn format_interval_decimal(x: &Interval) -> String {
    match x.bounds() {
        None => "[empty]".to_string(),
        Some((a, b)) => format!(
            "[{},{}]",
            format_directed(a, Direction::Down),
            format_directed(b, Direction::Up)
        ),
    }
}
