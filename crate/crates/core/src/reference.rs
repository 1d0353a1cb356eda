//! Exact rational reference for the basic operations.
//!
//! Endpoint images are computed in `BigRational` and rounded outward by
//! searching neighbouring format values with exact comparisons. Nothing
//! here goes through the dyadic oracle or the kernel.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Pow, Signed, ToPrimitive, Zero};

use crate::format::Format;
use crate::function::FunctionId;
use crate::interval::Interval;

/// An extended rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum XR {
    NegInf,
    Fin(BigRational),
    PosInf,
}

impl XR {
    fn from_f64(x: f64) -> XR {
        if x == f64::INFINITY {
            XR::PosInf
        } else if x == f64::NEG_INFINITY {
            XR::NegInf
        } else {
            XR::Fin(BigRational::from_f64(x).expect("finite"))
        }
    }

    fn sign(&self) -> Ordering {
        match self {
            XR::NegInf => Ordering::Less,
            XR::PosInf => Ordering::Greater,
            XR::Fin(r) => r.cmp(&BigRational::zero()),
        }
    }

    fn neg(&self) -> XR {
        match self {
            XR::NegInf => XR::PosInf,
            XR::PosInf => XR::NegInf,
            XR::Fin(r) => XR::Fin(-r),
        }
    }

    /// Sum; callers never add opposite infinities.
    fn add(&self, o: &XR) -> XR {
        match (self, o) {
            (XR::Fin(a), XR::Fin(b)) => XR::Fin(a + b),
            (XR::NegInf, _) | (_, XR::NegInf) => XR::NegInf,
            _ => XR::PosInf,
        }
    }

    /// Product with `0 · ∞ = 0`.
    fn mul(&self, o: &XR) -> XR {
        match (self, o) {
            (XR::Fin(a), XR::Fin(b)) => XR::Fin(a * b),
            _ if self.sign().is_eq() || o.sign().is_eq() => XR::Fin(BigRational::zero()),
            _ => signed_inf(self.sign(), o.sign()),
        }
    }
}

fn signed_inf(a: Ordering, b: Ordering) -> XR {
    if a == b {
        XR::PosInf
    } else {
        XR::NegInf
    }
}

fn min_max(v: Vec<XR>) -> (XR, XR) {
    let lo = v.iter().min().expect("nonempty").clone();
    let hi = v.iter().max().expect("nonempty").clone();
    (lo, hi)
}

/// `x / p` over a divisor piece whose interior has one sign; a zero
/// endpoint of the piece stands for the limit toward zero.
fn div_piece(x: (&XR, &XR), p: (&XR, &XR)) -> (XR, XR) {
    let piece_sign = if p.0.sign().is_eq() { p.1.sign() } else { p.0.sign() };
    let mut v = Vec::new();
    for n in [x.0, x.1] {
        for d in [p.0, p.1] {
            match (n, d) {
                (XR::Fin(a), XR::Fin(b)) if !b.is_zero() => v.push(XR::Fin(a / b)),
                (XR::Fin(a), XR::Fin(_)) if a.is_zero() => v.push(XR::Fin(BigRational::zero())),
                (_, XR::Fin(b)) if b.is_zero() => v.push(signed_inf(n.sign(), piece_sign)),
                (_, XR::Fin(_)) => v.push(signed_inf(n.sign(), d.sign())),
                (XR::Fin(_), _) => v.push(XR::Fin(BigRational::zero())),
                // ∞/∞ has no limit along the corner; interior points cover it.
                _ => {}
            }
        }
    }
    min_max(v)
}

fn div(x: (&XR, &XR), y: (&XR, &XR)) -> Option<(XR, XR)> {
    let zero = XR::Fin(BigRational::zero());
    let mut parts = Vec::new();
    if *y.0 < zero {
        let hi = if *y.1 < zero { y.1.clone() } else { zero.clone() };
        parts.push(div_piece(x, (y.0, &hi)));
    }
    if *y.1 > zero {
        let lo = if *y.0 > zero { y.0.clone() } else { zero.clone() };
        parts.push(div_piece(x, (&lo, y.1)));
    }
    let lo = parts.iter().map(|p| p.0.clone()).min()?;
    let hi = parts.iter().map(|p| p.1.clone()).max()?;
    Some((lo, hi))
}

fn products(x: (&XR, &XR), y: (&XR, &XR)) -> (XR, XR) {
    min_max(vec![x.0.mul(y.0), x.0.mul(y.1), x.1.mul(y.0), x.1.mul(y.1)])
}

fn up(v: f64, format: Format) -> f64 {
    match format {
        Format::Binary64 => v.next_up(),
        Format::Binary32 => (v as f32).next_up() as f64,
    }
}

fn down(v: f64, format: Format) -> f64 {
    match format {
        Format::Binary64 => v.next_down(),
        Format::Binary32 => (v as f32).next_down() as f64,
    }
}

fn cmp_f64(r: &BigRational, v: f64) -> Ordering {
    match XR::from_f64(v) {
        XR::Fin(q) => r.cmp(&q),
        XR::PosInf => Ordering::Less,
        XR::NegInf => Ordering::Greater,
    }
}

/// Greatest format value `≤ r` (`lower`) or least format value `≥ r`.
fn round_rational(r: &BigRational, format: Format, lower: bool) -> f64 {
    let guess = r.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
    let mut c = match format {
        Format::Binary64 => guess,
        Format::Binary32 => guess as f32 as f64,
    };
    if lower {
        while cmp_f64(r, c) == Ordering::Less {
            c = down(c, format);
        }
        while c < f64::INFINITY && cmp_f64(r, up(c, format)) != Ordering::Less {
            c = up(c, format);
        }
        if c == f64::INFINITY {
            c = format.max_finite();
        }
    } else {
        while cmp_f64(r, c) == Ordering::Greater {
            c = up(c, format);
        }
        while c > f64::NEG_INFINITY && cmp_f64(r, down(c, format)) != Ordering::Greater {
            c = down(c, format);
        }
        if c == f64::NEG_INFINITY {
            c = -format.max_finite();
        }
    }
    c + 0.0
}

/// Square root of a nonnegative rational rounded down or up.
fn round_sqrt(r: &BigRational, format: Format, lower: bool) -> f64 {
    let sq = |c: f64| BigRational::from_f64(c).expect("finite").pow(2);
    let mut c = r.to_f64().expect("finite").sqrt();
    if format == Format::Binary32 {
        c = c as f32 as f64;
    }
    if lower {
        while sq(c) > *r {
            c = down(c, format);
        }
        while sq(up(c, format)) <= *r {
            c = up(c, format);
        }
    } else {
        while sq(c) < *r {
            c = up(c, format);
        }
        while c > 0.0 && sq(down(c, format)) >= *r {
            c = down(c, format);
        }
    }
    c + 0.0
}

fn round_out(lo: &XR, hi: &XR, format: Format) -> Interval {
    let l = match lo {
        XR::NegInf => f64::NEG_INFINITY,
        XR::PosInf => format.max_finite(),
        XR::Fin(r) => round_rational(r, format, true),
    };
    let h = match hi {
        XR::PosInf => f64::INFINITY,
        XR::NegInf => -format.max_finite(),
        XR::Fin(r) => round_rational(r, format, false),
    };
    Interval::new(l, h, format).expect("outward rounded hull")
}

/// Tightest hull of a basic operation, by exact rational arithmetic.
/// Returns `None` for elementary functions.
pub fn hull(f: FunctionId, args: &[Interval]) -> Option<Interval> {
    let format = args.first()?.format();
    let Some(b): Option<Vec<(f64, f64)>> = args.iter().map(|a| a.bounds()).collect() else {
        return Some(Interval::empty(format));
    };
    let x: Vec<(XR, XR)> = b.iter().map(|&(a, b)| (XR::from_f64(a), XR::from_f64(b))).collect();
    let p = |i: usize| (&x[i].0, &x[i].1);
    let zero = XR::Fin(BigRational::zero());
    let one = XR::Fin(BigRational::from_integer(BigInt::from(1)));
    let (lo, hi) = match f {
        FunctionId::Neg => (x[0].1.neg(), x[0].0.neg()),
        FunctionId::Add => (x[0].0.add(&x[1].0), x[0].1.add(&x[1].1)),
        FunctionId::Sub => (x[0].0.add(&x[1].1.neg()), x[0].1.add(&x[1].0.neg())),
        FunctionId::Mul => products(p(0), p(1)),
        FunctionId::Div => match div(p(0), p(1)) {
            Some(h) => h,
            None => return Some(Interval::empty(format)),
        },
        FunctionId::Recip => match div((&one, &one), p(0)) {
            Some(h) => h,
            None => return Some(Interval::empty(format)),
        },
        FunctionId::Sqr => {
            let (a, b) = (&x[0].0, &x[0].1);
            let (sa, sb) = (a.mul(a), b.mul(b));
            if *a <= zero && *b >= zero {
                (zero, sa.max(sb))
            } else {
                min_max(vec![sa, sb])
            }
        }
        FunctionId::Fma => {
            let (plo, phi) = products(p(0), p(1));
            (plo.add(&x[2].0), phi.add(&x[2].1))
        }
        FunctionId::Sqrt => {
            let (a, b) = (&x[0].0, &x[0].1);
            if *b < zero {
                return Some(Interval::empty(format));
            }
            let a = if *a < zero { &zero } else { a };
            let l = match a {
                XR::Fin(r) => round_sqrt(r, format, true),
                _ => unreachable!("lower endpoint is finite"),
            };
            let h = match b {
                XR::Fin(r) => round_sqrt(r, format, false),
                _ => f64::INFINITY,
            };
            return Some(Interval::new(l, h, format).expect("sqrt hull"));
        }
        _ => return None,
    };
    Some(round_out(&lo, &hi, format))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B64: Format = Format::Binary64;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b, B64).unwrap()
    }

    #[test]
    fn rounding_brackets_thirds() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let lo = round_rational(&third, B64, true);
        let hi = round_rational(&third, B64, false);
        assert_eq!(hi, lo.next_up());
        assert!(lo < 1.0 / 3.0 || hi > 1.0 / 3.0);
        let big = BigRational::from_f64(f64::MAX).unwrap() * BigInt::from(2);
        assert_eq!(round_rational(&big, B64, true), f64::MAX);
        assert_eq!(round_rational(&big, B64, false), f64::INFINITY);
    }

    #[test]
    fn textbook_cases() {
        assert_eq!(hull(FunctionId::Div, &[iv(1.0, 2.0), iv(0.0, 0.0)]), Some(Interval::empty(B64)));
        assert_eq!(hull(FunctionId::Div, &[iv(1.0, 2.0), iv(0.0, 4.0)]), Some(iv(0.25, f64::INFINITY)));
        assert_eq!(
            hull(FunctionId::Div, &[iv(1.0, 2.0), iv(-1.0, 4.0)]),
            Some(Interval::entire(B64))
        );
        assert_eq!(hull(FunctionId::Div, &[iv(0.0, 0.0), iv(-1.0, 4.0)]), Some(iv(0.0, 0.0)));
        assert_eq!(
            hull(FunctionId::Mul, &[iv(0.0, 0.0), Interval::entire(B64)]),
            Some(iv(0.0, 0.0))
        );
        assert_eq!(hull(FunctionId::Sqr, &[iv(-3.0, 2.0)]), Some(iv(0.0, 9.0)));
        assert_eq!(hull(FunctionId::Sqrt, &[iv(-3.0, 4.0)]), Some(iv(0.0, 2.0)));
        let s = hull(FunctionId::Sqrt, &[iv(2.0, 2.0)]).unwrap();
        assert_eq!(s.sup(), Some(s.inf().unwrap().next_up()));
        assert_eq!(hull(FunctionId::Recip, &[iv(-INF, -2.0)]), Some(iv(-0.5, 0.0)));
    }

    const INF: f64 = f64::INFINITY;
}
