//! The interval kernel: tightest basic arithmetic computed natively in each
//! format, and elementary functions evaluated through the oracle.

mod directed;

use crate::format::Format;
use crate::function::FunctionId;
use crate::interval::Interval;
use crate::oracle::{self, OracleConfig, OracleError};
use crate::rounding::Direction::{Down, Up};

use directed::Ieee;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("{f} takes {expected} argument(s), got {got}")]
    Arity {
        f: FunctionId,
        expected: usize,
        got: usize,
    },
    #[error("arguments mix formats {0} and {1}")]
    FormatMismatch(Format, Format),
    #[error("{0} is not a basic arithmetic operation")]
    NotBasic(FunctionId),
    #[error("{0} is not an elementary function")]
    NotElementary(FunctionId),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

type Bounds<T> = Option<(T, T)>;

fn check_args(f: FunctionId, args: &[Interval]) -> Result<Format, KernelError> {
    if args.len() != f.arity() {
        return Err(KernelError::Arity {
            f,
            expected: f.arity(),
            got: args.len(),
        });
    }
    let format = args[0].format();
    if let Some(other) = args.iter().find(|a| a.format() != format) {
        return Err(KernelError::FormatMismatch(format, other.format()));
    }
    Ok(format)
}

/// Evaluates any supported function on intervals of one format.
pub fn evaluate(f: FunctionId, args: &[Interval]) -> Result<Interval, KernelError> {
    if f.is_elementary() {
        check_args(f, args)?;
        elementary(f, &args[0])
    } else {
        basic_arith(f, args)
    }
}

/// Tightest result of `neg, add, sub, mul, div, recip, sqrt, sqr, fma`.
pub fn basic_arith(op: FunctionId, args: &[Interval]) -> Result<Interval, KernelError> {
    if op.is_elementary() {
        return Err(KernelError::NotBasic(op));
    }
    let format = check_args(op, args)?;
    let out = match format {
        Format::Binary64 => {
            let b: Vec<Bounds<f64>> = args.iter().map(|a| a.bounds()).collect();
            arith::<f64>(op, &b)
        }
        Format::Binary32 => {
            let b: Vec<Bounds<f32>> = args
                .iter()
                .map(|a| a.bounds().map(|(x, y)| (x as f32, y as f32)))
                .collect();
            arith::<f32>(op, &b).map(|(x, y)| (x as f64, y as f64))
        }
    };
    Ok(match out {
        None => Interval::empty(format),
        Some((lo, hi)) => Interval::from_checked(lo, hi, format),
    })
}

/// Tightest enclosure of `cbrt, exp, sin, atanh` from the oracle.
pub fn elementary(f: FunctionId, x: &Interval) -> Result<Interval, KernelError> {
    elementary_with(f, x, &OracleConfig::default())
}

pub fn elementary_with(
    f: FunctionId,
    x: &Interval,
    cfg: &OracleConfig,
) -> Result<Interval, KernelError> {
    if !f.is_elementary() {
        return Err(KernelError::NotElementary(f));
    }
    Ok(oracle::tightest_hull(f, &[*x], cfg)?)
}

fn arith<T: Ieee>(op: FunctionId, args: &[Bounds<T>]) -> Bounds<T> {
    let mut xs = [(T::ZERO, T::ZERO); 3];
    for (slot, a) in xs.iter_mut().zip(args) {
        *slot = (*a)?;
    }
    let [x, y, z] = xs;
    match op {
        FunctionId::Neg => Some((-x.1, -x.0)),
        FunctionId::Add => Some(add(x, y)),
        FunctionId::Sub => Some(add(x, (-y.1, -y.0))),
        FunctionId::Mul => Some(mul(x, y)),
        FunctionId::Div => div(x, y),
        FunctionId::Recip => div((T::ONE, T::ONE), x),
        FunctionId::Sqrt => sqrt(x),
        FunctionId::Sqr => Some(sqr(x)),
        FunctionId::Fma => Some(fma(x, y, z)),
        _ => unreachable!("elementary functions are rejected earlier"),
    }
}

fn add<T: Ieee>(x: (T, T), y: (T, T)) -> (T, T) {
    (directed::add(x.0, y.0, Down), directed::add(x.1, y.1, Up))
}

fn corners<T: Ieee>(x: (T, T), y: (T, T)) -> [(T, T); 4] {
    [(x.0, y.0), (x.0, y.1), (x.1, y.0), (x.1, y.1)]
}

fn min<T: Ieee>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::INFINITY, |m, v| if v < m { v } else { m })
}

fn max<T: Ieee>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::NEG_INFINITY, |m, v| if v > m { v } else { m })
}

fn mul<T: Ieee>(x: (T, T), y: (T, T)) -> (T, T) {
    let c = corners(x, y);
    (
        min(c.iter().map(|&(a, b)| directed::mul(a, b, Down))),
        max(c.iter().map(|&(a, b)| directed::mul(a, b, Up))),
    )
}

fn div<T: Ieee>(x: (T, T), y: (T, T)) -> Bounds<T> {
    let (a, b) = x;
    let (c, d) = y;
    let zero = T::ZERO;
    if c == zero && d == zero {
        return None;
    }
    if a == zero && b == zero {
        return Some((zero, zero));
    }
    let entire = (T::NEG_INFINITY, T::INFINITY);
    if c > zero || d < zero {
        // ∞/∞ corners never bound the range once the other corners are in.
        let finite = |&&(p, q): &&(T, T)| p.is_finite() || q.is_finite();
        let cs = corners(x, y);
        let lo = min(cs.iter().filter(finite).map(|&(p, q)| directed::div(p, q, Down)));
        let hi = max(cs.iter().filter(finite).map(|&(p, q)| directed::div(p, q, Up)));
        return Some((lo, hi));
    }
    if a < zero && zero < b {
        return Some(entire);
    }
    if a == zero || b == zero {
        // x lies on one side of zero and touches it.
        let same_side = (a == zero) == (c == zero);
        return Some(match (c == zero, d == zero) {
            (false, false) => entire,
            _ if same_side => (zero, T::INFINITY),
            _ => (T::NEG_INFINITY, zero),
        });
    }
    Some(match (b < zero, c == zero, d == zero) {
        (true, false, true) => (directed::div(b, c, Down), T::INFINITY),
        (true, true, false) => (T::NEG_INFINITY, directed::div(b, d, Up)),
        (false, false, true) => (T::NEG_INFINITY, directed::div(a, c, Up)),
        (false, true, false) => (directed::div(a, d, Down), T::INFINITY),
        _ => entire,
    })
}

fn sqrt<T: Ieee>(x: (T, T)) -> Bounds<T> {
    if x.1 < T::ZERO {
        return None;
    }
    let lo = if x.0 < T::ZERO { T::ZERO } else { x.0 };
    Some((directed::sqrt(lo, Down), directed::sqrt(x.1, Up)))
}

fn sqr<T: Ieee>(x: (T, T)) -> (T, T) {
    let (a, b) = x;
    if a >= T::ZERO {
        (directed::mul(a, a, Down), directed::mul(b, b, Up))
    } else if b <= T::ZERO {
        (directed::mul(b, b, Down), directed::mul(a, a, Up))
    } else {
        let hi = directed::mul(a, a, Up);
        let hi2 = directed::mul(b, b, Up);
        (T::ZERO, if hi > hi2 { hi } else { hi2 })
    }
}

/// `xy + z` rounded once per endpoint, with the corner convention `0 · ∞ = 0`.
fn fma<T: Ieee>(x: (T, T), y: (T, T), z: (T, T)) -> (T, T) {
    let corner = |a: T, b: T, c: T, dir| {
        if a == T::ZERO || b == T::ZERO {
            c
        } else if !a.is_finite() || !b.is_finite() {
            a * b
        } else {
            directed::fma(a, b, c, dir)
        }
    };
    let cs = corners(x, y);
    let lo = if z.0 == T::NEG_INFINITY {
        T::NEG_INFINITY
    } else {
        min(cs.iter().map(|&(a, b)| corner(a, b, z.0, Down)))
    };
    let hi = if z.1 == T::INFINITY {
        T::INFINITY
    } else {
        max(cs.iter().map(|&(a, b)| corner(a, b, z.1, Up)))
    };
    (lo, hi)
}
