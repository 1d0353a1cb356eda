//! Hulls of the basic operations from exact extended-real arithmetic.
//!
//! This is deliberately a different formulation from the kernel: sums and
//! products are exact dyadics, quotients and roots are rounded once to a
//! grid finer than the target format in the outward direction, and division
//! splits the divisor into its negative and positive parts.

use crate::format::Format;
use crate::function::FunctionId;
use crate::hp::{Dyadic, Ext};
use crate::rounding::Direction::{self, Down, Up};

pub(crate) type Hull = Option<(Ext, Ext)>;

fn min(v: impl IntoIterator<Item = Ext>) -> Ext {
    v.into_iter().min().expect("nonempty")
}

fn max(v: impl IntoIterator<Item = Ext>) -> Ext {
    v.into_iter().max().expect("nonempty")
}

fn products(x: &(Ext, Ext), y: &(Ext, Ext)) -> [Ext; 4] {
    [x.0.mul(&y.0), x.0.mul(&y.1), x.1.mul(&y.0), x.1.mul(&y.1)]
}

/// Exact hull of `op` over nonempty arguments, with quotient and root
/// endpoints already rounded outward on a `prec`-bit grid.
pub(crate) fn hull(op: FunctionId, args: &[(Ext, Ext)], prec: u64) -> Hull {
    let x = &args[0];
    match op {
        FunctionId::Neg => Some((-&x.1, -&x.0)),
        FunctionId::Add => {
            let y = &args[1];
            Some((x.0.add(&y.0), x.1.add(&y.1)))
        }
        FunctionId::Sub => {
            let y = &args[1];
            Some((x.0.add(&-&y.1), x.1.add(&-&y.0)))
        }
        FunctionId::Mul => {
            let p = products(x, &args[1]);
            Some((min(p.clone()), max(p)))
        }
        FunctionId::Sqr => {
            let a2 = x.0.mul(&x.0);
            let b2 = x.1.mul(&x.1);
            let hi = a2.clone().max(b2.clone());
            let lo = if x.0.signum().is_le() && x.1.signum().is_ge() {
                Ext::zero()
            } else {
                a2.min(b2)
            };
            Some((lo, hi))
        }
        FunctionId::Fma => {
            let p = products(x, &args[1]);
            let z = &args[2];
            Some((min(p.clone()).add(&z.0), max(p).add(&z.1)))
        }
        FunctionId::Div => quotient(x, &args[1], prec),
        FunctionId::Recip => {
            let one = (Ext::Finite(Dyadic::one()), Ext::Finite(Dyadic::one()));
            quotient(&one, x, prec)
        }
        FunctionId::Sqrt => {
            if x.1.signum().is_lt() {
                return None;
            }
            let lo = if x.0.signum().is_lt() { Ext::zero() } else { x.0.clone() };
            Some((root(&lo, prec, Down), root(&x.1, prec, Up)))
        }
        _ => unreachable!("not a basic operation"),
    }
}

fn root(v: &Ext, prec: u64, dir: Direction) -> Ext {
    match v {
        Ext::Finite(d) => Ext::Finite(d.sqrt(prec, dir)),
        other => other.clone(),
    }
}

/// `a / b` where `b` is a nonzero value or zero approached from the side
/// `side` (+1 or -1); `None` for ∞/∞, whose limit never bounds the range.
fn corner(a: &Ext, b: &Ext, side: i8, prec: u64, dir: Direction) -> Option<Ext> {
    let sa = a.signum() as i8;
    let sb = if b.is_zero() { side } else { b.signum() as i8 };
    let inf = |s: i8| if s > 0 { Ext::PosInf } else { Ext::NegInf };
    match (a, b) {
        (Ext::Finite(_), _) if a.is_zero() => Some(Ext::zero()),
        (Ext::Finite(_), Ext::Finite(db)) if db.is_zero() => Some(inf(sa * sb)),
        (Ext::Finite(da), Ext::Finite(db)) => Some(Ext::Finite(da.div(db, prec, dir))),
        (Ext::Finite(_), _) => Some(Ext::zero()),
        (_, Ext::Finite(_)) => Some(inf(sa * sb)),
        _ => None,
    }
}

fn quotient(x: &(Ext, Ext), y: &(Ext, Ext), prec: u64) -> Hull {
    let mut pieces = Vec::new();
    if y.0.signum().is_lt() {
        pieces.push(((y.0.clone(), y.1.clone().min(Ext::zero())), -1i8));
    }
    if y.1.signum().is_gt() {
        pieces.push(((y.0.clone().max(Ext::zero()), y.1.clone()), 1i8));
    }
    let mut out: Hull = None;
    for ((c, d), side) in pieces {
        let pairs = [(&x.0, &c), (&x.0, &d), (&x.1, &c), (&x.1, &d)];
        let lo = min(pairs.iter().filter_map(|(a, b)| corner(a, b, side, prec, Down)));
        let hi = max(pairs.iter().filter_map(|(a, b)| corner(a, b, side, prec, Up)));
        out = Some(match out {
            None => (lo, hi),
            Some((l, h)) => (l.min(lo), h.max(hi)),
        });
    }
    out
}

/// Rounds an exact hull outward into `format`.
pub(crate) fn round_hull(h: &(Ext, Ext), format: Format) -> (f64, f64) {
    (
        crate::rounding::round_to_format(&h.0, format, Down),
        crate::rounding::round_to_format(&h.1, format, Up),
    )
}
