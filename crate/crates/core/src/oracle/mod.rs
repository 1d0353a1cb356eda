//! Arbitrary-precision reference evaluation.
//!
//! Each endpoint of a tightest hull is found with an adaptive loop: the
//! exact image of the endpoint is bracketed at working precision `q`, and
//! when both ends of the bracket round to the same format value in the
//! endpoint's outward direction that value is the answer; otherwise `q`
//! grows and the bracket is recomputed.

mod consts;
mod exact;
mod series;

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::format::Format;
use crate::function::FunctionId;
use crate::hp::{Dyadic, Enclosure, Ext};
use crate::interval::Interval;
use crate::rounding::{self, round_to_format, Direction};

/// Working-precision schedule of the adaptive loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Starting precision in bits; `None` means `2p + 10` for the format.
    pub q_start: Option<u64>,
    pub q_growth: u64,
    pub q_max: u64,
    /// Extra bits of π used when reducing sine arguments.
    pub pi_guard: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            q_start: None,
            q_growth: 2,
            q_max: 4096,
            pi_guard: 32,
        }
    }
}

impl OracleConfig {
    pub fn start(&self, format: Format) -> u64 {
        self.q_start
            .unwrap_or(2 * format.precision() as u64 + 10)
    }

    pub fn validate(&self, format: Format) -> Result<(), OracleError> {
        let q0 = self.start(format);
        let bad = |why: &str| Err(OracleError::Config(why.to_string()));
        if q0 <= format.precision() as u64 {
            return bad("q_start must exceed the format precision");
        }
        if self.q_growth < 2 {
            return bad("q_growth must be at least 2");
        }
        if self.q_max < q0 {
            return bad("q_max must be at least q_start");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("precision cap of {q_max} bits reached for {f} at {at}")]
    PrecisionExhausted {
        f: FunctionId,
        q_max: u64,
        at: String,
    },
    #[error("{f} is undefined at {at}")]
    DomainViolation { f: FunctionId, at: String },
    #[error("invalid oracle configuration: {0}")]
    Config(String),
    #[error("{f} takes {expected} argument(s), got {got}")]
    Arity {
        f: FunctionId,
        expected: usize,
        got: usize,
    },
    #[error("arguments mix formats {0} and {1}")]
    FormatMismatch(Format, Format),
}

/// Bracket `lo ≤ f(x) ≤ hi` computed at precision `q`. When `exact` is
/// set the value is known to equal `lo` (and `hi`); otherwise it is known
/// to differ from both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPBound {
    pub lo: Ext,
    pub hi: Ext,
    pub q: u64,
    pub exact: bool,
}

impl HPBound {
    fn exact(v: Ext, q: u64) -> Self {
        HPBound {
            lo: v.clone(),
            hi: v,
            q,
            exact: true,
        }
    }

    fn from_enclosure(e: Enclosure, q: u64, exact: bool) -> Self {
        let e = e.round_out(q);
        HPBound {
            lo: Ext::Finite(e.lo),
            hi: Ext::Finite(e.hi),
            q,
            exact,
        }
    }

    /// The format value the bracket certifies for direction `dir`, if the
    /// bracket is narrow enough to decide it.
    pub fn round(&self, format: Format, dir: Direction) -> Option<f64> {
        let (a, b) = match dir {
            Direction::Down => (
                round_to_format(&self.lo, format, dir),
                self.round_beyond(&self.hi, format, dir),
            ),
            Direction::Up => (
                self.round_beyond(&self.lo, format, dir),
                round_to_format(&self.hi, format, dir),
            ),
        };
        (a == b).then_some(if a == 0.0 { 0.0 } else { a })
    }

    /// Rounds a bracket end that the true value lies strictly inside of.
    fn round_beyond(&self, v: &Ext, format: Format, dir: Direction) -> f64 {
        let r = round_to_format(v, format, dir);
        if !self.exact && rounding::cmp_ext_f64(v, r).is_eq() {
            rounding::step(r, format, dir)
        } else {
            r
        }
    }
}

/// Brackets `f` at the point `x` (one format value per argument, infinities
/// allowed where `f` has a limit there) at working precision `q`.
pub fn point_enclosure(
    f: FunctionId,
    x: &[f64],
    q: u64,
    cfg: &OracleConfig,
) -> Result<HPBound, OracleError> {
    if x.len() != f.arity() {
        return Err(OracleError::Arity {
            f,
            expected: f.arity(),
            got: x.len(),
        });
    }
    let undefined = || OracleError::DomainViolation {
        f,
        at: format!("{x:?}"),
    };
    if x.iter().any(|v| v.is_nan()) {
        return Err(undefined());
    }
    if !f.is_elementary() {
        return basic_point(f, x, q).ok_or_else(undefined);
    }
    let v = x[0];
    let d = Dyadic::from_f64(v);
    let w = q + 8;
    Ok(match f {
        FunctionId::Exp => match d {
            None if v > 0.0 => HPBound::exact(Ext::PosInf, q),
            None => HPBound::exact(Ext::zero(), q),
            Some(d) if d.is_zero() => HPBound::exact(Ext::Finite(Dyadic::one()), q),
            Some(d) if d > Dyadic::pow2(20) => HPBound {
                lo: Ext::Finite(Dyadic::pow2(1_000_000)),
                hi: Ext::PosInf,
                q,
                exact: false,
            },
            Some(d) if d < -Dyadic::pow2(20) => HPBound {
                lo: Ext::zero(),
                hi: Ext::Finite(Dyadic::pow2(-1_000_000)),
                q,
                exact: false,
            },
            Some(d) => HPBound::from_enclosure(series::exp(&d, w), q, false),
        },
        FunctionId::Cbrt => match d {
            None => HPBound::exact(Ext::from_f64(v), q),
            Some(d) => {
                let (e, exact) = series::cbrt(&d, w);
                if exact {
                    HPBound::exact(Ext::Finite(e.lo), q)
                } else {
                    HPBound::from_enclosure(e, q, false)
                }
            }
        },
        FunctionId::Sin => match d {
            None => return Err(undefined()),
            Some(d) if d.is_zero() => HPBound::exact(Ext::zero(), q),
            Some(d) => {
                HPBound::from_enclosure(series::sin(&d, w, cfg.pi_guard), q, false)
            }
        },
        FunctionId::Atanh => {
            if v.abs() > 1.0 {
                return Err(undefined());
            }
            if v == 1.0 {
                HPBound::exact(Ext::PosInf, q)
            } else if v == -1.0 {
                HPBound::exact(Ext::NegInf, q)
            } else if v == 0.0 {
                HPBound::exact(Ext::zero(), q)
            } else {
                let d = d.expect("finite");
                HPBound::from_enclosure(series::atanh(&d, w), q, false)
            }
        }
        _ => unreachable!(),
    })
}

fn basic_point(f: FunctionId, x: &[f64], q: u64) -> Option<HPBound> {
    let e: Vec<Ext> = x.iter().map(|&v| Ext::from_f64(v)).collect();
    let finite = |i: usize| e[i].finite();
    let has_inf_diff = |a: &Ext, b: &Ext| {
        matches!((a, b), (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf))
    };
    let zero_times_inf = |a: &Ext, b: &Ext| {
        (a.is_zero() && b.finite().is_none()) || (b.is_zero() && a.finite().is_none())
    };
    let v = match f {
        FunctionId::Neg => -&e[0],
        FunctionId::Add if !has_inf_diff(&e[0], &-&e[1]) => e[0].add(&e[1]),
        FunctionId::Sub if !has_inf_diff(&e[0], &e[1]) => e[0].add(&-&e[1]),
        FunctionId::Mul if !zero_times_inf(&e[0], &e[1]) => e[0].mul(&e[1]),
        FunctionId::Sqr => e[0].mul(&e[0]),
        FunctionId::Fma if !zero_times_inf(&e[0], &e[1]) => {
            let p = e[0].mul(&e[1]);
            if has_inf_diff(&p, &-&e[2]) {
                return None;
            }
            p.add(&e[2])
        }
        FunctionId::Div | FunctionId::Recip => {
            let (a, b) = if f == FunctionId::Div {
                (e[0].clone(), e[1].clone())
            } else {
                (Ext::Finite(Dyadic::one()), e[0].clone())
            };
            if b.is_zero() || (a.finite().is_none() && b.finite().is_none()) {
                return None;
            }
            match (a.finite(), b.finite()) {
                (Some(da), Some(db)) => {
                    let lo = da.div(db, q, Direction::Down);
                    let hi = da.div(db, q, Direction::Up);
                    let exact = lo == hi;
                    return Some(HPBound {
                        lo: Ext::Finite(lo),
                        hi: Ext::Finite(hi),
                        q,
                        exact,
                    });
                }
                (Some(_), None) => Ext::zero(),
                _ => {
                    if a.signum() == b.signum() {
                        Ext::PosInf
                    } else {
                        Ext::NegInf
                    }
                }
            }
        }
        FunctionId::Sqrt => {
            if e[0].signum().is_lt() {
                return None;
            }
            match finite(0) {
                None => Ext::PosInf,
                Some(d) => {
                    let lo = d.sqrt(q, Direction::Down);
                    let hi = d.sqrt(q, Direction::Up);
                    let exact = lo == hi;
                    return Some(HPBound {
                        lo: Ext::Finite(lo),
                        hi: Ext::Finite(hi),
                        q,
                        exact,
                    });
                }
            }
        }
        _ => return None,
    };
    Some(HPBound::exact(v, q))
}

static CERTIFIED: AtomicU64 = AtomicU64::new(0);
static ESCALATIONS: AtomicU64 = AtomicU64::new(0);
static MAX_Q: AtomicU64 = AtomicU64::new(0);

/// Process-wide counters of the adaptive loop, for reporting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrecisionStats {
    /// Endpoints certified.
    pub certified: u64,
    /// Precision increases beyond the starting precision.
    pub escalations: u64,
    /// Largest precision at which an endpoint was certified.
    pub max_q: u64,
}

pub fn precision_stats() -> PrecisionStats {
    PrecisionStats {
        certified: CERTIFIED.load(AtomicOrdering::Relaxed),
        escalations: ESCALATIONS.load(AtomicOrdering::Relaxed),
        max_q: MAX_Q.load(AtomicOrdering::Relaxed),
    }
}

pub fn reset_precision_stats() {
    CERTIFIED.store(0, AtomicOrdering::Relaxed);
    ESCALATIONS.store(0, AtomicOrdering::Relaxed);
    MAX_Q.store(0, AtomicOrdering::Relaxed);
}

/// Runs the adaptive loop for one endpoint.
fn certify(
    f: FunctionId,
    x: &[f64],
    format: Format,
    dir: Direction,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    let mut q = cfg.start(format);
    loop {
        let b = point_enclosure(f, x, q, cfg)?;
        if let Some(v) = b.round(format, dir) {
            CERTIFIED.fetch_add(1, AtomicOrdering::Relaxed);
            MAX_Q.fetch_max(q, AtomicOrdering::Relaxed);
            return Ok(v);
        }
        if q >= cfg.q_max {
            return Err(OracleError::PrecisionExhausted {
                f,
                q_max: cfg.q_max,
                at: format!("{x:?}"),
            });
        }
        ESCALATIONS.fetch_add(1, AtomicOrdering::Relaxed);
        q = q.saturating_mul(cfg.q_growth).min(cfg.q_max);
    }
}

fn check_args(f: FunctionId, args: &[Interval]) -> Result<Format, OracleError> {
    if args.len() != f.arity() {
        return Err(OracleError::Arity {
            f,
            expected: f.arity(),
            got: args.len(),
        });
    }
    let format = args[0].format();
    if let Some(other) = args.iter().find(|a| a.format() != format) {
        return Err(OracleError::FormatMismatch(format, other.format()));
    }
    Ok(format)
}

/// The tightest interval of `format` enclosing the range of `f` over the
/// arguments intersected with its natural domain.
pub fn tightest_hull(
    f: FunctionId,
    args: &[Interval],
    cfg: &OracleConfig,
) -> Result<Interval, OracleError> {
    let format = check_args(f, args)?;
    cfg.validate(format)?;
    let bounds: Option<Vec<(f64, f64)>> = args.iter().map(|a| a.bounds()).collect();
    let Some(bounds) = bounds else {
        return Ok(Interval::empty(format));
    };
    let out = if f.is_elementary() {
        elementary_hull(f, bounds[0], format, cfg)?
    } else {
        let ext: Vec<(Ext, Ext)> = bounds
            .iter()
            .map(|&(a, b)| (Ext::from_f64(a), Ext::from_f64(b)))
            .collect();
        let prec = format.precision() as u64 + 2;
        exact::hull(f, &ext, prec).map(|h| exact::round_hull(&h, format))
    };
    Ok(match out {
        None => Interval::empty(format),
        Some((lo, hi)) => Interval::from_checked(lo, hi, format),
    })
}

fn elementary_hull(
    f: FunctionId,
    (a, b): (f64, f64),
    format: Format,
    cfg: &OracleConfig,
) -> Result<Option<(f64, f64)>, OracleError> {
    let down = |v: f64| certify(f, &[v], format, Direction::Down, cfg);
    let up = |v: f64| certify(f, &[v], format, Direction::Up, cfg);
    Ok(Some(match f {
        FunctionId::Exp | FunctionId::Cbrt => (down(a)?, up(b)?),
        FunctionId::Atanh => {
            if a >= 1.0 || b <= -1.0 {
                return Ok(None);
            }
            (down(a.max(-1.0))?, up(b.min(1.0))?)
        }
        FunctionId::Sin => {
            if !a.is_finite() || !b.is_finite() {
                return Ok(Some((-1.0, 1.0)));
            }
            let x = Interval::from_checked(a, b, format);
            let scan = sin_extrema_scan(&x, cfg)?;
            let lo = if scan.contains_min {
                -1.0
            } else {
                down(a)?.min(down(b)?)
            };
            let hi = if scan.contains_max {
                1.0
            } else {
                up(a)?.max(up(b)?)
            };
            (lo, hi)
        }
        _ => unreachable!(),
    }))
}

/// Whether sine is rising or falling on a piece between critical points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Critical points of sine inside a bounded interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinExtrema {
    /// Some `π/2 + 2kπ` lies in the interval.
    pub contains_max: bool,
    /// Some `3π/2 + 2kπ` lies in the interval.
    pub contains_min: bool,
    /// Number of critical points `π(j + 1/2)` in the interval.
    pub critical_points: BigInt,
    /// Monotone pieces in order, listed only when there are at most
    /// [`SinExtrema::MAX_PIECES`] of them.
    pub pieces: Option<Vec<Monotonicity>>,
}

impl SinExtrema {
    pub const MAX_PIECES: usize = 16;
}

/// Locates the extrema of sine in a bounded interval, raising the precision
/// of π until every critical point is placed with certainty.
pub fn sin_extrema_scan(x: &Interval, cfg: &OracleConfig) -> Result<SinExtrema, OracleError> {
    let format = x.format();
    cfg.validate(format)?;
    let Some((a, b)) = x.bounds() else {
        return Ok(SinExtrema {
            contains_max: false,
            contains_min: false,
            critical_points: BigInt::from(0),
            pieces: Some(Vec::new()),
        });
    };
    if !a.is_finite() || !b.is_finite() {
        return Ok(SinExtrema {
            contains_max: true,
            contains_min: true,
            critical_points: BigInt::from(-1),
            pieces: None,
        });
    }
    let da = Dyadic::from_f64(a).expect("finite");
    let db = Dyadic::from_f64(b).expect("finite");
    let mag = da.abs().max(db.abs());
    let ex = mag.ilog2().unwrap_or(0).max(0) as u64;
    let half = Dyadic::pow2(-1);
    let mut q = cfg.start(format);
    loop {
        let pi = consts::pi(q + ex + cfg.pi_guard);
        let wq = q + ex + cfg.pi_guard;
        // Index of the first critical point at or after a: ceil(a/π - 1/2).
        let ra = Enclosure::point(da.clone()).div(&pi, wq);
        let rb = Enclosure::point(db.clone()).div(&pi, wq);
        let j_lo = ra.lo.sub(&half).ceil();
        let j_lo2 = ra.hi.sub(&half).ceil();
        let j_hi = rb.lo.sub(&half).floor();
        let j_hi2 = rb.hi.sub(&half).floor();
        if j_lo == j_lo2 && j_hi == j_hi2 {
            return Ok(extrema_from(j_lo, j_hi));
        }
        if q >= cfg.q_max {
            return Err(OracleError::PrecisionExhausted {
                f: FunctionId::Sin,
                q_max: cfg.q_max,
                at: format!("{x}"),
            });
        }
        q = q.saturating_mul(cfg.q_growth).min(cfg.q_max);
    }
}

fn extrema_from(j_lo: BigInt, j_hi: BigInt) -> SinExtrema {
    let count: BigInt = (&j_hi - &j_lo + 1u32).max(BigInt::from(0));
    let (contains_max, contains_min) = if count >= BigInt::from(2) {
        (true, true)
    } else if count.is_one() {
        (j_lo.is_even(), j_lo.is_odd())
    } else {
        (false, false)
    };
    // The piece ending at critical point j rises iff j is a maximum; the
    // last piece heads toward j_hi + 1 = j_lo + count.
    let pieces = count
        .to_usize()
        .filter(|&n| n < SinExtrema::MAX_PIECES)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    if (&j_lo + BigInt::from(i)).is_even() {
                        Monotonicity::Increasing
                    } else {
                        Monotonicity::Decreasing
                    }
                })
                .collect()
        });
    SinExtrema {
        contains_max,
        contains_min,
        critical_points: count,
        pieces,
    }
}

/// `nextOut(f(nextOut(x)))`: the widest result the accurate mode admits.
pub fn accurate_envelope(
    f: FunctionId,
    args: &[Interval],
    cfg: &OracleConfig,
) -> Result<Interval, OracleError> {
    let widened: Vec<Interval> = args.iter().map(rounding::next_out).collect();
    let y = tightest_hull(f, &widened, cfg)?;
    Ok(rounding::next_out(&y))
}
