//! Set-based inf-sup intervals.

use std::fmt;

use crate::format::Format;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum IntervalError {
    /// Endpoints that do not describe a non-empty interval: `inf > sup`,
    /// a NaN endpoint, `inf = +∞` or `sup = −∞`.
    #[error("invalid interval [{inf:e}, {sup:e}]")]
    InvalidInterval { inf: f64, sup: f64 },
    #[error("endpoint {value:e} is not representable in {format}")]
    NotInFormat { value: f64, format: Format },
}

/// A closed, possibly unbounded, interval of reals with endpoints in a
/// [`Format`], or the empty set.
///
/// Zero endpoints are stored as `+0`, so the sign of zero is never
/// observable and equality is bit equality of the endpoints.
#[derive(Clone, Copy, Debug)]
pub struct Interval {
    format: Format,
    bounds: Option<(f64, f64)>,
}

/// Set relation of one interval to another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    ProperSubset,
    ProperSuperset,
    Overlapping,
    Disjoint,
}

fn norm_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Interval {
    /// Builds `[inf, sup]`, rejecting malformed endpoint pairs.
    pub fn new(inf: f64, sup: f64, format: Format) -> Result<Self, IntervalError> {
        if inf.is_nan() || sup.is_nan() || inf > sup || inf == f64::INFINITY || sup == f64::NEG_INFINITY
        {
            return Err(IntervalError::InvalidInterval { inf, sup });
        }
        for value in [inf, sup] {
            if !format.contains(value) {
                return Err(IntervalError::NotInFormat { value, format });
            }
        }
        Ok(Interval::from_checked(inf, sup, format))
    }

    /// Builds from endpoints the caller has already validated.
    pub(crate) fn from_checked(inf: f64, sup: f64, format: Format) -> Self {
        debug_assert!(inf <= sup && inf != f64::INFINITY && sup != f64::NEG_INFINITY);
        debug_assert!(format.contains(inf) && format.contains(sup));
        Interval {
            format,
            bounds: Some((norm_zero(inf), norm_zero(sup))),
        }
    }

    pub fn empty(format: Format) -> Self {
        Interval {
            format,
            bounds: None,
        }
    }

    pub fn entire(format: Format) -> Self {
        Interval::from_checked(f64::NEG_INFINITY, f64::INFINITY, format)
    }

    pub fn point(x: f64, format: Format) -> Result<Self, IntervalError> {
        Interval::new(x, x, format)
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn inf(&self) -> Option<f64> {
        self.bounds.map(|b| b.0)
    }

    pub fn sup(&self) -> Option<f64> {
        self.bounds.map(|b| b.1)
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn is_entire(&self) -> bool {
        self.bounds == Some((f64::NEG_INFINITY, f64::INFINITY))
    }

    pub fn is_bounded(&self) -> bool {
        match self.bounds {
            None => true,
            Some((a, b)) => a.is_finite() && b.is_finite(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        matches!(self.bounds, Some((a, b)) if a <= x && x <= b)
    }

    /// `self ⊆ other`; the empty set is a subset of everything.
    pub fn is_subset(&self, other: &Interval) -> bool {
        match (self.bounds, other.bounds) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    pub fn intersection(&self, other: &Interval) -> Interval {
        match (self.bounds, other.bounds) {
            (Some((a, b)), Some((c, d))) => {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    Interval::from_checked(lo, hi, self.format)
                } else {
                    Interval::empty(self.format)
                }
            }
            _ => Interval::empty(self.format),
        }
    }

    pub fn relate(&self, other: &Interval) -> Relation {
        match (self.is_subset(other), other.is_subset(self)) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::ProperSubset,
            (false, true) => Relation::ProperSuperset,
            (false, false) => {
                if self.intersection(other).is_empty() {
                    Relation::Disjoint
                } else {
                    Relation::Overlapping
                }
            }
        }
    }

    /// `{-x : x ∈ self}`.
    pub fn neg(&self) -> Interval {
        match self.bounds {
            None => *self,
            Some((a, b)) => Interval::from_checked(-b, -a, self.format),
        }
    }

    /// Same set of reals carried in another format, if every endpoint is a
    /// member of it.
    pub fn with_format(&self, format: Format) -> Result<Interval, IntervalError> {
        match self.bounds {
            None => Ok(Interval::empty(format)),
            Some((a, b)) => Interval::new(a, b, format),
        }
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.format == other.format
            && match (self.bounds, other.bounds) {
                (None, None) => true,
                (Some((a, b)), Some((c, d))) => {
                    a.to_bits() == c.to_bits() && b.to_bits() == d.to_bits()
                }
                _ => false,
            }
    }
}

impl Eq for Interval {}

impl std::hash::Hash for Interval {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.format.hash(state);
        self.bounds.map(|(a, b)| (a.to_bits(), b.to_bits())).hash(state);
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::hexfloat::format_interval(self))
    }
}
