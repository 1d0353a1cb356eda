//! Identifiers of the interval operations under test.

use std::fmt;
use std::str::FromStr;

/// One of the operations the kernel, oracle and harness know about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionId {
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Recip,
    Sqrt,
    Sqr,
    Fma,
    Cbrt,
    Exp,
    Sin,
    Atanh,
}

/// Natural domain of a function, as an exact set description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// All reals, in every argument.
    Reals,
    /// `[0, +∞)`.
    NonNegative,
    /// The open interval `(-1, 1)`.
    OpenUnit,
    /// Reals except zero, in the last argument (the divisor).
    NonZeroLast,
}

/// Closed-form mathematical range of a function over its whole domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Range {
    const REALS: Range = Range {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };
}

impl FunctionId {
    pub const ALL: [FunctionId; 13] = [
        FunctionId::Neg,
        FunctionId::Add,
        FunctionId::Sub,
        FunctionId::Mul,
        FunctionId::Div,
        FunctionId::Recip,
        FunctionId::Sqrt,
        FunctionId::Sqr,
        FunctionId::Fma,
        FunctionId::Cbrt,
        FunctionId::Exp,
        FunctionId::Sin,
        FunctionId::Atanh,
    ];

    /// The four elementary functions evaluated through the oracle.
    pub const ELEMENTARY: [FunctionId; 4] =
        [FunctionId::Cbrt, FunctionId::Exp, FunctionId::Sin, FunctionId::Atanh];

    pub const fn arity(self) -> usize {
        match self {
            FunctionId::Add | FunctionId::Sub | FunctionId::Mul | FunctionId::Div => 2,
            FunctionId::Fma => 3,
            _ => 1,
        }
    }

    pub const fn is_elementary(self) -> bool {
        matches!(
            self,
            FunctionId::Cbrt | FunctionId::Exp | FunctionId::Sin | FunctionId::Atanh
        )
    }

    /// Odd functions satisfy `f(-x) = -f(x)`.
    pub const fn is_odd(self) -> bool {
        matches!(
            self,
            FunctionId::Neg
                | FunctionId::Recip
                | FunctionId::Cbrt
                | FunctionId::Sin
                | FunctionId::Atanh
        )
    }

    pub const fn name(self) -> &'static str {
        match self {
            FunctionId::Neg => "neg",
            FunctionId::Add => "add",
            FunctionId::Sub => "sub",
            FunctionId::Mul => "mul",
            FunctionId::Div => "div",
            FunctionId::Recip => "recip",
            FunctionId::Sqrt => "sqrt",
            FunctionId::Sqr => "sqr",
            FunctionId::Fma => "fma",
            FunctionId::Cbrt => "cbrt",
            FunctionId::Exp => "exp",
            FunctionId::Sin => "sin",
            FunctionId::Atanh => "atanh",
        }
    }

    pub const fn natural_domain(self) -> Domain {
        match self {
            FunctionId::Sqrt => Domain::NonNegative,
            FunctionId::Atanh => Domain::OpenUnit,
            FunctionId::Div | FunctionId::Recip => Domain::NonZeroLast,
            _ => Domain::Reals,
        }
    }

    pub const fn mathematical_range(self) -> Range {
        match self {
            FunctionId::Sin => Range {
                lo: -1.0,
                hi: 1.0,
                lo_open: false,
                hi_open: false,
            },
            FunctionId::Exp => Range {
                lo: 0.0,
                hi: f64::INFINITY,
                lo_open: true,
                hi_open: true,
            },
            FunctionId::Sqrt | FunctionId::Sqr => Range {
                lo: 0.0,
                hi: f64::INFINITY,
                lo_open: false,
                hi_open: true,
            },
            _ => Range::REALS,
        }
    }

    /// True when the range is narrower than the whole real line.
    pub fn has_bounded_range(self) -> bool {
        self.mathematical_range() != Range::REALS
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported function `{0}`")]
pub struct UnknownFunction(pub String);

impl FromStr for FunctionId {
    type Err = UnknownFunction;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFunction(s.to_string()))
    }
}
