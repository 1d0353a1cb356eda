//! Evaluators the harness can grade: the built-in kernel and a binary32
//! emulation that goes through binary64.

use std::collections::BTreeMap;

use crate::conformance::Level;
use crate::format::Format;
use crate::function::FunctionId;
use crate::interval::Interval;
use crate::kernel;
use crate::rounding::{self, Direction};

/// What an evaluator announces before any evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub name: String,
    pub formats: Vec<Format>,
    pub functions: Vec<FunctionId>,
    pub modes: BTreeMap<FunctionId, Level>,
    pub reentrant: bool,
}

impl Capabilities {
    /// Supports every function and format, claiming `level` for all.
    pub fn uniform(name: &str, level: Level, reentrant: bool) -> Self {
        Capabilities {
            name: name.to_string(),
            formats: Format::ALL.to_vec(),
            functions: FunctionId::ALL.to_vec(),
            modes: FunctionId::ALL.into_iter().map(|f| (f, level)).collect(),
            reentrant,
        }
    }
}

pub trait Evaluator {
    fn capabilities(&self) -> Capabilities;

    /// Evaluates `f` on `args`, or explains why it cannot.
    fn evaluate(&mut self, f: FunctionId, args: &[Interval]) -> Result<Interval, String>;
}

/// The kernel in this crate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Builtin;

impl Evaluator for Builtin {
    fn capabilities(&self) -> Capabilities {
        Capabilities::uniform("builtin", Level::Tightest, true)
    }

    fn evaluate(&mut self, f: FunctionId, args: &[Interval]) -> Result<Interval, String> {
        kernel::evaluate(f, args).map_err(|e| e.to_string())
    }
}

/// Binary32 results obtained by evaluating in binary64 and narrowing each
/// endpoint to the nearest binary32 value, then widening it by one binary32
/// step so the result still encloses the exact range. Binary64 requests go
/// straight to the kernel. Claims tightest; is in fact only accurate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Naive32;

impl Naive32 {
    pub fn eval32(f: FunctionId, args: &[Interval]) -> Result<Interval, String> {
        let wide: Vec<Interval> = args
            .iter()
            .map(|a| a.with_format(Format::Binary64).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let y = kernel::evaluate(f, &wide).map_err(|e| e.to_string())?;
        let Some((lo, hi)) = y.bounds() else {
            return Ok(Interval::empty(Format::Binary32));
        };
        let b32 = Format::Binary32;
        let narrow = |v: f64, dir| {
            if v.is_infinite() {
                v
            } else {
                rounding::step(v as f32 as f64, b32, dir)
            }
        };
        Interval::new(narrow(lo, Direction::Down), narrow(hi, Direction::Up), b32)
            .map_err(|e| e.to_string())
    }
}

impl Evaluator for Naive32 {
    fn capabilities(&self) -> Capabilities {
        Capabilities::uniform("naive32", Level::Tightest, true)
    }

    fn evaluate(&mut self, f: FunctionId, args: &[Interval]) -> Result<Interval, String> {
        match args.first().map(|a| a.format()) {
            Some(Format::Binary32) => Naive32::eval32(f, args),
            _ => kernel::evaluate(f, args).map_err(|e| e.to_string()),
        }
    }
}
