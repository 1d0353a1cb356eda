//! Set-based inf-sup interval arithmetic with a reference oracle and a
//! harness that grades interval libraries by accuracy mode.

pub mod adapters;
pub mod conformance;
pub mod decimal;
pub mod format;
pub mod function;
pub mod hexfloat;
pub mod hp;
pub mod interval;
pub mod kernel;
pub mod oracle;
pub mod pairgen;
pub mod protocol;
pub mod reference;
pub mod rounding;
pub mod selftest;

pub use conformance::{Level, TestingPair};
pub use format::Format;
pub use function::FunctionId;
pub use interval::{Interval, IntervalError, Relation};
pub use oracle::{OracleConfig, OracleError};
pub use rounding::Direction;
