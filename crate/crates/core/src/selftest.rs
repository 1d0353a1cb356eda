//! Testing the tester: the nextOut suite, the oracle against exact
//! rationals, and the two published accurate-mode envelopes.
//!
//! The neighbour functions are injectable so that deliberately broken
//! variants can show that each check is able to fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decimal::format_interval_decimal;
use crate::format::Format;
use crate::function::FunctionId;
use crate::interval::Interval;
use crate::kernel;
use crate::oracle::{self, OracleConfig};
use crate::pairgen::nextout::{gen_nextout_suite, NextOutCategory};
use crate::reference;
use crate::rounding;

/// Successor and predecessor within a format.
pub trait Stepper: Sync {
    fn next_up(&self, x: f64, format: Format) -> f64;
    fn next_down(&self, x: f64, format: Format) -> f64;

    fn next_out(&self, x: &Interval) -> Interval {
        match x.bounds() {
            None => *x,
            Some((a, b)) => {
                let f = x.format();
                let lo = if a == f64::NEG_INFINITY { a } else { self.next_down(a, f) };
                let hi = if b == f64::INFINITY { b } else { self.next_up(b, f) };
                Interval::new(lo, hi, f).unwrap_or(*x)
            }
        }
    }
}

/// The crate's own neighbour functions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Standard;

impl Stepper for Standard {
    fn next_up(&self, x: f64, format: Format) -> f64 {
        rounding::next_up(x, format).expect("format member")
    }

    fn next_down(&self, x: f64, format: Format) -> f64 {
        rounding::next_down(x, format).expect("format member")
    }
}

/// `next_up` that steps twice.
#[derive(Clone, Copy, Debug, Default)]
pub struct OffByOne;

impl Stepper for OffByOne {
    fn next_up(&self, x: f64, format: Format) -> f64 {
        let s = Standard;
        s.next_up(s.next_up(x, format), format)
    }

    fn next_down(&self, x: f64, format: Format) -> f64 {
        Standard.next_down(x, format)
    }
}

/// Neighbours in a format without subnormals: results below the smallest
/// normal magnitude are replaced by zero or the smallest normal.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlushToZero;

impl Stepper for FlushToZero {
    fn next_up(&self, x: f64, format: Format) -> f64 {
        let n = format.min_normal();
        match Standard.next_up(x, format) {
            v if v > 0.0 && v < n => n,
            v if v < 0.0 && v > -n => 0.0,
            v => v,
        }
    }

    fn next_down(&self, x: f64, format: Format) -> f64 {
        -self.next_up(-x, format)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfTestReport {
    pub checks: Vec<CheckResult>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// One line per check plus up to five failures each.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} {} ({} cases)\n", c.name, c.cases));
            for f in c.failures.iter().take(5) {
                s.push_str(&format!("    {f}\n"));
            }
            if c.failures.len() > 5 {
                s.push_str(&format!("    ... {} more\n", c.failures.len() - 5));
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelfTestOptions {
    pub n_random: usize,
    pub seed: u64,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        SelfTestOptions {
            n_random: 2000,
            seed: 1788,
        }
    }
}

pub const SIN_ENVELOPE: &str = "[-1.0000000000000003e0,1.0000000000000003e0]";
pub const EXP_ENVELOPE: &str = "[-4.9406564584124655e-324,1.0000000000000005e0]";

fn nextout_checks(stepper: &dyn Stepper, opts: &SelfTestOptions) -> Vec<CheckResult> {
    let categories = [
        (NextOutCategory::Special, "nextOut special endpoints"),
        (NextOutCategory::SetCase, "nextOut empty, entire and malformed intervals"),
        (NextOutCategory::Random, "nextOut random endpoints"),
        (NextOutCategory::Symmetry, "nextOut symmetry"),
    ];
    let suites: Vec<_> = Format::ALL
        .into_iter()
        .flat_map(|f| gen_nextout_suite(f, opts.n_random, opts.seed))
        .collect();
    let mut out = Vec::new();
    for (cat, name) in categories {
        let cases: Vec<_> = suites.iter().filter(|c| c.category == cat).collect();
        let failures = cases
            .iter()
            .filter_map(|c| c.check(|x| stepper.next_out(x)).err())
            .collect();
        out.push(CheckResult {
            name: name.to_string(),
            cases: cases.len(),
            failures,
        });
    }
    // The same symmetry law, as a property of the implementation alone.
    let symmetry = out.iter_mut().find(|c| c.name == "nextOut symmetry").expect("present");
    for case in suites.iter().filter(|c| c.category == NextOutCategory::Random) {
        if let crate::pairgen::nextout::NextOutInput::Interval(x) = case.input {
            symmetry.cases += 1;
            let a = stepper.next_out(&x.neg());
            let b = stepper.next_out(&x).neg();
            if a != b {
                symmetry
                    .failures
                    .push(format!("nextOut(-x) = {a} but -nextOut(x) = {b} for x = {x}"));
            }
        }
    }
    out
}

fn random_operand(rng: &mut ChaCha8Rng) -> Interval {
    let mut v = || loop {
        let x = f64::from_bits(rng.gen());
        if x.is_finite() {
            break x;
        }
    };
    let (a, b) = (v(), v());
    Interval::new(a.min(b), a.max(b), Format::Binary64).expect("ordered")
}

fn rational_check(opts: &SelfTestOptions) -> CheckResult {
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut failures = Vec::new();
    let mut cases = 0;
    let ops = FunctionId::ALL.into_iter().filter(|f| !f.is_elementary());
    for f in ops {
        for _ in 0..opts.n_random / 8 {
            let args: Vec<Interval> = (0..f.arity()).map(|_| random_operand(&mut rng)).collect();
            let want = reference::hull(f, &args).expect("basic operation");
            cases += 1;
            match oracle::tightest_hull(f, &args, &cfg) {
                Ok(got) if got == want => {}
                Ok(got) => failures.push(format!("oracle {f} {args:?}: {got} != {want}")),
                Err(e) => failures.push(format!("oracle {f}: {e}")),
            }
            match kernel::basic_arith(f, &args) {
                Ok(got) if got == want => {}
                Ok(got) => failures.push(format!("kernel {f} {args:?}: {got} != {want}")),
                Err(e) => failures.push(format!("kernel {f}: {e}")),
            }
        }
    }
    CheckResult {
        name: "oracle and kernel against exact rationals".to_string(),
        cases,
        failures,
    }
}

fn envelope_check(stepper: &dyn Stepper) -> CheckResult {
    let cfg = OracleConfig::default();
    let b64 = Format::Binary64;
    let cases = [
        (FunctionId::Sin, Interval::new(0.0, 10.0, b64).expect("valid"), SIN_ENVELOPE),
        (FunctionId::Exp, Interval::new(-1e9, 0.0, b64).expect("valid"), EXP_ENVELOPE),
    ];
    let mut failures = Vec::new();
    for (f, x, want) in cases {
        let got = oracle::tightest_hull(f, &[stepper.next_out(&x)], &cfg)
            .map(|y| format_interval_decimal(&stepper.next_out(&y)));
        match got {
            Ok(s) if s == want => {}
            Ok(s) => failures.push(format!("{f}({x}) envelope {s}, expected {want}")),
            Err(e) => failures.push(format!("{f}({x}): {e}")),
        }
    }
    CheckResult {
        name: "published envelopes reproduced: sin [0,10] and exp [-1e9,0]".to_string(),
        cases: 2,
        failures,
    }
}

pub fn run_selftest(stepper: &dyn Stepper, opts: &SelfTestOptions) -> SelfTestReport {
    let mut checks = nextout_checks(stepper, opts);
    checks.push(rational_check(opts));
    checks.push(envelope_check(stepper));
    SelfTestReport { checks }
}
