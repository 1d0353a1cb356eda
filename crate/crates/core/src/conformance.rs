//! Grading observed results against testing pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::format::Format;
use crate::function::FunctionId;
use crate::interval::Interval;
use crate::oracle::{self, OracleConfig, OracleError};

/// Accuracy mode, ordered by strength: `Tightest` is the strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Nonconforming,
    Valid,
    Accurate,
    Tightest,
}

impl Level {
    pub const ALL: [Level; 4] = [
        Level::Tightest,
        Level::Accurate,
        Level::Valid,
        Level::Nonconforming,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Level::Tightest => "tightest",
            Level::Accurate => "accurate",
            Level::Valid => "valid",
            Level::Nonconforming => "nonconforming",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown accuracy level `{0}`")]
pub struct UnknownLevel(pub String);

impl FromStr for Level {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Level::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLevel(s.to_string()))
    }
}

/// Input arguments with the expected tightest result and, optionally, the
/// widest result the accurate mode admits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestingPair {
    pub f: FunctionId,
    pub args: Vec<Interval>,
    pub y: Interval,
    pub y_prime: Option<Interval>,
    pub tag: String,
}

impl TestingPair {
    pub fn format(&self) -> Format {
        self.y.format()
    }

    /// Builds a pair whose expected outputs come from the oracle.
    pub fn from_oracle(
        f: FunctionId,
        args: Vec<Interval>,
        tag: &str,
        cfg: &OracleConfig,
    ) -> Result<Self, OracleError> {
        let y = oracle::tightest_hull(f, &args, cfg)?;
        let y_prime = oracle::accurate_envelope(f, &args, cfg)?;
        Ok(TestingPair {
            f,
            args,
            y,
            y_prime: Some(y_prime),
            tag: tag.to_string(),
        })
    }

    /// Regenerates the expected outputs and compares them with the stored
    /// ones.
    pub fn check_invariants(&self, cfg: &OracleConfig) -> Result<(), String> {
        let y = oracle::tightest_hull(self.f, &self.args, cfg).map_err(|e| e.to_string())?;
        if y != self.y {
            return Err(format!("stored y {} differs from regenerated {}", self.y, y));
        }
        if let Some(yp) = &self.y_prime {
            let env = oracle::accurate_envelope(self.f, &self.args, cfg).map_err(|e| e.to_string())?;
            if env != *yp {
                return Err(format!("stored y' {yp} differs from regenerated {env}"));
            }
            if !self.y.is_subset(yp) {
                return Err(format!("y {} is not inside y' {yp}", self.y));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub level: Level,
    pub z: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    /// `z` is a proper valid superset of `y` but the pair carries no `y′`.
    #[error("pair has no accurate envelope; cannot tell accurate from valid")]
    MissingEnvelope,
    #[error("observed {observed} result for a {expected} pair")]
    FormatMismatch { observed: Format, expected: Format },
}

/// The three mode predicates evaluated independently of each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub tightest: bool,
    pub accurate: Option<bool>,
    pub valid: bool,
}

pub fn predicates(z: &Interval, pair: &TestingPair) -> Predicates {
    Predicates {
        tightest: *z == pair.y,
        accurate: pair
            .y_prime
            .as_ref()
            .map(|yp| pair.y.is_subset(z) && z.is_subset(yp)),
        valid: pair.y.is_subset(z),
    }
}

/// The strongest mode whose predicate `z` satisfies.
pub fn classify(z: &Interval, pair: &TestingPair) -> Result<Verdict, ClassifyError> {
    if z.format() != pair.format() {
        return Err(ClassifyError::FormatMismatch {
            observed: z.format(),
            expected: pair.format(),
        });
    }
    let p = predicates(z, pair);
    let level = if p.tightest {
        Level::Tightest
    } else if !p.valid {
        Level::Nonconforming
    } else {
        match p.accurate {
            Some(true) => Level::Accurate,
            Some(false) => Level::Valid,
            None => return Err(ClassifyError::MissingEnvelope),
        }
    };
    Ok(Verdict { level, z: *z })
}

/// Which side of the mathematical range an envelope crosses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeWarning {
    pub f: FunctionId,
    pub envelope: Interval,
    pub side: Side,
    /// The range endpoint that was crossed.
    pub bound: f64,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.f.mathematical_range();
        let what = match self.side {
            Side::Below => "below",
            Side::Above => "above",
        };
        write!(
            f,
            "{} envelope {} extends {what} the range bound {} of [{}, {}]",
            self.f,
            crate::decimal::format_interval_decimal(&self.envelope),
            self.bound,
            r.lo,
            r.hi
        )
    }
}

/// Warns when the accurate envelope leaves the closure of the function's
/// mathematical range. Diagnostic only; verdicts are unaffected.
pub fn range_sanity(pair: &TestingPair) -> Vec<RangeWarning> {
    let (Some(yp), true) = (pair.y_prime, pair.f.has_bounded_range()) else {
        return Vec::new();
    };
    let Some((lo, hi)) = yp.bounds() else {
        return Vec::new();
    };
    let r = pair.f.mathematical_range();
    let mut out = Vec::new();
    if lo < r.lo {
        out.push(RangeWarning {
            f: pair.f,
            envelope: yp,
            side: Side::Below,
            bound: r.lo,
        });
    }
    if hi > r.hi {
        out.push(RangeWarning {
            f: pair.f,
            envelope: yp,
            side: Side::Above,
            bound: r.hi,
        });
    }
    out
}

/// A claimed mode for every function, or one mode per function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Uniform(Level),
    PerFunction(BTreeMap<FunctionId, Level>),
}

impl Claim {
    /// Claimed level for `f`; functions missing from a per-function claim
    /// are held to the valid mode.
    pub fn level_for(&self, f: FunctionId) -> Level {
        match self {
            Claim::Uniform(l) => *l,
            Claim::PerFunction(m) => m.get(&f).copied().unwrap_or(Level::Valid),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Uniform(l) => write!(f, "{l}"),
            Claim::PerFunction(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub index: usize,
    pub pair: TestingPair,
    pub observed: Option<Interval>,
    pub level: Level,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
    pub counts: BTreeMap<(FunctionId, Level), usize>,
    pub claimed: Claim,
    pub claim_upheld: bool,
    pub range_warnings: Vec<(usize, RangeWarning)>,
    pub faults: usize,
    /// Set when the fault budget ran out before every pair was evaluated.
    pub aborted: bool,
}

impl Report {
    pub fn executed(&self) -> usize {
        self.outcomes.len()
    }

    pub fn count(&self, f: FunctionId, level: Level) -> usize {
        self.counts.get(&(f, level)).copied().unwrap_or(0)
    }

    pub fn level_total(&self, level: Level) -> usize {
        self.counts
            .iter()
            .filter(|((_, l), _)| *l == level)
            .map(|(_, n)| n)
            .sum()
    }

    /// Weakest verdict over all outcomes; `None` for an empty report.
    pub fn min_level(&self) -> Option<Level> {
        self.outcomes.iter().map(|o| o.level).min()
    }

    /// Outcomes whose verdict falls short of the claim, in pair order.
    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes
            .iter()
            .filter(|o| o.level < self.claimed.level_for(o.pair.f))
    }
}

/// True iff every verdict is at least `claimed`.
pub fn check_claim(report: &Report, claimed: Level) -> bool {
    report.outcomes.iter().all(|o| o.level >= claimed)
}

/// True iff every verdict meets the claim made for its function.
pub fn check_claims(report: &Report, claim: &Claim) -> bool {
    report
        .outcomes
        .iter()
        .all(|o| o.level >= claim.level_for(o.pair.f))
}

/// Result of evaluating one pair: the observed interval or a fault message.
pub type Evaluation = Result<Interval, String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub claim: Claim,
    /// Stop after this many faults; `None` never stops.
    pub fault_budget: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            claim: Claim::Uniform(Level::Valid),
            fault_budget: None,
        }
    }
}

fn grade(index: usize, pair: &TestingPair, eval: Evaluation) -> (Outcome, bool) {
    let outcome = |observed, level, note: Option<String>| Outcome {
        index,
        pair: pair.clone(),
        observed,
        level,
        note,
    };
    match eval {
        Err(msg) => (outcome(None, Level::Nonconforming, Some(format!("fault: {msg}"))), true),
        Ok(z) => match classify(&z, pair) {
            Ok(v) => (outcome(Some(z), v.level, None), false),
            Err(ClassifyError::MissingEnvelope) => (
                outcome(Some(z), Level::Valid, Some(ClassifyError::MissingEnvelope.to_string())),
                false,
            ),
            Err(e) => (outcome(Some(z), Level::Nonconforming, Some(format!("fault: {e}"))), true),
        },
    }
}

fn assemble(outcomes: Vec<Outcome>, faults: usize, aborted: bool, options: &SuiteOptions) -> Report {
    let mut counts = BTreeMap::new();
    let mut range_warnings = Vec::new();
    for o in &outcomes {
        *counts.entry((o.pair.f, o.level)).or_insert(0) += 1;
        for w in range_sanity(&o.pair) {
            range_warnings.push((o.index, w));
        }
    }
    let mut report = Report {
        outcomes,
        counts,
        claimed: options.claim.clone(),
        claim_upheld: false,
        range_warnings,
        faults,
        aborted,
    };
    report.claim_upheld = !aborted && check_claims(&report, &options.claim);
    report
}

/// Evaluates and grades every pair in order. Faults count as
/// nonconforming verdicts; once the fault budget is exceeded the run stops
/// and the report is marked aborted.
pub fn run_suite(
    pairs: &[TestingPair],
    mut evaluate: impl FnMut(&TestingPair) -> Evaluation,
    options: &SuiteOptions,
) -> Report {
    let mut outcomes = Vec::with_capacity(pairs.len());
    let mut faults = 0;
    let mut aborted = false;
    for (i, pair) in pairs.iter().enumerate() {
        let (o, fault) = grade(i, pair, evaluate(pair));
        outcomes.push(o);
        if fault {
            faults += 1;
            if options.fault_budget.is_some_and(|b| faults > b) {
                aborted = i + 1 < pairs.len();
                break;
            }
        }
    }
    assemble(outcomes, faults, aborted, options)
}

/// Parallel [`run_suite`] for reentrant evaluators. The fault budget is
/// applied after the fact, so the report is identical to a sequential run
/// whenever the budget is not exceeded.
pub fn run_suite_par(
    pairs: &[TestingPair],
    evaluate: impl Fn(&TestingPair) -> Evaluation + Sync,
    options: &SuiteOptions,
) -> Report {
    let graded: Vec<(Outcome, bool)> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| grade(i, p, evaluate(p)))
        .collect();
    let mut outcomes = Vec::with_capacity(graded.len());
    let mut faults = 0;
    let mut aborted = false;
    let total = graded.len();
    for (o, fault) in graded {
        let i = o.index;
        outcomes.push(o);
        if fault {
            faults += 1;
            if options.fault_budget.is_some_and(|b| faults > b) {
                aborted = i + 1 < total;
                break;
            }
        }
    }
    assemble(outcomes, faults, aborted, options)
}

fn args_text(args: &[Interval]) -> String {
    let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    parts.join(";")
}

fn opt_text(x: &Option<Interval>) -> String {
    x.map_or_else(|| "-".to_string(), |i| i.to_string())
}

/// Human-readable summary: counts per function, claim status, warnings and
/// the pairs that fall short of the claim.
pub fn render_table(report: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<8} {:>9} {:>9} {:>9} {:>14}\n",
        "function", "tightest", "accurate", "valid", "nonconforming"
    ));
    let mut functions: Vec<FunctionId> = report.counts.keys().map(|(f, _)| *f).collect();
    functions.dedup();
    for f in functions {
        s.push_str(&format!(
            "{:<8} {:>9} {:>9} {:>9} {:>14}\n",
            f.name(),
            report.count(f, Level::Tightest),
            report.count(f, Level::Accurate),
            report.count(f, Level::Valid),
            report.count(f, Level::Nonconforming)
        ));
    }
    s.push_str(&format!(
        "pairs: {}  faults: {}{}\n",
        report.executed(),
        report.faults,
        if report.aborted { "  (aborted: fault budget exceeded)" } else { "" }
    ));
    s.push_str(&format!(
        "claimed: {}  upheld: {}\n",
        report.claimed,
        if report.claim_upheld { "yes" } else { "no" }
    ));
    for (i, w) in &report.range_warnings {
        s.push_str(&format!("warning: pair {i}: {w}\n"));
    }
    let failures: Vec<&Outcome> = report.failures().collect();
    if !failures.is_empty() {
        s.push_str("below claim:\n");
        for o in failures {
            s.push_str(&format!(
                "  #{} {} {} x={} y={} y'={} z={} -> {}{}\n",
                o.index,
                o.pair.f,
                o.pair.format(),
                args_text(&o.pair.args),
                o.pair.y,
                opt_text(&o.pair.y_prime),
                opt_text(&o.observed),
                o.level,
                o.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            ));
        }
    }
    s
}

/// Machine-readable report: one `key=value` record per line. `note`, when
/// present, is the last key and runs to the end of the line.
pub fn render_records(report: &Report) -> String {
    let mut s = format!(
        "report pairs={} faults={} claimed={} upheld={} aborted={}\n",
        report.executed(),
        report.faults,
        report.claimed,
        report.claim_upheld,
        report.aborted
    );
    for ((f, l), n) in &report.counts {
        s.push_str(&format!("count fn={f} level={l} n={n}\n"));
    }
    for o in &report.outcomes {
        s.push_str(&format!(
            "outcome index={} fn={} format={} level={} x={} y={} y_prime={} z={}",
            o.index,
            o.pair.f,
            o.pair.format(),
            o.level,
            args_text(&o.pair.args),
            o.pair.y,
            opt_text(&o.pair.y_prime),
            opt_text(&o.observed)
        ));
        if let Some(n) = &o.note {
            s.push_str(&format!(" note={n}"));
        }
        s.push('\n');
    }
    for (i, w) in &report.range_warnings {
        s.push_str(&format!(
            "warning index={i} fn={} envelope={} side={} bound={}\n",
            w.f,
            w.envelope,
            match w.side {
                Side::Below => "below",
                Side::Above => "above",
            },
            w.bound
        ));
    }
    s
}
