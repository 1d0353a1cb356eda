//! Acceptance criteria. Prints one PASS/FAIL line per criterion with its
//! wall time and exits nonzero if any criterion fails or runs past its
//! time limit.

use std::time::{Duration, Instant};

use interval_conform::adapters::{Evaluator, Naive32};
use interval_conform::conformance::{
    check_claim, classify, predicates, range_sanity, run_suite, Level, SuiteOptions, TestingPair,
};
use interval_conform::decimal::format_interval_decimal;
use interval_conform::kernel;
use interval_conform::oracle::{accurate_envelope, tightest_hull, OracleConfig};
use interval_conform::pairgen::{self, gen_function_suite, SuiteSpec};
use interval_conform::reference;
use interval_conform::rounding::{next_down, next_out, next_up};
use interval_conform::{Format, FunctionId, Interval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const B64: Format = Format::Binary64;
const B32: Format = Format::Binary32;

type Outcome = Result<String, String>;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b, B64).unwrap()
}

fn sin_envelope() -> Outcome {
    let y = accurate_envelope(FunctionId::Sin, &[iv(0.0, 10.0)], &OracleConfig::default())
        .map_err(|e| e.to_string())?;
    let one_up = 1.0 + f64::EPSILON;
    if y != iv(-one_up, one_up) {
        return Err(format!("envelope {y}"));
    }
    let s = format_interval_decimal(&y);
    if s != "[-1.0000000000000003e0,1.0000000000000003e0]" {
        return Err(format!("rendered {s}"));
    }
    Ok(s)
}

fn exp_envelope() -> Outcome {
    let y = accurate_envelope(FunctionId::Exp, &[iv(-1e9, 0.0)], &OracleConfig::default())
        .map_err(|e| e.to_string())?;
    let s = format_interval_decimal(&y);
    if s != "[-4.9406564584124655e-324,1.0000000000000005e0]" {
        return Err(format!("rendered {s}"));
    }
    Ok(s)
}

const BASIC: [FunctionId; 7] = [
    FunctionId::Add,
    FunctionId::Sub,
    FunctionId::Mul,
    FunctionId::Div,
    FunctionId::Recip,
    FunctionId::Sqr,
    FunctionId::Fma,
];

fn basic_vs_rationals() -> Outcome {
    let n = 10_000u64;
    let compare = |f: FunctionId, args: &[Interval]| {
        let want = reference::hull(f, args).expect("basic op");
        match kernel::basic_arith(f, args) {
            Ok(got) if got == want => None,
            Ok(got) => Some(format!("{f} {args:?}: {got} vs {want}")),
            Err(e) => Some(format!("{f}: {e}")),
        }
    };
    let mut failures: Vec<String> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            BASIC
                .into_iter()
                .filter_map(move |f| compare(f, &pairgen::random_args(f, B64, 0xacce97 + i)))
        })
        .collect();
    // The special-operand grid: zeros, infinities, touching and straddling zero.
    let mut specials = 0;
    for f in BASIC {
        let spec = SuiteSpec::new(f, B64).with_random(0);
        for p in gen_function_suite(&spec, &OracleConfig::default()).map_err(|e| e.to_string())? {
            specials += 1;
            failures.extend(compare(f, &p.args));
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{} random and {specials} special hulls bit-exact",
            n as usize * BASIC.len()
        ))
    } else {
        Err(format!("{} mismatches, first: {}", failures.len(), failures[0]))
    }
}

fn finite_value(rng: &mut ChaCha8Rng, format: Format) -> f64 {
    loop {
        let x = match format {
            Format::Binary64 => f64::from_bits(rng.gen()),
            Format::Binary32 => f32::from_bits(rng.gen()) as f64,
        };
        if x.is_finite() {
            return x;
        }
    }
}

fn nextout_properties() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for format in Format::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut values: Vec<f64> = (0..100_000).map(|_| finite_value(&mut rng, format)).collect();
        values.extend(pairgen::nextout::special_values(format));
        let mut intervals = vec![Interval::empty(format), Interval::entire(format)];
        for w in values.chunks(2) {
            let (a, b) = (w[0], *w.get(1).unwrap_or(&w[0]));
            let (a, b) = (a.min(b), a.max(b));
            if let Ok(x) = Interval::new(a, b, format) {
                intervals.push(x);
            }
        }
        for &s in &values {
            if let Ok(x) = Interval::new(s, s, format) {
                intervals.push(x);
            }
        }
        for &v in values.iter().filter(|v| v.is_finite()) {
            checked += 1;
            let back = next_down(next_up(v, format).unwrap(), format).unwrap();
            if back != v {
                failures.push(format!("next_down(next_up({v:e})) = {back:e}"));
            }
        }
        for x in &intervals {
            checked += 1;
            let y = next_out(x);
            if next_out(&x.neg()) != y.neg() {
                failures.push(format!("symmetry at {x}"));
            }
            if !x.is_subset(&y) {
                failures.push(format!("{x} not inside {y}"));
            }
            if let (Some((a, b)), Some((c, d))) = (x.bounds(), y.bounds()) {
                if a.is_finite() && c >= a || b.is_finite() && d <= b {
                    failures.push(format!("{y} does not properly widen {x}"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} checks"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    }
}

/// Accurate-mode instances: y, strictly between, y′, one past y′, and an
/// enclosure violation.
fn lattice_instances(pair: &TestingPair, rng: &mut ChaCha8Rng) -> Option<[Interval; 5]> {
    let (y, yp) = (pair.y, pair.y_prime?);
    let (ylo, yhi) = y.bounds()?;
    let (plo, phi) = yp.bounds()?;
    let format = y.format();
    let up = |v| next_up(v, format).unwrap();
    let down = |v| next_down(v, format).unwrap();
    let low_room = plo < ylo;
    let high_room = phi > yhi;
    let between = match (low_room, high_room) {
        (true, true) if rng.gen() => Interval::new(ylo, phi, format).ok()?,
        (true, _) => Interval::new(plo, yhi, format).ok()?,
        (_, true) => Interval::new(ylo, phi, format).ok()?,
        _ => return None,
    };
    let lo_past = plo.is_finite() && down(plo) != plo;
    let hi_past = phi.is_finite() && up(phi) != phi;
    let past = match (lo_past, hi_past) {
        (true, true) if rng.gen() => Interval::new(plo, up(phi), format).ok()?,
        (true, _) => Interval::new(down(plo), phi, format).ok()?,
        (_, true) => Interval::new(plo, up(phi), format).ok()?,
        _ => return None,
    };
    let violating = if ylo < yhi && ylo.is_finite() {
        Interval::new(up(ylo), yhi, format).ok()?
    } else {
        Interval::empty(format)
    };
    Some([y, between, yp, past, violating])
}

fn mode_lattice() -> Outcome {
    let cfg = OracleConfig::default();
    let expected = [Level::Tightest, Level::Accurate, Level::Accurate, Level::Valid, Level::Nonconforming];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances = 0;
    let mut failures = Vec::new();
    let mut seed = 0u64;
    let functions = [FunctionId::Add, FunctionId::Mul, FunctionId::Div, FunctionId::Sqrt, FunctionId::Cbrt, FunctionId::Exp];
    while instances < 10_000 {
        let f = functions[seed as usize % functions.len()];
        let format = Format::ALL[seed as usize / functions.len() % 2];
        let args = pairgen::random_args(f, format, 5_000_000 + seed);
        seed += 1;
        let pair = TestingPair::from_oracle(f, args, "lattice", &cfg).map_err(|e| e.to_string())?;
        let Some(zs) = lattice_instances(&pair, &mut rng) else {
            continue;
        };
        for (z, want) in zs.iter().zip(expected) {
            instances += 1;
            let p = predicates(z, &pair);
            let acc = p.accurate.unwrap_or(false);
            if p.tightest && !acc || acc && !p.valid {
                failures.push(format!("incoherent predicates for {z} against {pair:?}"));
            }
            match classify(z, &pair) {
                Ok(v) if v.level == want => {}
                Ok(v) => failures.push(format!("{z}: {} expected {want} ({pair:?})", v.level)),
                Err(e) => failures.push(format!("{z}: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{instances} instances"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    }
}

fn suite_scale() -> Outcome {
    let cfg = OracleConfig::default();
    let mut sizes = Vec::new();
    for f in FunctionId::ELEMENTARY {
        for format in Format::ALL {
            let pairs = gen_function_suite(&SuiteSpec::new(f, format).with_seed(6), &cfg)
                .map_err(|e| e.to_string())?;
            if pairs.len() < 100 {
                return Err(format!("{f} {format}: only {} pairs", pairs.len()));
            }
            let bad: Vec<String> = pairs
                .par_iter()
                .filter_map(|p| p.check_invariants(&cfg).err())
                .collect();
            if let Some(e) = bad.first() {
                return Err(format!("{f} {format}: {} invalid pairs, first: {e}", bad.len()));
            }
            sizes.push(format!("{f}/{format}={}", pairs.len()));
        }
    }
    Ok(sizes.join(" "))
}

fn double_rounding() -> Outcome {
    let cfg = OracleConfig::default();
    let pairs = gen_function_suite(&SuiteSpec::new(FunctionId::Cbrt, B32).with_seed(7), &cfg)
        .map_err(|e| e.to_string())?;
    let report = run_suite(
        &pairs,
        |p| Naive32.evaluate(p.f, &p.args),
        &SuiteOptions::default(),
    );
    let accurate = report.count(FunctionId::Cbrt, Level::Accurate);
    let valid = report.count(FunctionId::Cbrt, Level::Valid);
    let bad = report.count(FunctionId::Cbrt, Level::Nonconforming);
    let tightest_claim = check_claim(&report, Level::Tightest);
    let accurate_claim = check_claim(&report, Level::Accurate);
    let summary = format!(
        "{} pairs: {} tightest, {accurate} accurate, {valid} valid, {bad} nonconforming",
        pairs.len(),
        report.count(FunctionId::Cbrt, Level::Tightest)
    );
    if accurate >= 1 && bad == 0 && !tightest_claim && accurate_claim {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn self_consistency() -> Outcome {
    let cfg = OracleConfig::default();
    let mut total = 0;
    for f in FunctionId::ALL {
        for format in Format::ALL {
            let pairs = gen_function_suite(&SuiteSpec::new(f, format).with_seed(8), &cfg)
                .map_err(|e| e.to_string())?;
            let bad: Vec<String> = pairs
                .par_iter()
                .filter_map(|p| match kernel::evaluate(p.f, &p.args) {
                    Ok(z) if z == p.y => None,
                    Ok(z) => Some(format!("{f} {:?}: {z} vs {}", p.args, p.y)),
                    Err(e) => Some(format!("{f}: {e}")),
                })
                .collect();
            if let Some(e) = bad.first() {
                return Err(format!("{} pairs below tightest, first: {e}", bad.len()));
            }
            total += pairs.len();
        }
    }
    Ok(format!("{total} pairs tightest"))
}

fn range_diagnostics() -> Outcome {
    let cfg = OracleConfig::default();
    let sin = TestingPair::from_oracle(FunctionId::Sin, vec![iv(0.0, 10.0)], "", &cfg).map_err(|e| e.to_string())?;
    let exp = TestingPair::from_oracle(FunctionId::Exp, vec![iv(-1e9, 0.0)], "", &cfg).map_err(|e| e.to_string())?;
    if range_sanity(&sin).is_empty() || range_sanity(&exp).is_empty() {
        return Err("no warning for a published pair".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-700.0..700.0);
        let b: f64 = rng.gen_range(-700.0..700.0);
        let p = TestingPair::from_oracle(FunctionId::Exp, vec![iv(a.min(b), a.max(b))], "", &cfg)
            .map_err(|e| e.to_string())?;
        if let Some(w) = range_sanity(&p).first() {
            return Err(format!("spurious warning: {w}"));
        }
    }
    Ok("2 warnings fired, 100 in-range exp pairs silent".into())
}

fn precision_independence() -> Outcome {
    let mut compared = 0;
    for format in Format::ALL {
        let p = format.precision() as u64;
        let cfgs: Vec<OracleConfig> = [p + 1, 2 * p + 10, 256]
            .into_iter()
            .map(|q| OracleConfig {
                q_start: Some(q),
                ..OracleConfig::default()
            })
            .collect();
        for f in FunctionId::ELEMENTARY {
            let bad: Vec<String> = (0..1000u64)
                .into_par_iter()
                .filter_map(|i| {
                    let args = pairgen::random_args(f, format, 10_000_000 + i);
                    let outs: Vec<_> = cfgs.iter().map(|c| tightest_hull(f, &args, c)).collect();
                    if outs.iter().all(|o| *o == outs[0]) && outs[0].is_ok() {
                        None
                    } else {
                        Some(format!("{f} {format} {args:?}: {outs:?}"))
                    }
                })
                .collect();
            if let Some(e) = bad.first() {
                return Err(format!("{} disagreements, first: {e}", bad.len()));
            }
            compared += 1000;
        }
    }
    Ok(format!("{compared} inputs identical at three starting precisions"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 sin envelope", sin_envelope, Duration::from_secs(1)),
        ("2 exp envelope", exp_envelope, Duration::from_secs(1)),
        ("3 basic ops vs exact rationals", basic_vs_rationals, Duration::from_secs(30)),
        ("4 nextOut properties", nextout_properties, Duration::from_secs(10)),
        ("5 mode lattice", mode_lattice, Duration::from_secs(10)),
        ("6 suite scale", suite_scale, Duration::from_secs(300)),
        ("7 double rounding", double_rounding, Duration::from_secs(30)),
        ("8 self-consistency", self_consistency, Duration::from_secs(300)),
        ("9 range diagnostics", range_diagnostics, Duration::from_secs(60)),
        ("10 precision independence", precision_independence, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {name} [{:.2}s / limit {}s]: {detail}", elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
