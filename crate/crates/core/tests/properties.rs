use interval_conform::conformance::{
    classify, predicates, run_suite, Level, SuiteOptions, TestingPair,
};
use interval_conform::kernel;
use interval_conform::oracle::{tightest_hull, OracleConfig};
use interval_conform::pairgen::io::{format_record, parse_record};
use interval_conform::reference;
use interval_conform::rounding::{next_down, next_out, next_up};
use interval_conform::{Format, FunctionId, Interval};
use proptest::prelude::*;

fn value(format: Format) -> impl Strategy<Value = f64> {
    let bits = match format {
        Format::Binary64 => any::<u64>().prop_map(f64::from_bits).boxed(),
        Format::Binary32 => any::<u32>().prop_map(|b| f32::from_bits(b) as f64).boxed(),
    };
    let small = (-40i32..40, 1.0f64..2.0, any::<bool>()).prop_map(move |(e, m, neg)| {
        let x = m * 2f64.powi(e);
        let x = if format == Format::Binary32 { x as f32 as f64 } else { x };
        if neg {
            -x
        } else {
            x
        }
    });
    let special = prop::sample::select(vec![0.0, 1.0, -1.0, f64::INFINITY, f64::NEG_INFINITY, 0.5, 3.0]);
    prop_oneof![3 => bits, 5 => small, 1 => special].prop_filter("not NaN", |x| !x.is_nan())
}

fn interval(format: Format) -> impl Strategy<Value = Interval> {
    (value(format), value(format), 0u8..16).prop_filter_map("valid interval", move |(a, b, k)| {
        if k == 0 {
            return Some(Interval::empty(format));
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(a, b, format).ok()
    })
}

fn b64() -> impl Strategy<Value = Interval> {
    interval(Format::Binary64)
}

fn any_format_interval() -> impl Strategy<Value = Interval> {
    prop_oneof![interval(Format::Binary64), interval(Format::Binary32)]
}

/// A member of `x`, chosen among endpoints and an interior point.
fn member(x: &Interval, pick: u8) -> Option<f64> {
    let (a, b) = x.bounds()?;
    let v = match pick % 3 {
        0 => a,
        1 => b,
        _ => a / 2.0 + b / 2.0,
    };
    let v = if x.format() == Format::Binary32 { v as f32 as f64 } else { v };
    (v.is_finite() && x.contains(v)).then_some(v)
}

const UNARY: [FunctionId; 8] = [
    FunctionId::Neg,
    FunctionId::Sqrt,
    FunctionId::Sqr,
    FunctionId::Recip,
    FunctionId::Cbrt,
    FunctionId::Exp,
    FunctionId::Sin,
    FunctionId::Atanh,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn kernel_encloses_point_images(x in any_format_interval(), fi in 0usize..8, pick in any::<u8>()) {
        let f = UNARY[fi];
        if let Some(v) = member(&x, pick) {
            let point = Interval::new(v, v, x.format()).unwrap();
            let at_v = tightest_hull(f, &[point], &OracleConfig::default()).unwrap();
            let over_x = kernel::evaluate(f, &[x]).unwrap();
            prop_assert!(at_v.is_subset(&over_x), "{f}: {at_v} not in {over_x}");
        }
    }

    #[test]
    fn basic_ops_are_tightest(x in b64(), y in b64(), z in b64(), fi in 0usize..7) {
        let f = [FunctionId::Add, FunctionId::Sub, FunctionId::Mul, FunctionId::Div,
                 FunctionId::Recip, FunctionId::Sqr, FunctionId::Fma][fi];
        let args: Vec<Interval> = [x, y, z][..f.arity()].to_vec();
        let want = reference::hull(f, &args).unwrap();
        prop_assert_eq!(kernel::evaluate(f, &args).unwrap(), want);
    }

    #[test]
    fn inclusion_monotonicity(x in any_format_interval(), y in any_format_interval(), fi in 0usize..8) {
        let f = UNARY[fi];
        // x is compared with its hull with y, which always contains it.
        if let (Some((a, b)), Some((c, d))) = (x.bounds(), y.bounds()) {
            if x.format() == y.format() {
                let hull = Interval::new(a.min(c), b.max(d), x.format()).unwrap();
                let fx = kernel::evaluate(f, &[x]).unwrap();
                let fh = kernel::evaluate(f, &[hull]).unwrap();
                prop_assert!(fx.is_subset(&fh), "{f}: {fx} not in {fh}");
            }
        }
    }

    #[test]
    fn odd_functions_commute_with_negation(x in any_format_interval(), fi in 0usize..4) {
        let f = [FunctionId::Neg, FunctionId::Cbrt, FunctionId::Sin, FunctionId::Atanh][fi];
        let a = kernel::evaluate(f, &[x.neg()]).unwrap();
        let b = kernel::evaluate(f, &[x]).unwrap().neg();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn empty_propagates(x in b64(), fi in 0usize..13, slot in 0usize..3) {
        let f = FunctionId::ALL[fi];
        let mut args = vec![x; f.arity()];
        args[slot % f.arity()] = Interval::empty(Format::Binary64);
        prop_assert!(kernel::evaluate(f, &args).unwrap().is_empty());
    }

    #[test]
    fn next_out_laws(x in any_format_interval()) {
        let y = next_out(&x);
        prop_assert_eq!(next_out(&x.neg()), y.neg());
        prop_assert!(x.is_subset(&y));
        if let Some((a, b)) = x.bounds() {
            let f = x.format();
            for v in [a, b].into_iter().filter(|v| v.is_finite()) {
                prop_assert_eq!(next_down(next_up(v, f).unwrap(), f).unwrap(), v);
                prop_assert!(next_up(v, f).unwrap() > v);
            }
        }
    }

    #[test]
    fn verdicts_are_coherent(x in b64(), zlo in any::<i8>(), zhi in any::<i8>(), fi in 0usize..4) {
        let f = FunctionId::ELEMENTARY[fi];
        let pair = TestingPair::from_oracle(f, vec![x], "", &OracleConfig::default()).unwrap();
        // Move each endpoint of y by a few steps in either direction.
        let walk = |v: f64, k: i8| (0..k.unsigned_abs() % 4).fold(v, |v, _| {
            if k < 0 { next_down(v, Format::Binary64).unwrap() } else { next_up(v, Format::Binary64).unwrap() }
        });
        let z = match pair.y.bounds() {
            Some((a, b)) => Interval::new(walk(a, zlo), walk(b, zhi), Format::Binary64).unwrap_or(pair.y),
            None => pair.y,
        };
        let p = predicates(&z, &pair);
        let acc = p.accurate.unwrap();
        prop_assert!(!p.tightest || acc);
        prop_assert!(!acc || p.valid);
        let v = classify(&z, &pair).unwrap();
        let expect = if p.tightest { Level::Tightest } else if acc { Level::Accurate }
            else if p.valid { Level::Valid } else { Level::Nonconforming };
        prop_assert_eq!(v.level, expect);
    }

    #[test]
    fn report_counts_ignore_order(xs in prop::collection::vec(b64(), 1..12), rot in 0usize..12) {
        let cfg = OracleConfig::default();
        let pairs: Vec<TestingPair> = xs
            .into_iter()
            .map(|x| TestingPair::from_oracle(FunctionId::Exp, vec![x], "", &cfg).unwrap())
            .collect();
        let eval = |p: &TestingPair| Ok(next_out(&p.y));
        let a = run_suite(&pairs, eval, &SuiteOptions::default());
        let mut shuffled = pairs.clone();
        shuffled.rotate_left(rot % pairs.len());
        let b = run_suite(&shuffled, eval, &SuiteOptions::default());
        prop_assert_eq!(&a.counts, &b.counts);
        prop_assert_eq!(a.executed(), pairs.len());
    }

    #[test]
    fn records_round_trip(x in any_format_interval(), fi in 0usize..4) {
        let f = FunctionId::ELEMENTARY[fi];
        let pair = TestingPair::from_oracle(f, vec![x], "random", &OracleConfig::default()).unwrap();
        prop_assert_eq!(parse_record(&format_record(&pair)).unwrap(), pair);
    }
}
