//! Test cases for `nextOut`, with expected outputs from an arithmetic
//! characterization of format neighbours that never looks at encodings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::Format;
use crate::hp::Dyadic;
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NextOutCategory {
    /// Specific and exceptional endpoint values.
    Special,
    Random,
    /// Empty, entire and malformed intervals.
    SetCase,
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NextOutInput {
    Interval(Interval),
    /// Endpoints the interval constructor must refuse.
    Invalid { inf: f64, sup: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NextOutExpected {
    Interval(Interval),
    Rejected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NextOutCase {
    pub category: NextOutCategory,
    pub label: String,
    pub format: Format,
    pub input: NextOutInput,
    pub expected: NextOutExpected,
}

impl NextOutCase {
    /// Runs the case against a `nextOut` implementation.
    pub fn check(&self, next_out: impl Fn(&Interval) -> Interval) -> Result<(), String> {
        match (&self.input, &self.expected) {
            (NextOutInput::Interval(x), NextOutExpected::Interval(want)) => {
                let got = next_out(x);
                if got == *want {
                    Ok(())
                } else {
                    Err(format!("{}: nextOut({x}) = {got}, expected {want}", self.label))
                }
            }
            (NextOutInput::Invalid { inf, sup }, NextOutExpected::Rejected) => {
                match Interval::new(*inf, *sup, self.format) {
                    Err(_) => Ok(()),
                    Ok(x) => Err(format!("{}: constructor accepted {x}", self.label)),
                }
            }
            _ => Err(format!("{}: inconsistent case", self.label)),
        }
    }
}

/// Spacing of `format` values in the binade holding `a > 0`, or the binade
/// just below `a` when `below` is set.
fn quantum(a: &Dyadic, format: Format, below: bool) -> Dyadic {
    let p = format.precision() as i64;
    let mut e = a.ilog2().expect("positive");
    if below && a.mantissa().count_ones() == 1 {
        e -= 1;
    }
    Dyadic::pow2(e.max(format.emin()) - (p - 1))
}

/// Least `format` value greater than `x`, from the ulp formula.
pub fn successor(x: f64, format: Format) -> f64 {
    let max = format.max_finite();
    if x == f64::NEG_INFINITY {
        return -max;
    }
    if x == f64::INFINITY || x == max {
        return f64::INFINITY;
    }
    let d = Dyadic::from_f64(x).expect("finite");
    if d.is_zero() {
        return format.min_subnormal();
    }
    let r = if d.is_negative() {
        let a = d.abs();
        a.sub(&quantum(&a, format, true)).mul(&Dyadic::from_i64(-1))
    } else {
        d.add(&quantum(&d, format, false))
    };
    r.to_f64_lossy() + 0.0
}

/// Greatest `format` value less than `x`, from the ulp formula.
pub fn predecessor(x: f64, format: Format) -> f64 {
    let max = format.max_finite();
    if x == f64::INFINITY {
        return max;
    }
    if x == f64::NEG_INFINITY || x == -max {
        return f64::NEG_INFINITY;
    }
    let d = Dyadic::from_f64(x).expect("finite");
    if d.is_zero() {
        return -format.min_subnormal();
    }
    let r = if d.is_negative() {
        d.sub(&quantum(&d.abs(), format, false))
    } else {
        d.sub(&quantum(&d, format, true))
    };
    r.to_f64_lossy() + 0.0
}

/// Expected `nextOut(x)` from the neighbour formulas.
pub fn expected_next_out(x: &Interval) -> Interval {
    match x.bounds() {
        None => *x,
        Some((a, b)) => {
            let f = x.format();
            let lo = if a == f64::NEG_INFINITY { a } else { predecessor(a, f) };
            let hi = if b == f64::INFINITY { b } else { successor(b, f) };
            Interval::new(lo, hi, f).expect("widened interval")
        }
    }
}

/// Special endpoint values of `format`: zeros, extreme finite values,
/// infinities and every power of two.
pub fn special_values(format: Format) -> Vec<f64> {
    let mut v = vec![
        0.0,
        format.min_subnormal(),
        format.min_normal(),
        format.max_finite(),
        f64::INFINITY,
        1.0,
    ];
    let lo = format.subnormal_exponent();
    for e in lo..=format.emax() {
        v.push(2f64.powi(e as i32).max(format.min_subnormal()));
    }
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    v.extend(neg);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn random_finite(rng: &mut ChaCha8Rng, format: Format) -> f64 {
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

/// Cases in four categories: special endpoints, random endpoints, set
/// cases (∅, ℝ, malformed) and negation symmetry.
pub fn gen_nextout_suite(format: Format, n_random: usize, seed: u64) -> Vec<NextOutCase> {
    let mut out = Vec::new();
    let case = |category, label: String, x: Interval| NextOutCase {
        category,
        label,
        format,
        input: NextOutInput::Interval(x),
        expected: NextOutExpected::Interval(expected_next_out(&x)),
    };
    let specials = special_values(format);
    for &s in &specials {
        if s.is_finite() {
            let x = Interval::new(s, s, format).expect("finite point");
            out.push(case(NextOutCategory::Special, format!("point {s:e}"), x));
        }
        if s != f64::INFINITY {
            let x = Interval::new(s, f64::INFINITY, format).expect("half line");
            out.push(case(NextOutCategory::Special, format!("[{s:e}, inf]"), x));
        }
        if s != f64::NEG_INFINITY {
            let x = Interval::new(f64::NEG_INFINITY, s, format).expect("half line");
            out.push(case(NextOutCategory::Special, format!("[-inf, {s:e}]"), x));
        }
    }
    out.push(case(NextOutCategory::SetCase, "empty".into(), Interval::empty(format)));
    out.push(case(NextOutCategory::SetCase, "entire".into(), Interval::entire(format)));
    for (inf, sup) in [
        (1.0, 0.0),
        (f64::NAN, 1.0),
        (0.0, f64::NAN),
        (f64::INFINITY, f64::INFINITY),
        (f64::NEG_INFINITY, f64::NEG_INFINITY),
        (f64::INFINITY, f64::NEG_INFINITY),
    ] {
        out.push(NextOutCase {
            category: NextOutCategory::SetCase,
            label: format!("invalid [{inf}, {sup}]"),
            format,
            input: NextOutInput::Invalid { inf, sup },
            expected: NextOutExpected::Rejected,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n_random {
        let a = random_finite(&mut rng, format);
        let b = random_finite(&mut rng, format);
        let (a, b) = (a.min(b), a.max(b));
        let x = Interval::new(a, b, format).expect("ordered");
        let want = expected_next_out(&x);
        out.push(NextOutCase {
            category: NextOutCategory::Random,
            label: format!("random #{i}"),
            format,
            input: NextOutInput::Interval(x),
            expected: NextOutExpected::Interval(want),
        });
        out.push(NextOutCase {
            category: NextOutCategory::Symmetry,
            label: format!("symmetry #{i}"),
            format,
            input: NextOutInput::Interval(x.neg()),
            expected: NextOutExpected::Interval(want.neg()),
        });
    }
    out
}
