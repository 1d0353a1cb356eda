//! Testing-pair suites: special inputs, extremum-adjacent intervals and
//! seeded random intervals, each paired with oracle outputs.

pub mod io;
pub mod nextout;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conformance::TestingPair;
use crate::format::Format;
use crate::function::{Domain, FunctionId};
use crate::interval::Interval;
use crate::oracle::{OracleConfig, OracleError};
use crate::rounding::{self, Direction};

pub use io::{read_pairs, write_pairs, PairFile, PairHeader, ParseError};
pub use nextout::{gen_nextout_suite, NextOutCase, NextOutCategory};

pub const DEFAULT_RANDOM_PAIRS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteSpec {
    pub f: FunctionId,
    pub format: Format,
    pub n_random: usize,
    pub seed: u64,
    pub include_specials: bool,
    /// Only used for sine.
    pub include_extrema: bool,
    /// Adds negated-argument pairs for odd unary functions.
    pub include_symmetry: bool,
}

impl SuiteSpec {
    pub fn new(f: FunctionId, format: Format) -> Self {
        SuiteSpec {
            f,
            format,
            n_random: DEFAULT_RANDOM_PAIRS,
            seed: 0,
            include_specials: true,
            include_extrema: true,
            include_symmetry: true,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SuiteSpec { seed, ..self }
    }

    pub fn with_random(self, n_random: usize) -> Self {
        SuiteSpec { n_random, ..self }
    }
}

/// Builds the suite described by `spec`. Output depends only on
/// `(spec, cfg)`; random pair `i` is drawn from a generator seeded with
/// `seed + i`, so the result does not depend on the number of threads.
pub fn gen_function_suite(spec: &SuiteSpec, cfg: &OracleConfig) -> Result<Vec<TestingPair>, OracleError> {
    let mut inputs: Vec<(Vec<Interval>, &'static str)> = Vec::new();
    if spec.include_specials {
        inputs.extend(specials(spec.f, spec.format).into_iter().map(|a| (a, "special")));
    }
    if spec.include_extrema && spec.f == FunctionId::Sin {
        inputs.extend(sin_extrema(spec.format).into_iter().map(|a| (vec![a], "extremum")));
    }
    let random: Vec<Vec<Interval>> = (0..spec.n_random as u64)
        .into_par_iter()
        .map(|i| random_args(spec.f, spec.format, spec.seed.wrapping_add(i)))
        .collect();
    if spec.include_symmetry && spec.f.is_odd() && spec.f.arity() == 1 {
        let negated: Vec<Vec<Interval>> = random.iter().map(|a| vec![a[0].neg()]).collect();
        inputs.extend(random.into_iter().map(|a| (a, "random")));
        inputs.extend(negated.into_iter().map(|a| (a, "symmetry")));
    } else {
        inputs.extend(random.into_iter().map(|a| (a, "random")));
    }
    inputs
        .into_par_iter()
        .map(|(args, tag)| TestingPair::from_oracle(spec.f, args, tag, cfg))
        .collect()
}

/// Random arguments for `f`, drawn from a generator seeded with `seed`.
pub fn random_args(f: FunctionId, format: Format, seed: u64) -> Vec<Interval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..f.arity()).map(|k| random_interval(&mut rng, f, k, format)).collect()
}

fn iv(a: f64, b: f64, format: Format) -> Interval {
    let lo = narrow(a, format, Direction::Down);
    let hi = narrow(b, format, Direction::Up);
    Interval::new(lo, hi, format).expect("special interval is well formed")
}

/// `x` rounded into `format` in direction `dir`.
fn narrow(x: f64, format: Format, dir: Direction) -> f64 {
    match format {
        Format::Binary64 => x,
        Format::Binary32 => {
            let n = x as f32 as f64;
            match dir {
                Direction::Down if n > x => rounding::step(n, format, Direction::Down),
                Direction::Up if n < x => rounding::step(n, format, Direction::Up),
                _ => n,
            }
        }
    }
}

fn common_unary(format: Format) -> Vec<Interval> {
    let inf = f64::INFINITY;
    let tiny = format.min_subnormal();
    let normal = format.min_normal();
    let max = format.max_finite();
    vec![
        Interval::empty(format),
        Interval::entire(format),
        iv(0.0, 0.0, format),
        iv(1.0, 1.0, format),
        iv(-1.0, -1.0, format),
        iv(-1.0, 1.0, format),
        iv(0.5, 2.0, format),
        iv(tiny, tiny, format),
        iv(-tiny, tiny, format),
        iv(normal, normal, format),
        iv(-normal, -normal, format),
        iv(max, max, format),
        iv(-max, max, format),
        iv(-inf, 0.0, format),
        iv(0.0, inf, format),
        iv(-inf, -1.0, format),
        iv(1.0, inf, format),
    ]
}

fn specials(f: FunctionId, format: Format) -> Vec<Vec<Interval>> {
    let inf = f64::INFINITY;
    let unary = |extra: Vec<(f64, f64)>| -> Vec<Vec<Interval>> {
        common_unary(format)
            .into_iter()
            .chain(extra.into_iter().map(|(a, b)| iv(a, b, format)))
            .map(|x| vec![x])
            .collect()
    };
    let b32 = format == Format::Binary32;
    match f {
        FunctionId::Exp => unary(vec![
            (-1e9, 0.0),
            (-1e9, -1e9),
            (if b32 { 88.0 } else { 709.0 }, if b32 { 89.0 } else { 710.0 }),
            (if b32 { -104.0 } else { -746.0 }, if b32 { -103.0 } else { -745.0 }),
            (-1e-30, 1e-30),
            (1e-20, 1e-20),
            (-2.0, 3.0),
        ]),
        FunctionId::Sin => unary(vec![
            (0.0, 10.0),
            (3.0, 4.0),
            (1e22, 1e22),
            (2f64.powi(100), 2f64.powi(100)),
            (-1e-30, 1e-30),
            (1e6, 1e6 + 1.0),
        ]),
        FunctionId::Cbrt => unary(vec![
            (8.0, 8.0),
            (-27.0, 8.0),
            (2.0, 2.0),
            (0.125, 1000.0),
            (1e-300, 1e-300),
            (-1e30, -1e20),
        ]),
        FunctionId::Atanh => unary(vec![
            (1.0, 2.0),
            (-2.0, -1.0),
            (-2.0, 2.0),
            (0.5, 1.0),
            (-1.0, 0.5),
            (0.5, 0.5),
            (-0.75, -0.25),
            (1.0 - 2f64.powi(-24), 1.0 - 2f64.powi(-24)),
            (1e-10, 1e-10),
        ]),
        FunctionId::Sqrt => unary(vec![(-2.0, -1.0), (-1.0, 4.0), (2.0, 2.0), (1e-300, 1e300)]),
        FunctionId::Neg | FunctionId::Sqr | FunctionId::Recip => {
            unary(vec![(-3.0, 0.0), (0.0, 3.0), (0.1, 0.1), (-2.0, 3.0), (1e-310, 1e-300)])
        }
        FunctionId::Add | FunctionId::Sub | FunctionId::Mul | FunctionId::Div => {
            let pool = binary_pool(format);
            let mut out = Vec::new();
            for a in &pool {
                for b in &pool {
                    out.push(vec![*a, *b]);
                }
            }
            out
        }
        FunctionId::Fma => {
            let pool = [
                Interval::empty(format),
                Interval::entire(format),
                iv(0.0, 0.0, format),
                iv(-1.0, 2.0, format),
                iv(0.0, inf, format),
                iv(0.1, 0.1, format),
                iv(format.max_finite(), format.max_finite(), format),
            ];
            let mut out = Vec::new();
            for a in &pool {
                for b in &pool {
                    for c in &pool {
                        out.push(vec![*a, *b, *c]);
                    }
                }
            }
            out
        }
    }
}

fn binary_pool(format: Format) -> Vec<Interval> {
    let inf = f64::INFINITY;
    let tiny = format.min_subnormal();
    let max = format.max_finite();
    vec![
        Interval::empty(format),
        Interval::entire(format),
        iv(0.0, 0.0, format),
        iv(1.0, 2.0, format),
        iv(-2.0, -1.0, format),
        iv(-1.0, 1.0, format),
        iv(-3.0, 0.0, format),
        iv(0.0, 3.0, format),
        iv(0.0, inf, format),
        iv(-inf, 0.0, format),
        iv(max, max, format),
        iv(tiny, tiny, format),
        iv(0.1, 0.1, format),
    ]
}

/// Intervals ending just before, exactly around, and just after the format
/// values nearest the extrema `(k + 1/2)π`.
fn sin_extrema(format: Format) -> Vec<Interval> {
    let mut out = Vec::new();
    let steps = |x: f64, n: i32| -> f64 {
        let dir = if n < 0 { Direction::Down } else { Direction::Up };
        (0..n.unsigned_abs()).fold(x, |v, _| rounding::step(v, format, dir))
    };
    for k in [0i64, 1, 2, 3, 10, -1, -2, 1000, 1_000_000] {
        let c = narrow((k as f64 + 0.5) * std::f64::consts::PI, format, Direction::Down);
        // `(i, j)` covers [c - i, c + j] ulps; a negative `i` means [c + i, c + j].
        for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1), (3, 3), (10, 10), (1, 10), (-10, -1)] {
            let lo = if i < 0 { steps(c, i) } else { steps(c, -i) };
            let hi = steps(c, j);
            out.push(Interval::new(lo, hi, format).expect("ordered"));
        }
        out.push(Interval::new(steps(c, 1), steps(c, 10), format).expect("ordered"));
    }
    let half_pi = narrow(std::f64::consts::FRAC_PI_2, format, Direction::Down);
    let three_half_pi = narrow(3.0 * std::f64::consts::FRAC_PI_2, format, Direction::Up);
    out.push(Interval::new(steps(half_pi, -1), steps(three_half_pi, 1), format).expect("ordered"));
    out
}

/// How random endpoints are drawn.
#[derive(Clone, Copy)]
enum Style {
    /// Uniform over the bit patterns of finite format values.
    Bits,
    /// Uniform significand with the exponent uniform in a window suited to
    /// the function.
    Window(i32, i32),
}

fn window(f: FunctionId, format: Format) -> (i32, i32) {
    let b32 = format == Format::Binary32;
    match f {
        FunctionId::Exp => (-30, if b32 { 7 } else { 10 }),
        FunctionId::Sin => (-20, 30),
        FunctionId::Atanh => (-30, -1),
        FunctionId::Cbrt => (-60, 60),
        _ => (-40, 40),
    }
}

fn random_bits(rng: &mut ChaCha8Rng, format: Format) -> f64 {
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

fn random_window(rng: &mut ChaCha8Rng, format: Format, (lo, hi): (i32, i32)) -> f64 {
    let frac = match format {
        Format::Binary64 => (rng.gen::<u64>() >> 12) as f64 * 2f64.powi(-52),
        Format::Binary32 => (rng.gen::<u32>() >> 9) as f64 * 2f64.powi(-23),
    };
    let e = rng.gen_range(lo..=hi);
    let x = (1.0 + frac) * 2f64.powi(e);
    if rng.gen() {
        -x
    } else {
        x
    }
}

fn random_value(rng: &mut ChaCha8Rng, f: FunctionId, arg: usize, format: Format, style: Style) -> f64 {
    loop {
        let x = match style {
            Style::Bits => random_bits(rng, format),
            Style::Window(lo, hi) => random_window(rng, format, (lo, hi)),
        };
        let last = arg + 1 == f.arity();
        match f.natural_domain() {
            Domain::Reals => return x,
            Domain::NonNegative => return x.abs(),
            Domain::OpenUnit if x.abs() < 1.0 => return x,
            Domain::NonZeroLast if !last || x != 0.0 => return x,
            _ => {}
        }
    }
}

/// One third of the pairs use bit-pattern endpoints, the rest windowed
/// magnitudes; each pair is a general, narrow or point interval.
fn random_interval(rng: &mut ChaCha8Rng, f: FunctionId, arg: usize, format: Format) -> Interval {
    let style = if rng.gen_range(0..3) == 0 {
        Style::Bits
    } else {
        let (lo, hi) = window(f, format);
        Style::Window(lo, hi)
    };
    let a = random_value(rng, f, arg, format, style);
    let (lo, hi) = match rng.gen_range(0..3) {
        0 => {
            let b = random_value(rng, f, arg, format, style);
            (a.min(b), a.max(b))
        }
        1 => {
            let k = rng.gen_range(1..=8);
            let mut b = a;
            for _ in 0..k {
                let next = rounding::step(b, format, Direction::Up);
                if !next.is_finite() || f == FunctionId::Atanh && next >= 1.0 {
                    break;
                }
                b = next;
            }
            (a, b)
        }
        _ => (a, a),
    };
    Interval::new(lo, hi, format).expect("ordered finite endpoints")
}
