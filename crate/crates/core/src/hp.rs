//! Exact dyadic numbers and outward-rounded enclosures.
//!
//! A [`Dyadic`] is `±m · 2^e` with an arbitrary-size integer `m`. Addition,
//! subtraction and multiplication are exact; division and roots are rounded
//! to a requested number of significant bits in a requested direction.
//! [`Enclosure`] pairs two dyadics and rounds every operation outward, which
//! is how the oracle keeps rigorous error bounds without tracking them by hand.

use std::cmp::Ordering;
use std::ops::Neg;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::rounding::Direction;

/// Exact binary rational `(-1)^neg · mant · 2^exp`, kept with an odd
/// mantissa (or the canonical zero) so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    neg: bool,
    mant: BigUint,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::pow2(0)
    }

    pub fn pow2(k: i64) -> Self {
        Dyadic {
            neg: false,
            mant: BigUint::one(),
            exp: k,
        }
    }

    pub fn from_parts(neg: bool, mant: BigUint, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        let (mant, exp) = if tz > 0 {
            (mant >> tz, exp + tz as i64)
        } else {
            (mant, exp)
        };
        Dyadic { neg, mant, exp }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Dyadic::from_parts(v.sign() == Sign::Minus, v.magnitude().clone(), 0)
    }

    /// Exact conversion; `None` for infinities and NaN.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Dyadic::from_parts(neg, BigUint::from(m), e))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.neg {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the (odd) mantissa.
    pub fn significant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            neg: false,
            ..self.clone()
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            exp: self.exp + k,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        if self.neg == other.neg {
            return Dyadic::from_parts(self.neg, a + b, e);
        }
        match a.cmp(&b) {
            Ordering::Equal => Dyadic::zero(),
            Ordering::Greater => Dyadic::from_parts(self.neg, a - b, e),
            Ordering::Less => Dyadic::from_parts(other.neg, b - a, e),
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&-other)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            neg: self.neg != other.neg,
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// Directed rounding to at most `prec` significant bits (unbounded exponent).
    pub fn round(&self, prec: u64, dir: Direction) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        // The mantissa is odd, so dropping any bits is inexact.
        let mut m = &self.mant >> shift;
        if away_from_zero(self.neg, dir) {
            m += 1u32;
        }
        Dyadic::from_parts(self.neg, m, self.exp + shift as i64)
    }

    /// `self / other` rounded to `prec` bits in direction `dir`.
    ///
    /// Panics when `other` is zero.
    pub fn div(&self, other: &Dyadic, prec: u64, dir: Direction) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let neg = self.neg != other.neg;
        let k = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let num = &self.mant << k as u64;
        let (q, r) = num_integer::Integer::div_rem(&num, &other.mant);
        let exp = self.exp - k - other.exp;
        with_sticky(neg, q, exp, !r.is_zero()).round(prec, dir)
    }

    /// Square root rounded to `prec` bits. Panics on negative input.
    pub fn sqrt(&self, prec: u64, dir: Direction) -> Dyadic {
        assert!(!self.neg, "square root of negative dyadic");
        self.root(2, prec, dir)
    }

    /// Real cube root rounded to `prec` bits.
    pub fn cbrt(&self, prec: u64, dir: Direction) -> Dyadic {
        self.root(3, prec, dir)
    }

    fn root(&self, n: u32, prec: u64, dir: Direction) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n64 = n as i64;
        // Scale so the integer root carries at least prec + 2 bits and the
        // exponent is divisible by n.
        let want = n64 * (prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        shift += (self.exp - shift).rem_euclid(n64);
        let scaled = &self.mant << shift as u64;
        let r = scaled.nth_root(n);
        let exact = r.pow(n) == scaled;
        let exp = (self.exp - shift) / n64;
        with_sticky(self.neg, r, exp, !exact).round(prec, dir)
    }

    /// Greatest integer not above the value.
    pub fn floor(&self) -> BigInt {
        let mag = if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        };
        let frac = self.exp < 0 && !self.mant.is_zero();
        if self.neg {
            // mant is odd, so a negative exponent always leaves a fraction.
            let m = BigInt::from_biguint(Sign::Minus, mag);
            if frac {
                m - 1
            } else {
                m
            }
        } else {
            BigInt::from_biguint(Sign::Plus, mag)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn is_integer(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }

    /// Approximate value as `f64`; used only for heuristics such as picking
    /// a reduction multiple, never for bounds.
    pub fn to_f64_lossy(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            ((&self.mant >> (bits - 64)).to_u64().unwrap(), self.exp + bits as i64 - 64)
        } else {
            (self.mant.to_u64().unwrap(), self.exp)
        };
        let v = ldexp(m as f64, e);
        if self.neg {
            -v
        } else {
            v
        }
    }
}

fn away_from_zero(neg: bool, dir: Direction) -> bool {
    matches!((neg, dir), (false, Direction::Up) | (true, Direction::Down))
}

/// Builds a dyadic strictly between `m·2^e` and `(m+1)·2^e` when `sticky`
/// is set. Rounding it to fewer bits than `m` carries gives the same result
/// as rounding the exact value that produced the sticky bit.
fn with_sticky(neg: bool, m: BigUint, e: i64, sticky: bool) -> Dyadic {
    if sticky {
        Dyadic::from_parts(neg, (m << 1u32) + 1u32, e - 1)
    } else {
        Dyadic::from_parts(neg, m, e)
    }
}

/// `x · 2^e` without intermediate overflow or underflow where avoidable.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(mut self) -> Dyadic {
        if !self.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -self.clone()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => return a.cmp(&b),
            (Ordering::Equal, _) => return Ordering::Equal,
            _ => {}
        }
        let mag = cmp_magnitude(self, other);
        if self.neg {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_magnitude(a: &Dyadic, b: &Dyadic) -> Ordering {
    let (la, lb) = (a.ilog2().unwrap(), b.ilog2().unwrap());
    if la != lb {
        return la.cmp(&lb);
    }
    let e = a.exp.min(b.exp);
    let ma = &a.mant << (a.exp - e) as u64;
    let mb = &b.mant << (b.exp - e) as u64;
    ma.cmp(&mb)
}

/// A dyadic extended with the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    NegInf,
    Finite(Dyadic),
    PosInf,
}

impl Ext {
    /// Exact conversion of any non-NaN `f64`.
    pub fn from_f64(x: f64) -> Ext {
        if x == f64::INFINITY {
            Ext::PosInf
        } else if x == f64::NEG_INFINITY {
            Ext::NegInf
        } else {
            Ext::Finite(Dyadic::from_f64(x).expect("NaN has no dyadic value"))
        }
    }

    pub fn zero() -> Ext {
        Ext::Finite(Dyadic::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Finite(d) if d.is_zero())
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Ext::NegInf => Ordering::Less,
            Ext::PosInf => Ordering::Greater,
            Ext::Finite(d) => d.signum(),
        }
    }

    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            Ext::Finite(d) => Some(d),
            _ => None,
        }
    }

    /// Exact sum. Panics on `+∞ + -∞`.
    pub fn add(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a.add(b)),
            (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => {
                panic!("undefined sum of opposite infinities")
            }
            (Ext::Finite(_), inf) | (inf, _) => inf.clone(),
        }
    }

    /// Exact product with the set-based corner convention `0 · ∞ = 0`.
    pub fn mul(&self, other: &Ext) -> Ext {
        if self.is_zero() || other.is_zero() {
            return Ext::zero();
        }
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a.mul(b)),
            _ => {
                if self.signum() == other.signum() {
                    Ext::PosInf
                } else {
                    Ext::NegInf
                }
            }
        }
    }
}

impl Neg for &Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Finite(d) => Ext::Finite(-d),
        }
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.cmp(b),
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn rank(e: &Ext) -> i8 {
    match e {
        Ext::NegInf => -1,
        Ext::Finite(_) => 0,
        Ext::PosInf => 1,
    }
}

/// Closed interval `[lo, hi]` of dyadics; every operation takes a working
/// precision and rounds the lower end down and the upper end up, so the
/// result always contains the exact image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Enclosure {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() != Ordering::Greater && self.hi.signum() != Ordering::Less
    }

    /// Upper bound on `|x|` over the enclosure.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Lower bound on `|x|` over the enclosure.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            if a < b {
                a
            } else {
                b
            }
        }
    }

    pub fn round_out(&self, prec: u64) -> Self {
        Enclosure {
            lo: self.lo.round(prec, Direction::Down),
            hi: self.hi.round(prec, Direction::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, o: &Enclosure, prec: u64) -> Self {
        Enclosure {
            lo: self.lo.add(&o.lo).round(prec, Direction::Down),
            hi: self.hi.add(&o.hi).round(prec, Direction::Up),
        }
    }

    pub fn sub(&self, o: &Enclosure, prec: u64) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Enclosure, prec: u64) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        Enclosure {
            lo: lo.round(prec, Direction::Down),
            hi: hi.round(prec, Direction::Up),
        }
    }

    pub fn sqr(&self, prec: u64) -> Self {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let (small, big) = if a < b { (a, b) } else { (b, a) };
        let lo = if self.contains_zero() {
            Dyadic::zero()
        } else {
            small.round(prec, Direction::Down)
        };
        Enclosure {
            lo,
            hi: big.round(prec, Direction::Up),
        }
    }

    /// Panics when the divisor encloses zero.
    pub fn div(&self, o: &Enclosure, prec: u64) -> Self {
        assert!(!o.contains_zero(), "divisor enclosure contains zero");
        let corners = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = corners
            .iter()
            .map(|(a, b)| a.div(b, prec, Direction::Down))
            .min()
            .unwrap();
        let hi = corners
            .iter()
            .map(|(a, b)| a.div(b, prec, Direction::Up))
            .max()
            .unwrap();
        Enclosure { lo, hi }
    }

    pub fn div_u64(&self, n: u64, prec: u64) -> Self {
        self.div(&Enclosure::point(Dyadic::from_i64(n as i64)), prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Enclosure {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    /// Widens by `[-err, +err]`.
    pub fn widen(&self, err: &Dyadic, prec: u64) -> Self {
        Enclosure {
            lo: self.lo.sub(err).round(prec, Direction::Down),
            hi: self.hi.add(err).round(prec, Direction::Up),
        }
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, o: &Enclosure) -> Self {
        Enclosure {
            lo: if self.lo < o.lo {
                self.lo.clone()
            } else {
                o.lo.clone()
            },
            hi: if self.hi > o.hi {
                self.hi.clone()
            } else {
                o.hi.clone()
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn exact_ops_match_f64_when_representable() {
        assert_eq!(d(1.5).add(&d(2.25)), d(3.75));
        assert_eq!(d(1.5).sub(&d(2.25)), d(-0.75));
        assert_eq!(d(-1.5).mul(&d(2.25)), d(-3.375));
        assert_eq!(d(0.0).add(&d(-0.0)), Dyadic::zero());
        assert_eq!(d(f64::from_bits(1)), Dyadic::pow2(-1074));
        assert_eq!(d(3.0).add(&d(-3.0)), Dyadic::zero());
    }

    #[test]
    fn ordering() {
        let xs = [-1e300, -2.5, -1e-310, 0.0, 1e-320, 0.75, 1.0, 3.0, 1e308];
        for a in xs {
            for b in xs {
                assert_eq!(d(a).cmp(&d(b)), a.partial_cmp(&b).unwrap(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn directed_rounding() {
        // 1 + 2^-60 at 53 bits
        let x = Dyadic::one().add(&Dyadic::pow2(-60));
        assert_eq!(x.round(53, Direction::Down), Dyadic::one());
        assert_eq!(x.round(53, Direction::Up), d(1.0 + f64::EPSILON));
        let y = -x;
        assert_eq!(y.round(53, Direction::Up), d(-1.0));
        assert_eq!(y.round(53, Direction::Down), d(-1.0 - f64::EPSILON));
    }

    #[test]
    fn division_brackets_one_third() {
        let lo = Dyadic::one().div(&d(3.0), 53, Direction::Down);
        let hi = Dyadic::one().div(&d(3.0), 53, Direction::Up);
        assert!(lo < hi);
        assert_eq!(lo.mul(&d(3.0)).cmp(&Dyadic::one()), Ordering::Less);
        assert_eq!(hi.mul(&d(3.0)).cmp(&Dyadic::one()), Ordering::Greater);
        assert_eq!(d(6.0).div(&d(-3.0), 10, Direction::Up), d(-2.0));
    }

    #[test]
    fn roots() {
        assert_eq!(d(16.0).sqrt(30, Direction::Down), d(4.0));
        assert_eq!(d(-27.0).cbrt(30, Direction::Up), d(-3.0));
        assert_eq!(d(0.125).cbrt(30, Direction::Up), d(0.5));
        let lo = d(2.0).sqrt(53, Direction::Down);
        let hi = d(2.0).sqrt(53, Direction::Up);
        assert!(lo.mul(&lo) < d(2.0) && hi.mul(&hi) > d(2.0));
        assert_eq!(hi.sub(&lo), Dyadic::pow2(-52));
        // cbrt of a value whose exponent is not a multiple of three
        let lo = d(2.0).cbrt(80, Direction::Down);
        let hi = d(2.0).cbrt(80, Direction::Up);
        assert!(lo.mul(&lo).mul(&lo) < d(2.0));
        assert!(hi.mul(&hi).mul(&hi) > d(2.0));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(2.5).floor(), BigInt::from(2));
        assert_eq!(d(-2.5).floor(), BigInt::from(-3));
        assert_eq!(d(-2.5).ceil(), BigInt::from(-2));
        assert_eq!(d(-2.0).floor(), BigInt::from(-2));
        assert_eq!(d(1e20).floor(), BigInt::from(100_000_000_000_000_000_000u128));
    }

    #[test]
    fn lossy_conversion() {
        for x in [1.0, -3.5, 1e-300, 5e-324, 1.7e308, 0.1] {
            assert_eq!(d(x).to_f64_lossy(), x);
        }
    }

    #[test]
    fn enclosure_ops_contain_exact() {
        let a = Enclosure::new(d(-1.0), d(2.0));
        let b = Enclosure::new(d(3.0), d(4.0));
        let p = a.mul(&b, 20);
        assert_eq!((p.lo, p.hi), (d(-4.0), d(8.0)));
        let q = a.div(&b, 20);
        assert_eq!(q.lo, d(-1.0 / 3.0).round(20, Direction::Down).min(d(-0.25)));
        assert!(a.contains_zero());
        assert_eq!(a.sqr(10).lo, Dyadic::zero());
        assert_eq!(a.mag(), d(2.0));
    }

    #[test]
    fn ext_conventions() {
        let z = Ext::zero();
        assert_eq!(z.mul(&Ext::PosInf), Ext::zero());
        assert_eq!(Ext::from_f64(-2.0).mul(&Ext::PosInf), Ext::NegInf);
        assert!(Ext::NegInf < Ext::from_f64(-1e308));
        assert!(Ext::from_f64(1e308) < Ext::PosInf);
    }
}
