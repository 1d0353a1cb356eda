//! Enclosures of `exp`, `sin`, `cos`, `ln`, `atanh` and `cbrt` at a dyadic
//! point, at a requested working precision.
//!
//! Every routine returns an [`Enclosure`] whose relative width is roughly
//! `2^-w`; truncation errors of the series are bounded explicitly and added
//! to the enclosure.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;

use super::consts;
use crate::hp::{Dyadic, Enclosure};
use crate::rounding::Direction;

fn half() -> Dyadic {
    Dyadic::pow2(-1)
}

/// `|x| < 2^-(w/2 + 1)`, where second-order brackets are already tight.
fn is_tiny(x: &Dyadic, w: u64) -> bool {
    x.ilog2().map_or(true, |e| e < -(w as i64 / 2) - 1)
}

/// `exp(t)` for `|t| ≤ 1/2`.
fn exp_taylor(t: &Enclosure, w: u64) -> Enclosure {
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let mut sum = Enclosure::point(Dyadic::one());
    let mut term = sum.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(t, w).div_u64(k, w);
        let m = term.mag();
        if m < eps {
            // Σ_{j≥k} |t|^j/j! ≤ 2|t|^k/k! when |t| ≤ 1/2.
            return sum.widen(&m.mul_pow2(1), w);
        }
        sum = sum.add(&term, w);
        k += 1;
    }
}

/// `sin(r)` for `|r| ≤ 1`; the series alternates with decreasing terms.
fn sin_taylor(r: &Enclosure, w: u64) -> Enclosure {
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let r2 = r.sqr(w);
    let mut sum = r.clone();
    let mut term = r.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&r2, w).div_u64((2 * k) * (2 * k + 1), w).neg();
        let m = term.mag();
        if m < eps {
            return sum.widen(&m, w);
        }
        sum = sum.add(&term, w);
        k += 1;
    }
}

/// `cos(r)` for `|r| ≤ 1`.
fn cos_taylor(r: &Enclosure, w: u64) -> Enclosure {
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let r2 = r.sqr(w);
    let mut sum = Enclosure::point(Dyadic::one());
    let mut term = sum.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&r2, w).div_u64((2 * k - 1) * (2 * k), w).neg();
        let m = term.mag();
        if m < eps {
            return sum.widen(&m, w);
        }
        sum = sum.add(&term, w);
        k += 1;
    }
}

/// `Σ t^(2k+1)/(2k+1)` for `|t| ≤ 1/2`.
fn atanh_series(t: &Enclosure, w: u64) -> Enclosure {
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let t2 = t.sqr(w);
    let mut sum = t.clone();
    let mut power = t.clone();
    let mut k = 1u64;
    loop {
        power = power.mul(&t2, w);
        let m = power.mag();
        if m < eps {
            // Tail ≤ |t|^(2k+1) / (1 - t²) ≤ 2|t|^(2k+1).
            return sum.widen(&m.mul_pow2(1), w);
        }
        sum = sum.add(&power.div_u64(2 * k + 1, w), w);
        k += 1;
    }
}

/// `e^x` for finite `x` with `|x| ≤ 2^20`.
pub(crate) fn exp(x: &Dyadic, w: u64) -> Enclosure {
    if is_tiny(x, w) {
        // 1 + x ≤ e^x ≤ 1 + x + x² for |x| ≤ 1/2.
        let lo = Dyadic::one().add(x);
        let hi = lo.add(&x.mul(x));
        return Enclosure::new(lo, hi);
    }
    let wp = w + 32;
    let k = (x.to_f64_lossy() / std::f64::consts::LN_2).round() as i64;
    let l = consts::ln2(wp + 24);
    let kl = l.mul(&Enclosure::point(Dyadic::from_i64(k)), wp + 24);
    let r = Enclosure::point(x.clone()).sub(&kl, wp + 24);
    // |r| ≤ 0.35 + ε; halving 8 times gives |t| < 2^-9.
    let s = 8;
    let t = r.mul_pow2(-s).round_out(wp);
    let mut e = exp_taylor(&t, wp);
    for _ in 0..s {
        e = e.sqr(wp);
    }
    e.mul_pow2(k).round_out(w + 8)
}

/// Natural logarithm of a positive dyadic.
fn ln(y: &Dyadic, w: u64) -> Enclosure {
    let mut e = y.ilog2().expect("positive argument");
    let mut m = y.mul_pow2(-e);
    if m >= Dyadic::from_i64(3).mul_pow2(-1) {
        m = m.mul_pow2(-1);
        e += 1;
    }
    let wp = w + 16;
    let num = Enclosure::point(m.sub(&Dyadic::one()));
    let den = Enclosure::point(m.add(&Dyadic::one()));
    let t = num.div(&den, wp);
    let s = atanh_series(&t, wp).mul_pow2(1);
    if e == 0 {
        return s;
    }
    let extra = 64 - e.unsigned_abs().leading_zeros() as u64;
    let el = consts::ln2(wp + extra).mul(&Enclosure::point(Dyadic::from_i64(e)), wp);
    s.add(&el, wp)
}

/// `atanh(x)` for `0 < |x| < 1`.
pub(crate) fn atanh(x: &Dyadic, w: u64) -> Enclosure {
    if is_tiny(x, w) {
        // x ≤ atanh(x) ≤ x + x³/2 for 0 < x ≤ 1/2; odd symmetry otherwise.
        let c = x.mul(x).mul(x).mul_pow2(-1);
        let other = x.add(&c);
        return if x.is_negative() {
            Enclosure::new(other, x.clone())
        } else {
            Enclosure::new(x.clone(), other)
        };
    }
    let wp = w + 16;
    if x.abs() < half() {
        return atanh_series(&Enclosure::point(x.clone()), wp);
    }
    let one = Dyadic::one();
    let a = ln(&one.add(x), wp);
    let b = ln(&one.sub(x), wp);
    a.sub(&b, wp).mul_pow2(-1)
}

/// `sin(x)` for finite nonzero `x`; `pi_guard` extra bits go into the
/// reduction modulo π/2.
pub(crate) fn sin(x: &Dyadic, w: u64, pi_guard: u64) -> Enclosure {
    if is_tiny(x, w) {
        // x - x³/4 ≤ sin(x) ≤ x for 0 < x ≤ 1/2; odd symmetry otherwise.
        let c = x.mul(x).mul(x).mul_pow2(-2);
        let other = x.sub(&c);
        return if x.is_negative() {
            Enclosure::new(x.clone(), other)
        } else {
            Enclosure::new(other, x.clone())
        };
    }
    let wp = w + 16;
    if x.abs() < half() {
        return sin_taylor(&Enclosure::point(x.clone()), wp);
    }
    let ex = x.ilog2().expect("nonzero").max(0) as u64;
    let wr = wp + ex + pi_guard;
    let pi = consts::pi(wr);
    // k ≈ x / (π/2); any nearby integer keeps |r| ≤ 1.
    let approx = x.mul_pow2(1).div(&pi.lo, ex + 16, Direction::Down);
    let k: BigInt = approx.add(&half()).floor();
    let kpi = pi
        .mul(&Enclosure::point(Dyadic::from_bigint(&k)), wr)
        .mul_pow2(-1);
    let r = Enclosure::point(x.clone()).sub(&kpi, wr);
    let quadrant = k.mod_floor(&BigInt::from(4));
    let quadrant: u8 = quadrant.try_into().expect("0..4");
    match quadrant {
        0 => sin_taylor(&r, wp),
        1 => cos_taylor(&r, wp),
        2 => sin_taylor(&r, wp).neg(),
        _ => cos_taylor(&r, wp).neg(),
    }
}

/// Real cube root; the flag reports an exact (dyadic) result.
pub(crate) fn cbrt(x: &Dyadic, w: u64) -> (Enclosure, bool) {
    let lo = x.cbrt(w, Direction::Down);
    let hi = x.cbrt(w, Direction::Up);
    let exact = lo.cmp(&hi) == Ordering::Equal;
    (Enclosure::new(lo, hi), exact)
}
