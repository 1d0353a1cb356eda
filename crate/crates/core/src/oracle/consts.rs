//! π and ln 2 as rigorous enclosures, from fixed-point integer series.
//!
//! Each series term is a nested floor of `2^f` divided by integers, which
//! equals a single floor, so every term is low by less than two units of
//! `2^-f` and the truncated tail is below one unit.

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::hp::{Dyadic, Enclosure};

static PI: Mutex<Option<(u64, Enclosure)>> = Mutex::new(None);
static LN2: Mutex<Option<(u64, Enclosure)>> = Mutex::new(None);

fn cached(cell: &Mutex<Option<(u64, Enclosure)>>, prec: u64, make: fn(u64) -> Enclosure) -> Enclosure {
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((p, e)) = guard.as_ref() {
        if *p >= prec {
            return e.round_out(prec);
        }
    }
    let e = make(prec);
    *guard = Some((prec, e.clone()));
    e
}

/// Enclosure of π with at least `prec` correct bits.
pub(crate) fn pi(prec: u64) -> Enclosure {
    cached(&PI, prec, compute_pi)
}

/// Enclosure of ln 2 with at least `prec` correct bits.
pub(crate) fn ln2(prec: u64) -> Enclosure {
    cached(&LN2, prec, compute_ln2)
}

fn scaled(lo: BigInt, hi: BigInt, f: u64, prec: u64) -> Enclosure {
    let e = Enclosure::new(
        Dyadic::from_bigint(&lo).mul_pow2(-(f as i64)),
        Dyadic::from_bigint(&hi).mul_pow2(-(f as i64)),
    );
    e.round_out(prec)
}

/// `2^f · atan(1/m)` as an integer bracket.
fn atan_inv(m: u64, f: u64) -> (BigInt, BigInt) {
    let m2 = BigUint::from(m * m);
    let mut p = (BigUint::one() << f) / m;
    let mut s = BigInt::zero();
    let mut k = 0u64;
    while !p.is_zero() {
        let term = BigInt::from(&p / (2 * k + 1));
        if k % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
        p /= &m2;
        k += 1;
    }
    let err = BigInt::from(2 * k + 1);
    (&s - &err, s + err)
}

fn compute_pi(prec: u64) -> Enclosure {
    let f = prec + 16 + 64 - (prec + 16).leading_zeros() as u64;
    let (a_lo, a_hi) = atan_inv(5, f);
    let (b_lo, b_hi) = atan_inv(239, f);
    let lo = 16 * a_lo - 4 * b_hi;
    let hi = 16 * a_hi - 4 * b_lo;
    scaled(lo, hi, f, prec)
}

fn compute_ln2(prec: u64) -> Enclosure {
    // ln 2 = 2 atanh(1/3)
    let f = prec + 16 + 64 - (prec + 16).leading_zeros() as u64;
    let mut p = (BigUint::one() << f) / 3u32;
    let mut s = BigUint::zero();
    let mut k = 0u64;
    while !p.is_zero() {
        s += &p / (2 * k + 1);
        p /= 9u32;
        k += 1;
    }
    let s = BigInt::from(s);
    let err = BigInt::from(2 * k + 2);
    scaled(2 * &s, 2 * (s + err), f, prec)
}
