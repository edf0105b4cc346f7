//! Deterministic decimal rendering.
//!
//! Floats are converted to exact rationals and rounded half-even at the
//! requested place, so identical inputs always produce identical bytes and
//! the rounding matches what the reports promise.

use rug::ops::Pow;
use rug::{Integer, Rational};

/// `p/q` with the denominator always written, even when it is 1.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Rounds an exact rational to the nearest integer, ties to even.
pub fn round_half_even(r: &Rational) -> Integer {
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let (quot, rem) = num.div_rem_floor(den.clone());
    // rem is in [0, den); compare 2*rem against den
    let twice = Integer::from(&rem * 2u32);
    match twice.cmp(&den) {
        std::cmp::Ordering::Less => quot,
        std::cmp::Ordering::Greater => quot + 1u32,
        std::cmp::Ordering::Equal => {
            if quot.is_even() {
                quot
            } else {
                quot + 1u32
            }
        }
    }
}

/// Fixed-point rendering with `decimals` digits after the point, round
/// half-even on the exact binary value of `v`.
pub fn format_fixed(v: f64, decimals: u32) -> String {
    let Some(r) = Rational::from_f64(v) else {
        return v.to_string(); // NaN / infinities
    };
    let scale = Integer::from(10u32).pow(decimals);
    let scaled = r * Rational::from(scale);
    let rounded = round_half_even(&scaled);
    let negative = rounded < 0u32;
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= decimals as usize {
        format!("{}{}", "0".repeat(decimals as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - decimals as usize;
    let (int_part, frac_part) = digits.split_at(split);
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Significant-digit rendering, round half-even. Uses plain decimal notation
/// for moderate magnitudes and `m.mmme±x` outside them.
pub fn format_sig(v: f64, sig: u32) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let r = Rational::from_f64(v.abs()).expect("finite float");
    let mut e10 = decimal_exponent(&r);
    // round to `sig` digits: m = r / 10^(e10 - sig + 1)
    let mut mantissa = round_half_even(&shift_pow10(&r, sig as i64 - 1 - e10));
    let cap = Integer::from(10u32).pow(sig);
    if mantissa >= cap {
        // carry: 999.95 -> 1000 with sig=3 becomes 1.00e3
        mantissa = Integer::from(&mantissa / 10u32);
        e10 += 1;
    }
    let digits = mantissa.to_string();
    debug_assert_eq!(digits.len(), sig as usize);
    let sign = if v < 0.0 { "-" } else { "" };
    if !(-4..=15).contains(&e10) {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    } else if e10 + 1 >= sig as i64 {
        format!("{sign}{digits}{}", "0".repeat((e10 + 1 - sig as i64) as usize))
    } else if e10 >= 0 {
        let (int_part, frac_part) = digits.split_at(e10 as usize + 1);
        format!("{sign}{int_part}.{frac_part}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-e10 - 1) as usize))
    }
}

/// Largest e with 10^e <= r (r must be positive).
fn decimal_exponent(r: &Rational) -> i64 {
    debug_assert!(*r > 0);
    let mut est = r.to_f64().abs().log10().floor() as i64;
    // correct the float estimate exactly
    loop {
        let lo = pow10(est);
        if *r < lo {
            est -= 1;
            continue;
        }
        let hi = pow10(est + 1);
        if *r >= hi {
            est += 1;
            continue;
        }
        return est;
    }
}

fn pow10(e: i64) -> Rational {
    let p = Integer::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1u32), p))
    }
}

fn shift_pow10(r: &Rational, shift: i64) -> Rational {
    r.clone() * pow10(shift)
}
