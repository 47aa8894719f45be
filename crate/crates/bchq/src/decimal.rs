//! Deterministic decimal rendering of exact rationals.
//!
//! Rule used by every table and report: four decimal places with
//! round-half-even ties, switching to scientific notation below 1e-3 so small
//! entries do not round to a spurious zero. Rendering goes through exact
//! integer arithmetic only; no value ever passes through floating point.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

/// Rounds `r` to the nearest integer with ties to even.
pub fn round_half_even(r: &BigRational) -> BigInt {
    let floor = r.floor().to_integer();
    let frac = r - BigRational::from_integer(floor.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if (&floor % 2) == BigInt::zero() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// Fixed-point rendering with exactly four decimals, e.g. `5.3333`.
pub fn render_fixed4(r: &BigRational) -> String {
    let scaled = r * BigRational::from_integer(BigInt::from(10_000));
    let n = round_half_even(&scaled);
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = if digits.len() < 5 {
        format!("{:0>5}", digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - 4);
    format!("{}{int_part}.{frac_part}", if neg { "-" } else { "" })
}

/// Scientific rendering with a four-decimal mantissa, e.g. `6.7430e-4`.
pub fn render_sci4(r: &BigRational) -> String {
    if r.is_zero() {
        return "0.0000".to_string();
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let one = BigRational::one();
    let mut mag = r.abs();
    let mut exp: i32 = 0;
    while mag >= ten {
        mag /= &ten;
        exp += 1;
    }
    while mag < one {
        mag *= &ten;
        exp -= 1;
    }
    let mut mantissa = render_fixed4(&mag);
    if mantissa == "10.0000" {
        mantissa = "1.0000".to_string();
        exp += 1;
    }
    format!("{}{mantissa}e{exp}", if r.is_negative() { "-" } else { "" })
}

/// Table rendering rule: fixed four decimals, scientific below 1e-3.
pub fn render_decimal(r: &BigRational) -> String {
    if r.is_zero() {
        return "0.0000".to_string();
    }
    let threshold = BigRational::new(BigInt::one(), BigInt::from(1000));
    if r.abs() < threshold {
        render_sci4(r)
    } else {
        render_fixed4(r)
    }
}

/// Exact rendering: `p` when the denominator is one, `p/q` otherwise.
pub fn render_exact(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
