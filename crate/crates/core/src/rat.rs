//! Arbitrary-precision rational arithmetic helpers.
//!
//! Weights, coordinates and coefficients throughout the crate are exact
//! rationals serialised as `"p/q"` strings. Doubles are used only for
//! Monte-Carlo estimates.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The rational type used for all exact arithmetic.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Exact factorial.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// `n^n` with the convention `0^0 = 1`.
pub fn self_power(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    BigInt::from(n).pow(n as u32)
}

/// Multinomial coefficient `n! / (k_1! ... k_m!)` for `k` summing to `n`.
pub fn multinomial(counts: &[u32]) -> BigInt {
    let n: u32 = counts.iter().sum();
    let mut num = factorial(n as usize);
    for &k in counts {
        num /= factorial(k as usize);
    }
    num
}

/// Formats a rational as `"p/q"` (always with an explicit denominator).
pub fn to_frac_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, a bare integer, or a decimal such as `"0.25"` into an
/// exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_int: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let frac_int: BigInt = frac.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = whole_int.abs() * &scale + frac_int;
        let signed = if neg { -mag } else { mag };
        return Some(Rat::new(signed, scale));
    }
    let num: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(num))
}

/// Best-effort conversion to `f64` for reporting.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from an `f64` binary fraction (finite values only).
pub fn from_f64_exact(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}
