//! Exact rational scalars.
//!
//! Every count and coefficient in this crate is an arbitrary-precision
//! rational.  The representation is `num`'s [`BigRational`], which keeps
//! values in lowest terms with a positive denominator, so equality is plain
//! coefficient equality.  This module adds the short constructors and the
//! `a/b` string format used by the rest of the crate.

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num::BigRational as Rational;

/// The integer `n` as a rational.
pub fn rat(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`.  Panics if `d` is zero.
pub fn frac(n: i128, d: i128) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` with optional leading sign, e.g. `"-3/4"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (num_text, den_text) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numer: BigInt = num_text
        .parse()
        .map_err(|_| bad("expected an integer numerator"))?;
    let denom: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| bad("expected an integer denominator"))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Renders a rational as `num/den`, including unit denominators (`5/1`).
pub fn format_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64`.  Values beyond the representable range saturate to infinity.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `base^e` for a signed exponent.  A negative exponent on zero is an error.
pub fn pow_i64(base: &Rational, e: i64) -> Result<Rational> {
    if e >= 0 {
        Ok(pow_u(base, e as u64))
    } else {
        if base.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(pow_u(base, e.unsigned_abs()).recip())
    }
}

fn pow_u(base: &Rational, mut e: u64) -> Rational {
    let mut acc = rat(1);
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}
