//! Counting cone spherical metrics with dihedral monodromy.
//!
//! The data is a pair of odd positive integers `a`, `b` and cone angles
//! `c_1 pi, ..., c_n pi` with `a + b = 2n`, each `c_i` a positive
//! non-integer rational.  When the angles are *generic* — no signed sum
//! `sum eps_i c_i` with `eps_i` in `{-1, 0, 1}` vanishes except trivially —
//! the number of such metrics is
//!
//! ```text
//! binom(n-1, (a-1)/2) * (a-2)!! * (b-2)!!
//! ```
//!
//! which also equals the generic degree of the quadratic stratum
//! `(2; a-2, b-2; [2]^n)`; the count checks itself against that degree on
//! every call.  Angles are restricted to exact rationals so the genericity
//! test is a decision, not an approximation.

use num::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::counting::{binomial, k_factorial};
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{format_fraction, parse_rational, Rational};
use crate::strata::Signature;

/// Validated dihedral angle data `(a, b; c_1, ..., c_n)` in units of `pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalAngles {
    a: i64,
    b: i64,
    c: Vec<Rational>,
}

/// Outcome of the genericity test, with the vanishing sign vector on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    NonGeneric { witness: Vec<i8> },
}

impl Genericity {
    pub fn is_generic(&self) -> bool {
        matches!(self, Genericity::Generic)
    }
}

impl SphericalAngles {
    pub fn new(a: i64, b: i64, c: Vec<Rational>) -> Result<Self> {
        if a <= 0 || a % 2 == 0 {
            return Err(Error::DihedralParameterNotOdd {
                which: 'a',
                value: a,
            });
        }
        if b <= 0 || b % 2 == 0 {
            return Err(Error::DihedralParameterNotOdd {
                which: 'b',
                value: b,
            });
        }
        if a + b != 2 * c.len() as i64 {
            return Err(Error::DihedralSumMismatch {
                sum: a + b,
                n: c.len(),
            });
        }
        for (i, ci) in c.iter().enumerate() {
            if *ci <= Rational::from_integer(0.into()) {
                return Err(Error::ConeAngleNotPositive { index: i + 1 });
            }
            if ci.is_integer() {
                return Err(Error::ConeAngleInteger { index: i + 1 });
            }
        }
        Ok(SphericalAngles { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// Number of cone points.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Exhaustive test over all `3^n - 1` nontrivial sign vectors; signs per
    /// coordinate are tried in the order `0, +1, -1`, so the reported
    /// witness is the first vanishing vector in that order.
    pub fn genericity_check(&self) -> Result<Genericity> {
        let n = self.n();
        limits::check_enumeration_bound(n)?;
        let mut signs = vec![0i8; n];
        loop {
            // Advance the sign vector like a base-3 counter, last
            // coordinate fastest, digit order 0, +1, -1.
            let mut pos = n;
            while pos > 0 {
                pos -= 1;
                signs[pos] = match signs[pos] {
                    0 => 1,
                    1 => -1,
                    _ => {
                        signs[pos] = 0;
                        continue;
                    }
                };
                break;
            }
            if signs.iter().all(|&s| s == 0) {
                return Ok(Genericity::Generic);
            }
            let mut sum = Rational::from_integer(0.into());
            for (s, ci) in signs.iter().zip(&self.c) {
                match s {
                    1 => sum += ci,
                    -1 => sum -= ci,
                    _ => {}
                }
            }
            if sum == Rational::from_integer(0.into()) {
                return Ok(Genericity::NonGeneric {
                    witness: signs.clone(),
                });
            }
        }
    }

    /// The number of dihedral cone spherical metrics with these angles.
    ///
    /// Requires generic angles; the result is checked against the generic
    /// degree of the stratum `(2; a-2, b-2; [2]^n)` before being returned.
    pub fn spherical_count(&self) -> Result<BigInt> {
        if let Genericity::NonGeneric { witness } = self.genericity_check()? {
            return Err(Error::NonGenericAngles { witness });
        }
        let n = self.n() as i64;
        let count = binomial(n - 1, (self.a - 1) / 2)
            * k_factorial(2, self.a as i128 - 2)
            * k_factorial(2, self.b as i128 - 2);
        let stratum = Signature::new(2, self.a - 2, self.b - 2, vec![2; self.n()])?;
        let degree = stratum.degree_generic()?;
        if degree != count {
            return Err(Error::InternalInconsistency {
                context: "spherical_count",
                detail: format!("formula gives {count} but the stratum degree is {degree}"),
            });
        }
        Ok(count)
    }
}

#[derive(Serialize, Deserialize)]
struct SphericalAnglesRepr {
    a: i64,
    b: i64,
    c: Vec<String>,
}

impl Serialize for SphericalAngles {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SphericalAnglesRepr {
            a: self.a,
            b: self.b,
            c: self.c.iter().map(format_fraction).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SphericalAngles {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SphericalAnglesRepr::deserialize(deserializer)?;
        let c = repr
            .c
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SphericalAngles::new(repr.a, repr.b, c).map_err(serde::de::Error::custom)
    }
}
