//! Strata of k-differentials on the sphere and their isoresidual cover degrees.
//!
//! A [`Signature`] records a stratum with two distinguished singularities of
//! orders `a1`, `a2` and `p` poles of orders `-b_1, ..., -b_p`, each `b_i` a
//! positive multiple of the level `k`.  Validity means
//!
//! ```text
//! a1 + a2 - (b_1 + ... + b_p) = -2k,    gcd(a1, k) = gcd(a2, k) = 1,
//! a1 > -k,                             a2 != -k.
//! ```
//!
//! The degree of the isoresidual cover — the number of differentials in the
//! stratum with a prescribed generic residue tuple — is the subset sum
//!
//! ```text
//! d_k = sum over I in {1..p} with c_I > 0 of
//!         c_I * f_k(a1, |I| + 1) * f_k(a2, |I^c| + 1),
//! c_I = a1 + k - sum of b_i over I,
//! ```
//!
//! computed exactly in [`Signature::degree_generic`].  When every pole has
//! order exactly `k` the sum collapses to the closed form
//! `binom(p-1, ceil(a1/k)) * a1!_(k) * a2!_(k)`
//! ([`Signature::degree_order_k_poles`]), which also has a Gamma-function
//! shape evaluated in floating point by [`Signature::gamma_degree_estimate`].

use std::fmt;

use num::bigint::BigInt;
use num::integer::gcd;
use num::traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::counting::{binomial, k_factorial, partial_product};
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{rat, Rational};

/// A subset of the poles `{1, ..., p}`, stored as a bit mask
/// (bit `i - 1` set means pole `i` is a member).  `p` is capped at 63.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u64) -> Self {
        SubsetMask(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{1, ..., p}`.
    pub fn full(p: usize) -> Self {
        assert!(p <= 63, "subset masks hold at most 63 poles");
        SubsetMask(if p == 0 { 0 } else { (1u64 << p) - 1 })
    }

    /// Builds a mask from 1-based indices; `None` if any index is 0 or > 63.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > 63 {
                return None;
            }
            bits |= 1 << (i - 1);
        }
        Some(SubsetMask(bits))
    }

    /// Membership of the 1-based pole index `i`.
    pub fn contains(self, i: usize) -> bool {
        (1..=63).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, p: usize) -> Self {
        SubsetMask(Self::full(p).0 & !self.0)
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending 1-based member indices.
    pub fn indices(self) -> Vec<usize> {
        (1..=63).filter(|&i| self.contains(i)).collect()
    }

    /// Smallest member, if any (1-based).
    pub fn min_index(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// All `2^p` subsets in ascending mask order.
    pub fn all_subsets(p: usize) -> impl Iterator<Item = SubsetMask> {
        assert!(p <= 63);
        (0..=Self::full(p).0).map(SubsetMask)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.indices().into_iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Which distinguished singularity a subset coefficient is anchored to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A validated stratum signature `(k; a1, a2; [b_1, ..., b_p])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    k: i64,
    a1: i64,
    a2: i64,
    b: Vec<i64>,
}

impl Signature {
    /// Validates and builds a signature; each violated invariant has its own
    /// error variant.
    pub fn new(k: i64, a1: i64, a2: i64, b: Vec<i64>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidLevel(k));
        }
        if b.is_empty() {
            return Err(Error::EmptyPoleList);
        }
        if b.len() > 63 {
            return Err(Error::TooManyPoles { p: b.len() });
        }
        for (index, &order) in b.iter().enumerate() {
            if order < k || order % k != 0 {
                return Err(Error::PoleOrderNotMultipleOfK { index, order, k });
            }
        }
        if gcd(a1, k) != 1 {
            return Err(Error::ZeroOrderNotCoprime {
                which: 1,
                order: a1,
                k,
            });
        }
        if gcd(a2, k) != 1 {
            return Err(Error::ZeroOrderNotCoprime {
                which: 2,
                order: a2,
                k,
            });
        }
        if a1 <= -k {
            return Err(Error::A1NotGreaterThanMinusK { a1, minus_k: -k });
        }
        if a2 == -k {
            return Err(Error::A2EqualsMinusK { minus_k: -k });
        }
        let got = a1 as i128 + a2 as i128 - b.iter().map(|&x| x as i128).sum::<i128>();
        let expected = -2 * k as i128;
        if got != expected {
            return Err(Error::SumMismatch { got, expected });
        }
        Ok(Signature { k, a1, a2, b })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn a1(&self) -> i64 {
        self.a1
    }

    pub fn a2(&self) -> i64 {
        self.a2
    }

    /// Pole orders as positive numbers `b_i` (the poles have orders `-b_i`).
    pub fn b(&self) -> &[i64] {
        &self.b
    }

    /// Number of poles.
    pub fn p(&self) -> usize {
        self.b.len()
    }

    pub fn all_poles_order_k(&self) -> bool {
        self.b.iter().all(|&x| x == self.k)
    }

    /// `sum of b_i over members of i`.
    pub fn b_sum(&self, i: SubsetMask) -> i128 {
        self.b
            .iter()
            .enumerate()
            .filter(|(idx, _)| i.contains(idx + 1))
            .map(|(_, &x)| x as i128)
            .sum()
    }

    /// The subset coefficient `c_{side,I} = a_side + k - sum of b_i over I`.
    pub fn c_coeff(&self, side: Side, i: SubsetMask) -> i128 {
        let a = match side {
            Side::First => self.a1,
            Side::Second => self.a2,
        };
        a as i128 + self.k as i128 - self.b_sum(i)
    }

    /// The degree as the subset sum anchored at the chosen singularity.
    /// Both sides are mathematically equal; exposing each separately lets
    /// tests exercise the symmetry.  The raw value is rational because the
    /// empty and full subsets contribute reciprocal factors.
    pub fn degree_by_expansion(&self, side: Side) -> Result<Rational> {
        let p = self.p();
        limits::check_enumeration_bound(p)?;
        let (near, far) = match side {
            Side::First => (self.a1 as i128, self.a2 as i128),
            Side::Second => (self.a2 as i128, self.a1 as i128),
        };
        let mut total = rat(0);
        for mask in SubsetMask::all_subsets(p) {
            let c = self.c_coeff(side, mask);
            if c <= 0 {
                continue;
            }
            let inner = mask.len() + 1;
            let outer = (p as u32 - mask.len()) + 1;
            total += rat(c)
                * partial_product(self.k, near, inner)?
                * partial_product(self.k, far, outer)?;
        }
        Ok(total)
    }

    /// Degree of the isoresidual cover at a non-resonant residue tuple.
    /// The subset sum is provably a nonnegative integer; a fractional or
    /// negative outcome is reported as an internal error.
    pub fn degree_generic(&self) -> Result<BigInt> {
        let raw = self.degree_by_expansion(Side::First)?;
        if !raw.is_integer() || raw.is_negative() {
            return Err(Error::NonIntegerResult {
                context: "degree_generic",
                value: raw.to_string(),
            });
        }
        Ok(raw.to_integer())
    }

    /// Closed-form degree for strata whose poles all have order exactly `k`:
    ///
    /// ```text
    /// binom(p - 1, ceil(a1/k)) * a1!_(k) * a2!_(k)
    /// ```
    ///
    /// Requires `k >= 2` and both distinguished orders above `-k`.
    pub fn degree_order_k_poles(&self) -> Result<BigInt> {
        if self.k < 2 {
            return Err(Error::RequiresLevelAtLeastTwo);
        }
        if !self.all_poles_order_k() {
            return Err(Error::RequiresOrderKPoles);
        }
        if self.a2 <= -self.k {
            return Err(Error::RequiresZerosAboveMinusK);
        }
        let ceil = (self.a1 + self.k - 1).div_euclid(self.k);
        Ok(binomial(self.p() as i64 - 1, ceil)
            * k_factorial(self.k, self.a1 as i128)
            * k_factorial(self.k, self.a2 as i128))
    }

    /// Floating-point version of the closed form via the reflection identity,
    ///
    /// ```text
    /// k^(p-1) * binom(p-1, ceil(a1/k)) * |sin(pi*alpha1)|/pi
    ///         * Gamma(alpha1) * Gamma(alpha2),        alpha_i = (a_i + k)/k.
    /// ```
    ///
    /// Mathematically exact, so it agrees with [`Signature::degree_order_k_poles`]
    /// up to `f64` rounding; same preconditions.
    pub fn gamma_degree_estimate(&self) -> Result<f64> {
        if self.k < 2 {
            return Err(Error::RequiresLevelAtLeastTwo);
        }
        if !self.all_poles_order_k() {
            return Err(Error::RequiresOrderKPoles);
        }
        if self.a2 <= -self.k {
            return Err(Error::RequiresZerosAboveMinusK);
        }
        let k = self.k as f64;
        let alpha1 = (self.a1 as f64 + k) / k;
        let alpha2 = (self.a2 as f64 + k) / k;
        let ceil = (self.a1 + self.k - 1).div_euclid(self.k);
        let binom = binomial(self.p() as i64 - 1, ceil)
            .to_f64()
            .unwrap_or(f64::INFINITY);
        let sine = (std::f64::consts::PI * alpha1).sin().abs();
        Ok(k.powi(self.p() as i32 - 1) * binom * sine / std::f64::consts::PI
            * statrs::function::gamma::gamma(alpha1)
            * statrs::function::gamma::gamma(alpha2))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}; [", self.k, self.a1, self.a2)?;
        for (i, b) in self.b.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "])")
    }
}

#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    k: i64,
    a: [i64; 2],
    b: Vec<i64>,
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SignatureRepr {
            k: self.k,
            a: [self.a1, self.a2],
            b: self.b.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SignatureRepr::deserialize(deserializer)?;
        Signature::new(repr.k, repr.a[0], repr.a[1], repr.b).map_err(serde::de::Error::custom)
    }
}
