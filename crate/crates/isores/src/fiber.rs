//! Fiber cardinalities of the isoresidual cover over arbitrary residue tuples.
//!
//! Over a non-resonant tuple every fiber has the generic cardinality, the
//! degree of the cover.  Each resonant subset of the poles removes elements,
//! and the exact count is an inclusion-exclusion over *resonant partitions*:
//! families `J_1, ..., J_s` of pairwise disjoint resonant subsets, with the
//! leftover poles collected in `J_0` (possibly empty, possibly itself
//! resonant).  Each partition contributes
//!
//! ```text
//! (-1)^s G_k(J_0; J_1, ..., J_s) * prod_j f(B_j/k - 1, |J_j| + 1) * prod_j Ab(J_j)
//! ```
//!
//! where `B_j` is the total pole order of block `J_j`, `f` is the abelian
//! partial product, `Ab` the block's abelian number, and `G_k` a coefficient
//! built from degrees of reduced signatures.  The empty family (`s = 0`)
//! contributes exactly the generic degree, so the sum is a correction ledger
//! on top of it.
//!
//! The single-resonance shortcut covers tuples with exactly one resonant
//! subset `I`:
//!
//! ```text
//! count = d - [max(0, c_1) d(mu_1) + max(0, c_2) d(mu_2)] * f * Ab
//! ```
//!
//! (with `count = d - f * Ab` when `I` is all the poles).  Whenever a tuple
//! has a one-subset profile, [`fiber_count`] evaluates both formulas and
//! fails loudly if they disagree.

use num::{BigInt, One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::counting::abelian_f;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, pow_i64, rat, Rational};
use crate::resonance::ResidueTuple;
use crate::strata::{Side, Signature, SubsetMask};

/// A partition of the poles into disjoint resonant blocks `J_1, ..., J_s`
/// plus the unconstrained leftover set `J_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonantPartition {
    j0: SubsetMask,
    blocks: Vec<SubsetMask>,
}

impl ResonantPartition {
    /// Validates disjointness and coverage; blocks are stored sorted by
    /// their smallest member, so equal partitions compare equal.
    pub fn new(p: usize, j0: SubsetMask, blocks: Vec<SubsetMask>) -> Result<Self> {
        validate_partition(p, j0, &blocks)?;
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.min_index());
        Ok(ResonantPartition { j0, blocks })
    }

    pub fn j0(&self) -> SubsetMask {
        self.j0
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    /// Number of resonant blocks.
    pub fn s(&self) -> usize {
        self.blocks.len()
    }
}

fn validate_partition(p: usize, j0: SubsetMask, blocks: &[SubsetMask]) -> Result<()> {
    let full = SubsetMask::full(p);
    let mut seen = j0;
    if !j0.is_subset_of(full) {
        return Err(Error::SubsetOutOfRange { mask: j0.bits(), p });
    }
    for b in blocks {
        if b.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "blocks must be nonempty".to_string(),
            });
        }
        if !b.is_subset_of(full) {
            return Err(Error::SubsetOutOfRange { mask: b.bits(), p });
        }
        if !seen.is_disjoint(*b) {
            return Err(Error::InvalidPartition {
                reason: format!("block {b} overlaps the rest of the partition"),
            });
        }
        seen = seen.union(*b);
    }
    if seen != full {
        return Err(Error::InvalidPartition {
            reason: "blocks and J0 must cover every pole".to_string(),
        });
    }
    Ok(())
}

/// One evaluated partition term of the signed sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberTerm {
    partition: ResonantPartition,
    g: Rational,
    f_product: Rational,
    abelian_product: u64,
    contribution: Rational,
}

impl FiberTerm {
    pub fn partition(&self) -> &ResonantPartition {
        &self.partition
    }

    /// The coefficient `G_k(J_0; J_1, ..., J_s)`.
    pub fn g(&self) -> &Rational {
        &self.g
    }

    /// The product of the blocks' `f` factors.
    pub fn f_product(&self) -> &Rational {
        &self.f_product
    }

    /// The product of the blocks' abelian numbers.
    pub fn abelian_product(&self) -> u64 {
        self.abelian_product
    }

    /// `(-1)^s`.
    pub fn sign(&self) -> i32 {
        if self.partition.s().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `sign * G * f-product * abelian-product`.
    pub fn contribution(&self) -> &Rational {
        &self.contribution
    }
}

/// The full term ledger of a fiber computation.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberReport {
    count: BigInt,
    degree: BigInt,
    terms: Vec<FiberTerm>,
    unverified_regime: bool,
}

impl FiberReport {
    /// The fiber cardinality: the sum of all contributions.
    pub fn count(&self) -> &BigInt {
        &self.count
    }

    /// The generic degree, equal to the empty partition's contribution.
    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    /// All partition terms, the empty partition first, then families in
    /// ascending block order.
    pub fn terms(&self) -> &[FiberTerm] {
        &self.terms
    }

    /// True when `a2 < -k` and at least two subsets are resonant: the
    /// positivity guards of the coefficient sum are untested there.
    pub fn unverified_regime(&self) -> bool {
        self.unverified_regime
    }

    /// Contributions grouped by the multiset of block sizes, ordered by
    /// block count and then by size vector; the first entry is the empty
    /// shape holding the generic degree.
    pub fn subtotals_by_shape(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut map: std::collections::BTreeMap<(usize, Vec<u32>), Rational> =
            std::collections::BTreeMap::new();
        for t in &self.terms {
            let mut sizes: Vec<u32> = t.partition.blocks().iter().map(|b| b.len()).collect();
            sizes.sort_unstable();
            *map.entry((sizes.len(), sizes))
                .or_insert_with(Rational::zero) += t.contribution.clone();
        }
        map.into_iter().map(|((_, sizes), v)| (sizes, v)).collect()
    }
}

/// The reduced signature `mu_{I,I^c}` attached to a split of the blocks:
/// block-index subset `I` (over `{1..s}`) sends its poles to the first
/// distinguished point, the complementary blocks to the second, and `J_0`
/// keeps its poles.  The distinguished orders become `d_1 - k` and
/// `d_2 - k` where `d_1 = c_1(union of I-blocks)` and `d_2 = c_2(union of
/// the others)`; both must be positive.
pub fn reduced_signature(
    sig: &Signature,
    j0: SubsetMask,
    blocks: &[SubsetMask],
    i: SubsetMask,
) -> Result<Signature> {
    validate_partition(sig.p(), j0, blocks)?;
    let s = blocks.len();
    if s < 64 && i.bits() >> s != 0 {
        return Err(Error::SubsetOutOfRange { mask: i.bits(), p: s });
    }
    let mut u1 = SubsetMask::EMPTY;
    let mut u2 = SubsetMask::EMPTY;
    for (j, b) in blocks.iter().enumerate() {
        if i.contains(j + 1) {
            u1 = u1.union(*b);
        } else {
            u2 = u2.union(*b);
        }
    }
    let d1 = sig.c_coeff(Side::First, u1);
    let d2 = sig.c_coeff(Side::Second, u2);
    if d1 <= 0 {
        return Err(Error::ReductionGuard { side: 1, value: d1 });
    }
    if d2 <= 0 {
        return Err(Error::ReductionGuard { side: 2, value: d2 });
    }
    let k = sig.k();
    let b: Vec<i64> = j0.indices().into_iter().map(|ix| sig.b()[ix - 1]).collect();
    let narrow = |v: i128| {
        i64::try_from(v).map_err(|_| Error::InvalidPartition {
            reason: format!("reduced order {v} overflows"),
        })
    };
    Signature::new(k, narrow(d1 - k as i128)?, narrow(d2 - k as i128)?, b)
}

/// The coefficient `G_k(J_0; J_1, ..., J_s)` of a partition term.
///
/// ```text
/// J_0 empty:     sum over I in {1..s} with d_1 > 0 of
///                    d_1 * (a1+k)^(|I|-1) * (a2+k)^(s-|I|-1)
/// J_0 nonempty:  sum over I with d_1 > 0 and d_2 > 0 of
///                    d_1 * d_2 * d(mu_{I,I^c}) * (a1+k)^(|I|-1) * (a2+k)^(s-|I|-1)
/// ```
///
/// with `d_1 = c_1(union of I-blocks)`, `d_2 = c_2(union of the rest)` and
/// `|I|` counting blocks.  Negative exponents are exact rational
/// reciprocals.  With no blocks at all the sum collapses to the degree of
/// the signature itself, which anchors the empty-partition baseline.
pub fn g_coefficient(sig: &Signature, j0: SubsetMask, blocks: &[SubsetMask]) -> Result<Rational> {
    validate_partition(sig.p(), j0, blocks)?;
    let s = blocks.len();
    if s == 0 {
        return sig.degree_by_expansion(Side::First);
    }
    assert!(s < 64, "block families are bounded by the pole count");
    let k = sig.k();
    let base1 = rat((sig.a1() + k) as i128);
    let base2 = rat((sig.a2() + k) as i128);
    let block_sums: Vec<i128> = blocks.iter().map(|b| sig.b_sum(*b)).collect();
    let all_blocks: i128 = block_sums.iter().sum();
    let mut total = Rational::zero();
    for mask in 0u64..(1u64 << s) {
        let mut in_sum = 0i128;
        for (j, bs) in block_sums.iter().enumerate() {
            if mask >> j & 1 == 1 {
                in_sum += bs;
            }
        }
        let d1 = (sig.a1() + k) as i128 - in_sum;
        if d1 <= 0 {
            continue;
        }
        let size = mask.count_ones() as i64;
        let pow1 = pow_i64(&base1, size - 1)?;
        let pow2 = pow_i64(&base2, s as i64 - size - 1)?;
        if j0.is_empty() {
            total += rat(d1) * pow1 * pow2;
        } else {
            let d2 = (sig.a2() + k) as i128 - (all_blocks - in_sum);
            if d2 <= 0 {
                continue;
            }
            let mu = reduced_signature(sig, j0, blocks, SubsetMask::from_bits(mask))?;
            let d_mu = mu.degree_by_expansion(Side::First)?;
            total += rat(d1) * rat(d2) * d_mu * pow1 * pow2;
        }
    }
    Ok(total)
}

/// Counts the fiber over a residue tuple by the full signed partition sum,
/// with the term ledger retained for audit.
///
/// Every family of pairwise disjoint resonant subsets becomes one term.
/// When exactly one subset is resonant the result is cross-checked against
/// [`fiber_count_single`]; a mismatch is an internal error, never a silent
/// choice.  The total must come out a nonnegative integer.
pub fn fiber_count(sig: &Signature, rt: &ResidueTuple) -> Result<FiberReport> {
    if rt.k() as i64 != sig.k() {
        return Err(Error::LevelMismatch {
            sig_k: sig.k(),
            tuple_k: rt.k() as i64,
        });
    }
    if rt.p() != sig.p() {
        return Err(Error::TupleLengthMismatch {
            sig_p: sig.p(),
            tuple_p: rt.p(),
        });
    }
    let p = sig.p();
    let profile = rt.resonant_subsets()?;
    let degree = sig.degree_generic()?;
    let masks: Vec<SubsetMask> = profile.entries().iter().map(|e| e.subset).collect();

    let mut terms: Vec<FiberTerm> = Vec::new();
    let mut family: Vec<usize> = Vec::new();
    enumerate_families(&masks, 0, SubsetMask::EMPTY, &mut family, &mut |chosen| {
        let blocks: Vec<SubsetMask> = chosen.iter().map(|&ix| masks[ix]).collect();
        let mut used = SubsetMask::EMPTY;
        for b in &blocks {
            used = used.union(*b);
        }
        let partition = ResonantPartition::new(p, used.complement(p), blocks)?;
        let g = g_coefficient(sig, partition.j0(), partition.blocks())?;
        let mut f_product = Rational::one();
        let mut abelian_product = 1u64;
        for b in partition.blocks() {
            let b_sum = sig.b_sum(*b);
            f_product *= abelian_f(b_sum / sig.k() as i128 - 1, b.len() + 1)?;
            abelian_product *= profile
                .abelian_for(*b)
                .expect("blocks are drawn from the profile");
        }
        let sign = if partition.s() % 2 == 0 { 1 } else { -1 };
        let contribution = rat(sign) * &g * &f_product * rat(abelian_product as i128);
        terms.push(FiberTerm {
            partition,
            g,
            f_product,
            abelian_product,
            contribution,
        });
        Ok(())
    })?;

    let total: Rational = terms.iter().map(|t| t.contribution.clone()).sum();
    if !total.is_integer() || total.is_negative() {
        return Err(Error::IntegralityFailure {
            value: format_fraction(&total),
        });
    }
    let count = total.to_integer();

    if profile.len() == 1 {
        let entry = &profile.entries()[0];
        let single = fiber_count_single(sig, entry.subset, entry.abelian)?;
        if single != count {
            return Err(Error::SingleResonanceMismatch {
                general: count.to_string(),
                single: single.to_string(),
            });
        }
    }

    let unverified = sig.a2() < -sig.k() && profile.len() >= 2;
    Ok(FiberReport {
        count,
        degree,
        terms,
        unverified_regime: unverified,
    })
}

/// Visits every family of pairwise disjoint masks (as sorted index lists
/// into `masks`), the empty family first.
fn enumerate_families(
    masks: &[SubsetMask],
    start: usize,
    used: SubsetMask,
    family: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    visit(family)?;
    for ix in start..masks.len() {
        if used.is_disjoint(masks[ix]) {
            family.push(ix);
            enumerate_families(masks, ix + 1, used.union(masks[ix]), family, visit)?;
            family.pop();
        }
    }
    Ok(())
}

/// Counts the fiber when exactly one subset `i` is resonant, from the
/// subset and its abelian number alone.
///
/// For a proper subset the correction subtracts
/// `[max(0, c_1) d(mu_1) + max(0, c_2) d(mu_2)] * f * ab` where `mu_1`
/// moves the subset's poles onto the first distinguished point (orders
/// `(c_1 - k, a2)` over the remaining poles) and `mu_2` onto the second;
/// when `i` is all the poles the bracket collapses to 1.
pub fn fiber_count_single(sig: &Signature, i: SubsetMask, ab: u64) -> Result<BigInt> {
    if i.is_empty() {
        return Err(Error::EmptySubset);
    }
    let p = sig.p();
    if i.bits() >> p != 0 {
        return Err(Error::SubsetOutOfRange { mask: i.bits(), p });
    }
    let k = sig.k();
    let d = sig.degree_by_expansion(Side::First)?;
    let f = abelian_f(sig.b_sum(i) / k as i128 - 1, i.len() + 1)?;
    let narrow = |v: i128| {
        i64::try_from(v).map_err(|_| Error::InvalidPartition {
            reason: format!("reduced order {v} overflows"),
        })
    };
    let bracket = if i == SubsetMask::full(p) {
        Rational::one()
    } else {
        let rest: Vec<i64> = i
            .complement(p)
            .indices()
            .into_iter()
            .map(|ix| sig.b()[ix - 1])
            .collect();
        let c1 = sig.c_coeff(Side::First, i);
        let c2 = sig.c_coeff(Side::Second, i);
        let mut acc = Rational::zero();
        if c1 > 0 {
            let mu = Signature::new(k, narrow(c1 - k as i128)?, sig.a2(), rest.clone())?;
            acc += rat(c1) * mu.degree_by_expansion(Side::First)?;
        }
        if c2 > 0 {
            let mu = Signature::new(k, sig.a1(), narrow(c2 - k as i128)?, rest)?;
            acc += rat(c2) * mu.degree_by_expansion(Side::First)?;
        }
        acc
    };
    let total = d - bracket * f * rat(ab as i128);
    if !total.is_integer() {
        return Err(Error::NonIntegerResult {
            context: "fiber_count_single",
            value: format_fraction(&total),
        });
    }
    Ok(total.to_integer())
}

struct BigIntField<'a>(&'a BigInt);

impl Serialize for BigIntField<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use num::ToPrimitive;
        const SAFE: i64 = 1 << 53;
        match self.0.to_i64() {
            Some(v) if (-SAFE..=SAFE).contains(&v) => serializer.serialize_i64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Serialize)]
struct TermRepr {
    #[serde(rename = "J0")]
    j0: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    contribution: String,
}

impl Serialize for FiberReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|t| TermRepr {
                j0: t.partition.j0().indices(),
                blocks: t.partition.blocks().iter().map(|b| b.indices()).collect(),
                contribution: format_fraction(&t.contribution),
            })
            .collect();
        let mut st = serializer.serialize_struct("FiberReport", 4)?;
        st.serialize_field("count", &BigIntField(&self.count))?;
        st.serialize_field("degree", &BigIntField(&self.degree))?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("unverified_regime", &self.unverified_regime)?;
        st.end()
    }
}
