//! Resonance analysis of projective residue tuples.
//!
//! A k-th order pole with residue invariant `R_i` determines its local datum
//! only up to the choice of a k-th root `r_i` of `R_i`.  A subset `I` of the
//! poles is *resonant* when some choice of roots sums to zero over `I`:
//!
//! ```text
//! sum over i in I of zeta_k^{e_i} r_i = 0     for some exponents e_i.
//! ```
//!
//! Scaling all roots in `I` by a common `zeta_k` power preserves vanishing,
//! so enumerations fix the exponent of the smallest member of `I` to zero
//! (the "slice").  The [abelian number] of `I` counts vanishing slice tuples;
//! it counts vanishing root choices modulo the simultaneous `zeta_k` action,
//! and the unrestricted count is exactly `k` times larger.
//!
//! Tuples come in two flavors.  Exact tuples hold roots in a cyclotomic
//! field, where vanishing is decided by exact coefficient arithmetic.
//! Numeric tuples hold floating residues and compare moduli against a
//! tolerance `tol`; any sum landing in the band `[tol, 10*tol)` is reported
//! as a warning because the verdict is then sensitive to the tolerance.
//!
//! [abelian number]: ResidueTuple::abelian_number

use num::complex::Complex64;
use num::integer::lcm;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::limits;
use crate::rational::Rational;
use crate::strata::SubsetMask;

/// A projective tuple of k-th order residues, in exact or numeric form.
#[derive(Debug, Clone)]
pub enum ResidueTuple {
    Exact(ExactTuple),
    Numeric(NumericTuple),
}

/// Roots of the residues living in a common cyclotomic field.
#[derive(Debug, Clone)]
pub struct ExactTuple {
    k: u32,
    conductor: u32,
    roots: Vec<CyclotomicElement>,
    zeta: CyclotomicElement,
}

/// Floating residues compared against a tolerance.
#[derive(Debug, Clone)]
pub struct NumericTuple {
    k: u32,
    values: Vec<Complex64>,
    tol: f64,
    roots: Vec<Complex64>,
}

/// Verdict for one subset: `resonant` is the decision, `ambiguous` flags a
/// numeric sum in the warning band (always false for exact tuples).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetStatus {
    pub resonant: bool,
    pub ambiguous: bool,
}

/// One resonant subset together with its abelian number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileEntry {
    pub subset: SubsetMask,
    pub abelian: u64,
}

/// Numeric-mode context attached to results derived from a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMeta {
    pub tol: f64,
    /// Subsets with some sum in `[tol, 10*tol)`, resonant or not.
    pub warnings: Vec<SubsetMask>,
}

/// All resonant subsets of a tuple, sorted ascending by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceProfile {
    entries: Vec<ProfileEntry>,
    numeric: Option<NumericMeta>,
}

impl ResonanceProfile {
    pub fn entries(&self) -> &[ProfileEntry] {
        &self.entries
    }

    pub fn numeric(&self) -> Option<&NumericMeta> {
        self.numeric.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn abelian_for(&self, subset: SubsetMask) -> Option<u64> {
        self.entries
            .iter()
            .find(|e| e.subset == subset)
            .map(|e| e.abelian)
    }
}

/// Value of the resonance polynomial at a tuple: the product of all
/// `k^|I|` root-choice sums over the subset.
#[derive(Debug, Clone, PartialEq)]
pub enum ResonanceValue {
    Exact(CyclotomicElement),
    Numeric(Complex64),
}

impl ResonanceValue {
    /// The exact value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ResonanceValue::Exact(x) => x.as_rational(),
            ResonanceValue::Numeric(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            ResonanceValue::Exact(x) => x.to_complex(),
            ResonanceValue::Numeric(z) => *z,
        }
    }
}

impl ResidueTuple {
    /// Builds an exact tuple from chosen roots `r_i` (so residue `R_i = r_i^k`).
    /// All roots are embedded into `Q(zeta_L)` for `L = lcm` of `k` and every
    /// root's conductor.
    pub fn exact_from_roots(k: u32, roots: Vec<CyclotomicElement>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidLevel(k as i64));
        }
        if roots.is_empty() {
            return Err(Error::EmptyPoleList);
        }
        if roots.len() > 63 {
            return Err(Error::TooManyPoles { p: roots.len() });
        }
        let mut conductor = k;
        for r in &roots {
            conductor = lcm(conductor, r.conductor());
        }
        let mut embedded = Vec::with_capacity(roots.len());
        for (i, r) in roots.into_iter().enumerate() {
            let e = r.embed(conductor).expect("lcm is a multiple");
            if e.is_zero() {
                return Err(Error::ZeroResidue { index: i + 1 });
            }
            embedded.push(e);
        }
        let zeta = CyclotomicElement::root_of_unity(conductor, (conductor / k) as i64);
        Ok(ResidueTuple::Exact(ExactTuple {
            k,
            conductor,
            roots: embedded,
            zeta,
        }))
    }

    /// Parses textual root expressions at the given conductor.
    pub fn exact_parse<S: AsRef<str>>(k: u32, conductor: u32, exprs: &[S]) -> Result<Self> {
        let roots = exprs
            .iter()
            .map(|s| CyclotomicElement::parse(s.as_ref(), conductor))
            .collect::<Result<Vec<_>>>()?;
        Self::exact_from_roots(k, roots)
    }

    /// Builds a numeric tuple from residue values `(re, im)` and a tolerance.
    /// Root choices are the principal k-th root times each k-th root of unity.
    pub fn numeric(k: u32, values: Vec<(f64, f64)>, tol: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidLevel(k as i64));
        }
        if values.is_empty() {
            return Err(Error::EmptyPoleList);
        }
        if values.len() > 63 {
            return Err(Error::TooManyPoles { p: values.len() });
        }
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::NonPositiveTolerance(tol));
        }
        let values: Vec<Complex64> = values
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        let mut roots = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            let modulus = v.norm();
            if modulus.is_nan() || modulus <= tol {
                return Err(Error::ResidueBelowTolerance { index: i + 1 });
            }
            roots.push(Complex64::from_polar(
                v.norm().powf(1.0 / k as f64),
                v.arg() / k as f64,
            ));
        }
        Ok(ResidueTuple::Numeric(NumericTuple {
            k,
            values,
            tol,
            roots,
        }))
    }

    pub fn k(&self) -> u32 {
        match self {
            ResidueTuple::Exact(t) => t.k,
            ResidueTuple::Numeric(t) => t.k,
        }
    }

    /// Number of poles.
    pub fn p(&self) -> usize {
        match self {
            ResidueTuple::Exact(t) => t.roots.len(),
            ResidueTuple::Numeric(t) => t.values.len(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ResidueTuple::Numeric(_))
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            ResidueTuple::Exact(_) => None,
            ResidueTuple::Numeric(t) => Some(t.tol),
        }
    }

    fn subset_positions(&self, i: SubsetMask) -> Result<Vec<usize>> {
        if i.is_empty() {
            return Err(Error::EmptySubset);
        }
        let p = self.p();
        if i.bits() >> p != 0 {
            return Err(Error::SubsetOutOfRange { mask: i.bits(), p });
        }
        Ok(i.indices().into_iter().map(|x| x - 1).collect())
    }

    /// Whether some root choice sums to zero over `i`.
    pub fn is_resonant(&self, i: SubsetMask) -> Result<bool> {
        Ok(self.subset_status(i)?.resonant)
    }

    /// Resonance verdict plus the numeric warning flag.
    pub fn subset_status(&self, i: SubsetMask) -> Result<SubsetStatus> {
        let positions = self.subset_positions(i)?;
        limits::check_root_budget(self.k(), positions.len() as u32 - 1)?;
        match self {
            ResidueTuple::Exact(t) => {
                let mut resonant = false;
                t.scan_slice(&positions, &mut |sum| {
                    if sum.is_zero() {
                        resonant = true;
                    }
                    resonant
                });
                Ok(SubsetStatus {
                    resonant,
                    ambiguous: false,
                })
            }
            ResidueTuple::Numeric(t) => {
                let mut status = SubsetStatus {
                    resonant: false,
                    ambiguous: false,
                };
                t.scan_slice(&positions, &mut |sum| {
                    let m = sum.norm();
                    if m < t.tol {
                        status.resonant = true;
                    } else if m < 10.0 * t.tol {
                        status.ambiguous = true;
                    }
                    false
                });
                Ok(status)
            }
        }
    }

    /// Number of vanishing root choices over `i` with the smallest member's
    /// exponent fixed to zero; equivalently, vanishing choices modulo the
    /// simultaneous `zeta_k` rescaling.
    pub fn abelian_number(&self, i: SubsetMask) -> Result<u64> {
        let positions = self.subset_positions(i)?;
        limits::check_root_budget(self.k(), positions.len() as u32 - 1)?;
        let mut count = 0u64;
        match self {
            ResidueTuple::Exact(t) => t.scan_slice(&positions, &mut |sum| {
                if sum.is_zero() {
                    count += 1;
                }
                false
            }),
            ResidueTuple::Numeric(t) => t.scan_slice(&positions, &mut |sum| {
                if sum.norm() < t.tol {
                    count += 1;
                }
                false
            }),
        };
        Ok(count)
    }

    /// All resonant subsets (size at least 2; singletons cannot vanish since
    /// residues are nonzero) with their abelian numbers, plus numeric
    /// warnings when applicable.
    pub fn resonant_subsets(&self) -> Result<ResonanceProfile> {
        let p = self.p();
        limits::check_enumeration_bound(p)?;
        limits::check_root_budget(self.k(), p.saturating_sub(1) as u32)?;
        let mut entries = Vec::new();
        let mut warnings = Vec::new();
        for mask in SubsetMask::all_subsets(p) {
            if mask.len() < 2 {
                continue;
            }
            let abelian = self.abelian_number(mask)?;
            if abelian > 0 {
                entries.push(ProfileEntry {
                    subset: mask,
                    abelian,
                });
            }
            if self.is_numeric() && self.subset_status(mask)?.ambiguous {
                warnings.push(mask);
            }
        }
        Ok(ResonanceProfile {
            entries,
            numeric: self.tolerance().map(|tol| NumericMeta { tol, warnings }),
        })
    }

    /// Evaluates the resonance polynomial of `i`: the product of the subset
    /// sums over all `k^|I|` root choices.  Exact tuples give an exact
    /// cyclotomic value (rational whenever the residues are), numeric tuples
    /// a complex value.  Zero exactly when `i` is resonant.
    pub fn eval_resonance_polynomial(&self, i: SubsetMask) -> Result<ResonanceValue> {
        let positions = self.subset_positions(i)?;
        limits::check_root_budget(self.k(), positions.len() as u32)?;
        match self {
            ResidueTuple::Exact(t) => {
                let mut product = CyclotomicElement::one(t.conductor);
                t.scan_full(&positions, &mut |sum| {
                    product = &product * sum;
                    false
                });
                Ok(ResonanceValue::Exact(product))
            }
            ResidueTuple::Numeric(t) => {
                let mut product = Complex64::new(1.0, 0.0);
                t.scan_full(&positions, &mut |sum| {
                    product *= sum;
                    false
                });
                Ok(ResonanceValue::Numeric(product))
            }
        }
    }

    /// The residual systole: the smallest modulus of a nonzero subset sum,
    /// over all nonempty subsets and all root choices.  Vanishing sums are
    /// excluded exactly (or below `tol` in numeric mode); only the final
    /// modulus is floating point.
    pub fn residual_systole(&self) -> Result<f64> {
        let p = self.p();
        limits::check_enumeration_bound(p)?;
        limits::check_root_budget(self.k(), p.saturating_sub(1) as u32)?;
        let mut best = f64::INFINITY;
        for mask in SubsetMask::all_subsets(p) {
            if mask.is_empty() {
                continue;
            }
            let positions = self.subset_positions(mask)?;
            match self {
                ResidueTuple::Exact(t) => t.scan_slice(&positions, &mut |sum| {
                    if !sum.is_zero() {
                        best = best.min(sum.modulus());
                    }
                    false
                }),
                ResidueTuple::Numeric(t) => t.scan_slice(&positions, &mut |sum| {
                    let m = sum.norm();
                    if m >= t.tol {
                        best = best.min(m);
                    }
                    false
                }),
            };
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::InternalInconsistency {
                context: "residual_systole",
                detail: "every subset sum vanished".to_string(),
            })
        }
    }
}

impl ExactTuple {
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn roots(&self) -> &[CyclotomicElement] {
        &self.roots
    }

    /// Visits each slice sum (first position's exponent fixed to zero).
    /// `visit` returns true to stop early; the return value mirrors that.
    fn scan_slice(&self, positions: &[usize], visit: &mut dyn FnMut(&CyclotomicElement) -> bool) -> bool {
        let first = &self.roots[positions[0]];
        self.recurse(positions, 1, first.clone(), visit)
    }

    /// Visits each sum over all `k^d` root choices.
    fn scan_full(&self, positions: &[usize], visit: &mut dyn FnMut(&CyclotomicElement) -> bool) -> bool {
        let mut term = self.roots[positions[0]].clone();
        for e in 0..self.k {
            if self.recurse(positions, 1, term.clone(), visit) {
                return true;
            }
            if e + 1 < self.k {
                term = &term * &self.zeta;
            }
        }
        false
    }

    fn recurse(
        &self,
        positions: &[usize],
        depth: usize,
        acc: CyclotomicElement,
        visit: &mut dyn FnMut(&CyclotomicElement) -> bool,
    ) -> bool {
        if depth == positions.len() {
            return visit(&acc);
        }
        let mut term = self.roots[positions[depth]].clone();
        for e in 0..self.k {
            if self.recurse(positions, depth + 1, &acc + &term, visit) {
                return true;
            }
            if e + 1 < self.k {
                term = &term * &self.zeta;
            }
        }
        false
    }
}

impl NumericTuple {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn zeta(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU / self.k as f64)
    }

    fn scan_slice(&self, positions: &[usize], visit: &mut dyn FnMut(Complex64) -> bool) -> bool {
        self.recurse(positions, 1, self.roots[positions[0]], visit)
    }

    fn scan_full(&self, positions: &[usize], visit: &mut dyn FnMut(Complex64) -> bool) -> bool {
        let mut term = self.roots[positions[0]];
        for _ in 0..self.k {
            if self.recurse(positions, 1, term, visit) {
                return true;
            }
            term *= self.zeta();
        }
        false
    }

    fn recurse(
        &self,
        positions: &[usize],
        depth: usize,
        acc: Complex64,
        visit: &mut dyn FnMut(Complex64) -> bool,
    ) -> bool {
        if depth == positions.len() {
            return visit(acc);
        }
        let mut term = self.roots[positions[depth]];
        for _ in 0..self.k {
            if self.recurse(positions, depth + 1, acc + term, visit) {
                return true;
            }
            term *= self.zeta();
        }
        false
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode")]
enum ResidueTupleRepr {
    #[serde(rename = "roots")]
    Roots {
        k: u32,
        #[serde(rename = "N")]
        n: u32,
        roots: Vec<RootRepr>,
    },
    #[serde(rename = "numeric")]
    Numeric {
        k: u32,
        values: Vec<(f64, f64)>,
        tol: f64,
    },
}

/// A root is either a textual expression or ascending `[numer, denom]`
/// power-basis coefficients.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RootRepr {
    Text(String),
    PowerCoeffs(Vec<(i64, i64)>),
}

impl Serialize for ResidueTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ResidueTuple::Exact(t) => ResidueTupleRepr::Roots {
                k: t.k,
                n: t.conductor,
                roots: t
                    .roots
                    .iter()
                    .map(|r| RootRepr::Text(r.to_string()))
                    .collect(),
            },
            ResidueTuple::Numeric(t) => ResidueTupleRepr::Numeric {
                k: t.k,
                values: t.values.iter().map(|v| (v.re, v.im)).collect(),
                tol: t.tol,
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResidueTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ResidueTupleRepr::deserialize(deserializer)?;
        let built = match repr {
            ResidueTupleRepr::Roots { k, n, roots } => {
                if n < 1 {
                    return Err(serde::de::Error::custom("conductor N must be at least 1"));
                }
                let parsed: Result<Vec<CyclotomicElement>> = roots
                    .iter()
                    .map(|r| match r {
                        RootRepr::Text(s) => CyclotomicElement::parse(s, n),
                        RootRepr::PowerCoeffs(pairs) => {
                            let coeffs: Result<Vec<Rational>> = pairs
                                .iter()
                                .map(|&(num, den)| {
                                    if den == 0 {
                                        Err(Error::Parse {
                                            input: format!("[{num},{den}]"),
                                            reason: "zero denominator".to_string(),
                                        })
                                    } else {
                                        Ok(crate::rational::frac(num as i128, den as i128))
                                    }
                                })
                                .collect();
                            Ok(CyclotomicElement::from_power_coeffs(n, &coeffs?))
                        }
                    })
                    .collect();
                parsed.and_then(|roots| ResidueTuple::exact_from_roots(k, roots))
            }
            ResidueTupleRepr::Numeric { k, values, tol } => ResidueTuple::numeric(k, values, tol),
        };
        built.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(indices: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(indices).unwrap()
    }

    fn ones(k: u32, p: usize) -> ResidueTuple {
        ResidueTuple::exact_from_roots(k, vec![CyclotomicElement::one(1); p]).unwrap()
    }

    /// The worked three-pole tuple: roots (1, 1, 1 + zeta_4) at k = 4,
    /// residues [1 : 1 : -4].
    fn worked_tuple() -> ResidueTuple {
        ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ResidueTuple::exact_parse(4, 4, &["1", "1+z^2", "1"]),
            Err(Error::ZeroResidue { index: 2 })
        ));
        assert!(matches!(
            ResidueTuple::exact_parse(0, 4, &["1"]),
            Err(Error::InvalidLevel(0))
        ));
        assert!(matches!(
            ResidueTuple::exact_from_roots(4, vec![]),
            Err(Error::EmptyPoleList)
        ));
        assert!(matches!(
            ResidueTuple::numeric(2, vec![(1.0, 0.0)], 0.0),
            Err(Error::NonPositiveTolerance(_))
        ));
        assert!(matches!(
            ResidueTuple::numeric(2, vec![(1e-12, 0.0)], 1e-9),
            Err(Error::ResidueBelowTolerance { index: 1 })
        ));
    }

    #[test]
    fn resonance_of_the_worked_tuple() {
        let t = worked_tuple();
        assert!(t.is_resonant(mask(&[1, 2])).unwrap());
        assert!(t.is_resonant(mask(&[1, 2, 3])).unwrap());
        assert!(!t.is_resonant(mask(&[1, 3])).unwrap());
        assert!(!t.is_resonant(mask(&[2, 3])).unwrap());
        assert!(!t.is_resonant(mask(&[1])).unwrap());

        let profile = t.resonant_subsets().unwrap();
        let got: Vec<(SubsetMask, u64)> = profile
            .entries()
            .iter()
            .map(|e| (e.subset, e.abelian))
            .collect();
        assert_eq!(got, vec![(mask(&[1, 2]), 1), (mask(&[1, 2, 3]), 2)]);
        assert!(profile.numeric().is_none());
    }

    #[test]
    fn non_resonant_tuple_has_empty_profile() {
        let t = ResidueTuple::exact_parse(3, 1, &["1", "2", "4"]).unwrap();
        assert!(t.resonant_subsets().unwrap().is_empty());
    }

    #[test]
    fn abelian_numbers_for_equal_roots() {
        // k = 3, roots (1, 1, 1): the vanishing slice choices are the two
        // rotations (1, w, w^2) and (1, w^2, w).
        let t3 = ones(3, 3);
        assert_eq!(t3.abelian_number(mask(&[1, 2, 3])).unwrap(), 2);
        // k = 4, four equal roots: 3 sign patterns + 6 arrangements with i, -i.
        let t4 = ones(4, 4);
        assert_eq!(t4.abelian_number(mask(&[1, 2, 3, 4])).unwrap(), 9);
        // k = 4, six equal roots.
        let t6 = ones(4, 6);
        assert_eq!(t6.abelian_number(SubsetMask::full(6)).unwrap(), 100);
        assert_eq!(t6.abelian_number(mask(&[2, 5])).unwrap(), 1);
        assert_eq!(t6.abelian_number(mask(&[1, 2, 3])).unwrap(), 0);
    }

    #[test]
    fn profile_of_six_equal_roots() {
        let t = ones(4, 6);
        let profile = t.resonant_subsets().unwrap();
        assert_eq!(profile.len(), 31);
        let mut by_size = [0usize; 7];
        for e in profile.entries() {
            by_size[e.subset.len() as usize] += 1;
            let expected = match e.subset.len() {
                2 => 1,
                4 => 9,
                6 => 100,
                _ => unreachable!("odd subsets cannot be resonant here"),
            };
            assert_eq!(e.abelian, expected, "{}", e.subset);
        }
        assert_eq!(by_size[2], 15);
        assert_eq!(by_size[4], 15);
        assert_eq!(by_size[6], 1);
    }

    #[test]
    fn worked_tuple_abelian_number() {
        let t = worked_tuple();
        assert_eq!(t.abelian_number(mask(&[1, 2])).unwrap(), 1);
        assert_eq!(t.abelian_number(mask(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(t.abelian_number(mask(&[1, 3])).unwrap(), 0);
    }

    #[test]
    fn resonance_polynomial_values() {
        // k = 2, roots (1, 2): (1+2)(1-2)(-1+2)(-1-2) = 9 = (R1 - R2)^2.
        let t = ResidueTuple::exact_parse(2, 1, &["1", "2"]).unwrap();
        let v = t.eval_resonance_polynomial(mask(&[1, 2])).unwrap();
        assert_eq!(v.as_rational(), Some(crate::rational::rat(9)));
        // Vanishes exactly on resonant subsets.
        let z = ones(3, 3)
            .eval_resonance_polynomial(mask(&[1, 2, 3]))
            .unwrap();
        assert_eq!(z.as_rational(), Some(crate::rational::rat(0)));
        let z2 = ResidueTuple::exact_parse(2, 1, &["1", "1"])
            .unwrap()
            .eval_resonance_polynomial(mask(&[1, 2]))
            .unwrap();
        assert_eq!(z2.as_rational(), Some(crate::rational::rat(0)));
    }

    #[test]
    fn systole_values() {
        assert!((ones(3, 3).residual_systole().unwrap() - 1.0).abs() < 1e-12);
        let t = ResidueTuple::exact_parse(2, 1, &["1", "10"]).unwrap();
        assert!((t.residual_systole().unwrap() - 1.0).abs() < 1e-12);
        // k = 1: the only sums are 3, -3 and the excluded zero.
        let u = ResidueTuple::exact_parse(1, 1, &["3", "-3"]).unwrap();
        assert!((u.residual_systole().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_mode_matches_exact_mode() {
        let t = ResidueTuple::numeric(4, vec![(1.0, 0.0), (1.0, 0.0), (-4.0, 0.0)], 1e-9).unwrap();
        let profile = t.resonant_subsets().unwrap();
        let got: Vec<(SubsetMask, u64)> = profile
            .entries()
            .iter()
            .map(|e| (e.subset, e.abelian))
            .collect();
        assert_eq!(got, vec![(mask(&[1, 2]), 1), (mask(&[1, 2, 3]), 2)]);
        let meta = profile.numeric().unwrap();
        assert_eq!(meta.tol, 1e-9);
        assert!(meta.warnings.is_empty());
    }

    #[test]
    fn numeric_warning_band() {
        let t = ResidueTuple::numeric(1, vec![(1.0, 0.0), (-1.0 - 5e-9, 0.0)], 1e-9).unwrap();
        let status = t.subset_status(mask(&[1, 2])).unwrap();
        assert!(!status.resonant);
        assert!(status.ambiguous);
        let profile = t.resonant_subsets().unwrap();
        assert!(profile.is_empty());
        assert_eq!(profile.numeric().unwrap().warnings, vec![mask(&[1, 2])]);
    }

    #[test]
    fn rescaling_one_root_by_zeta_preserves_everything() {
        let base = worked_tuple();
        let zeta = CyclotomicElement::root_of_unity(4, 1);
        let scaled_roots: Vec<CyclotomicElement> = match &base {
            ResidueTuple::Exact(t) => {
                let mut v = t.roots().to_vec();
                v[1] = &v[1] * &zeta;
                v
            }
            _ => unreachable!(),
        };
        let scaled = ResidueTuple::exact_from_roots(4, scaled_roots).unwrap();
        assert_eq!(
            base.resonant_subsets().unwrap().entries(),
            scaled.resonant_subsets().unwrap().entries()
        );
        assert_eq!(
            base.abelian_number(mask(&[1, 2, 3])).unwrap(),
            scaled.abelian_number(mask(&[1, 2, 3])).unwrap()
        );
    }

    #[test]
    fn subset_argument_validation() {
        let t = worked_tuple();
        assert_eq!(t.is_resonant(SubsetMask::EMPTY), Err(Error::EmptySubset));
        assert!(matches!(
            t.is_resonant(mask(&[1, 4])),
            Err(Error::SubsetOutOfRange { .. })
        ));
    }

    #[test]
    fn budget_guard_trips_before_scanning() {
        let t = ResidueTuple::numeric(
            1000,
            vec![(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0)],
            1e-9,
        )
        .unwrap();
        assert!(matches!(
            t.is_resonant(SubsetMask::full(4)),
            Err(Error::RootBudgetExceeded { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"mode":"roots","k":4,"N":4,"roots":["1","1","1+z"]}"#;
        let t: ResidueTuple = serde_json::from_str(text).unwrap();
        assert_eq!(t.k(), 4);
        assert_eq!(t.p(), 3);
        assert!(t.is_resonant(mask(&[1, 2, 3])).unwrap());
        let back = serde_json::to_string(&t).unwrap();
        let t2: ResidueTuple = serde_json::from_str(&back).unwrap();
        assert_eq!(
            t.resonant_subsets().unwrap().entries(),
            t2.resonant_subsets().unwrap().entries()
        );

        let numeric = r#"{"mode":"numeric","k":4,"values":[[1,0],[1,0],[-4,0]],"tol":1e-9}"#;
        let n: ResidueTuple = serde_json::from_str(numeric).unwrap();
        assert!(n.is_numeric());
        assert_eq!(n.resonant_subsets().unwrap().len(), 2);

        // Power-coefficient roots: [[1,1],[1,1]] is 1 + zeta.
        let pairs = r#"{"mode":"roots","k":4,"N":4,"roots":["1","1",[[1,1],[1,1]]]}"#;
        let q: ResidueTuple = serde_json::from_str(pairs).unwrap();
        assert_eq!(q.resonant_subsets().unwrap().len(), 2);

        // Validation runs during deserialization.
        let bad = r#"{"mode":"roots","k":4,"N":4,"roots":["1","1+z^2"]}"#;
        assert!(serde_json::from_str::<ResidueTuple>(bad).is_err());
    }
}
