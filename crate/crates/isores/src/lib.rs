//! Exact arithmetic for the isoresidual cover of genus-zero strata of
//! k-differentials.
//!
//! A stratum signature `(k; a1, a2; [b_1, ..., b_p])` prescribes two zeros
//! (or mild singularities) of orders `a1`, `a2` coprime to `k` and `p`
//! poles of orders `b_i`, positive multiples of `k`, with
//! `a1 + a2 - sum b_i = -2k`.  The map sending a differential to its tuple
//! of k-th order residues is a ramified cover of `C^p`; this crate computes
//!
//! * the **degree** of that cover, by the exact subset expansion, by the
//!   closed form available when every pole has order `k`, and by a floating
//!   Gamma-function form ([`Signature`]);
//! * **resonance data** of a residue tuple — which subsets of poles admit
//!   vanishing root sums, their abelian numbers, the resonance polynomial,
//!   and the residual systole ([`ResidueTuple`]);
//! * **fiber cardinalities** over arbitrary tuples via the signed sum over
//!   resonant partitions ([`fiber_count`]);
//! * counts of **dihedral cone spherical metrics** ([`SphericalAngles`]).
//!
//! All decisions are made in exact arithmetic: big rationals, polynomial
//! rings over them, and cyclotomic fields `Q(zeta_N)` with exact zero
//! tests.  Floating point appears only in explicitly approximate outputs
//! (the Gamma form, complex embeddings, the numeric residue mode).
//!
//! # Example
//!
//! ```
//! use isores::{fiber_count, ResidueTuple, Signature};
//!
//! let sig = Signature::new(4, 5, -1, vec![4, 4, 4]).unwrap();
//! assert_eq!(sig.degree_generic().unwrap(), 5.into());
//!
//! let tuple = ResidueTuple::exact_parse(4, 4, &["1", "1", "1+z"]).unwrap();
//! let report = fiber_count(&sig, &tuple).unwrap();
//! assert_eq!(*report.count(), 0.into());
//! ```

pub mod counting;
pub mod cyclotomic;
pub mod error;
pub mod fiber;
pub mod limits;
pub mod poly;
pub mod rational;
pub mod resonance;
pub mod selfcheck;
pub mod spherical;
pub mod strata;

pub use counting::{abelian_f, binomial, fk_as_polynomial, k_factorial, partial_product};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CyclotomicElement};
pub use error::{Error, Result};
pub use fiber::{
    fiber_count, fiber_count_single, g_coefficient, reduced_signature, FiberReport, FiberTerm,
    ResonantPartition,
};
pub use poly::UniPoly;
pub use rational::{format_fraction, parse_rational, Rational};
pub use resonance::{
    NumericMeta, ProfileEntry, ResidueTuple, ResonanceProfile, ResonanceValue, SubsetStatus,
};
pub use selfcheck::{run_all, CheckOutcome};
pub use spherical::{Genericity, SphericalAngles};
pub use strata::{Side, Signature, SubsetMask};

pub use num::{BigInt, BigRational};
