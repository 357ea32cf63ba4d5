//! Crate-wide error type.
//!
//! A single enum covers every failure the library can report.  Variants fall
//! into two groups: rejections of invalid input (a caller mistake, such as a
//! signature whose orders do not sum to `-2k`) and internal consistency
//! failures (a bug in the library, such as a degree formula evaluating to a
//! non-integer).  [`Error::is_internal`] distinguishes the two so that a
//! front end can map them to different exit codes.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // ---- signature validation -------------------------------------------
    /// The level `k` must be a positive integer.
    #[error("level k must be at least 1, got {0}")]
    InvalidLevel(i64),
    /// Singularity orders must satisfy `a1 + a2 - sum(b) = -2k`.
    #[error("singularity orders sum to {got}, expected -2k = {expected}")]
    SumMismatch { got: i128, expected: i128 },
    /// Every pole order must be a positive multiple of `k`.
    #[error("pole order b[{index}] = {order} is not a positive multiple of k = {k}")]
    PoleOrderNotMultipleOfK { index: usize, order: i64, k: i64 },
    /// The zero orders `a1`, `a2` must be coprime to `k`.
    #[error("order a{which} = {order} is not coprime to k = {k}")]
    ZeroOrderNotCoprime { which: u8, order: i64, k: i64 },
    /// The first distinguished order must exceed `-k`.
    #[error("a1 = {a1} must be greater than -k = {minus_k}")]
    A1NotGreaterThanMinusK { a1: i64, minus_k: i64 },
    /// The second distinguished order may lie on either side of `-k` but not at it.
    #[error("a2 = -k = {minus_k} is not allowed")]
    A2EqualsMinusK { minus_k: i64 },
    /// At least one pole is required.
    #[error("signature needs at least one pole")]
    EmptyPoleList,
    /// Subset masks are stored in a 64-bit word.
    #[error("{p} poles exceed the subset-mask capacity of 63")]
    TooManyPoles { p: usize },

    // ---- combinatorial kernels ------------------------------------------
    /// `f_k(a, 1) = 1/(a+k)` has a pole at `a = -k`.
    #[error("partial product f_{k}({a}, 1) has a pole at a = -k")]
    PartialProductPole { k: i64, a: i128 },
    /// `f_k(a, 1)` is not polynomial in `a`, so it has no polynomial form.
    #[error("f_k(a, m) is polynomial in a only for m >= 2")]
    NotPolynomialInA,

    // ---- parsing ---------------------------------------------------------
    /// A textual expression (rational or cyclotomic) failed to parse.
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    // ---- cyclotomic arithmetic ------------------------------------------
    /// Embeddings only go from `Q(zeta_M)` into `Q(zeta_N)` when `M | N`.
    #[error("conductor {from} does not divide {to}")]
    ConductorNotMultiple { from: u32, to: u32 },
    /// Inversion of zero, or a vanishing denominator in a closed form.
    #[error("division by zero")]
    DivisionByZero,

    // ---- residue tuples --------------------------------------------------
    /// Residues (equivalently their chosen roots) must be nonzero.
    #[error("residue at position {index} is zero")]
    ZeroResidue { index: usize },
    /// Numeric residues must stand clear of the zero test.
    #[error("residue at position {index} has modulus at most tol")]
    ResidueBelowTolerance { index: usize },
    /// Numeric comparisons need a positive tolerance.
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    /// Subset arguments must be nonempty.
    #[error("subset of poles must be nonempty")]
    EmptySubset,
    /// Subset arguments must stay inside `{1, ..., p}`.
    #[error("subset {mask:#b} has members beyond pole count {p}")]
    SubsetOutOfRange { mask: u64, p: usize },

    // ---- enumeration guards ---------------------------------------------
    /// Subset enumerations are capped to keep runtimes predictable.
    #[error("{p} poles exceed the enumeration bound {bound} (set ISORES_MAX_P to raise it)")]
    EnumerationBoundExceeded { p: usize, bound: u32 },
    /// Root-choice enumerations are capped by a work budget.
    #[error("enumeration needs {required} root choices, budget is {budget}")]
    RootBudgetExceeded { required: u128, budget: u64 },

    // ---- fiber counting --------------------------------------------------
    /// The residue tuple must live at the same level as the signature.
    #[error("signature has k = {sig_k} but residue tuple has k = {tuple_k}")]
    LevelMismatch { sig_k: i64, tuple_k: i64 },
    /// The residue tuple must have one entry per pole.
    #[error("signature has {sig_p} poles but residue tuple has {tuple_p} entries")]
    TupleLengthMismatch { sig_p: usize, tuple_p: usize },
    /// Reduced signatures exist only when the split degrees are positive.
    #[error("reduced signature needs d{side} = {value} > 0")]
    ReductionGuard { side: u8, value: i128 },
    /// Partition arguments must consist of disjoint blocks plus the leftover set.
    #[error("invalid resonant partition: {reason}")]
    InvalidPartition { reason: String },

    // ---- closed-form preconditions --------------------------------------
    /// The closed form for the degree applies only when every pole has order `k`.
    #[error("closed form requires every pole order to equal k")]
    RequiresOrderKPoles,
    /// The closed form requires both distinguished orders above `-k`.
    #[error("closed form requires a1 > -k and a2 > -k")]
    RequiresZerosAboveMinusK,
    /// The closed form and its Gamma version are stated for levels k >= 2.
    #[error("closed form requires k >= 2")]
    RequiresLevelAtLeastTwo,

    // ---- spherical metrics ----------------------------------------------
    /// Both dihedral parameters must be odd positive integers.
    #[error("dihedral parameter {which} = {value} must be an odd positive integer")]
    DihedralParameterNotOdd { which: char, value: i64 },
    /// The parameters must satisfy `a + b = 2n` for `n` cone angles.
    #[error("a + b = {sum} does not equal twice the number of cone points (2 * {n})")]
    DihedralSumMismatch { sum: i64, n: usize },
    /// Cone angles must be positive.
    #[error("cone angle c[{index}] must be positive")]
    ConeAngleNotPositive { index: usize },
    /// Cone angles must be non-integer rationals.
    #[error("cone angle c[{index}] must not be an integer")]
    ConeAngleInteger { index: usize },
    /// The count formula needs angles with no vanishing signed sum.
    #[error("angles are non-generic: signed sum with signs {witness:?} vanishes")]
    NonGenericAngles { witness: Vec<i8> },

    // ---- internal consistency (bugs, never user error) -------------------
    /// A quantity that must be a nonnegative integer came out otherwise.
    #[error("internal: {context} produced non-integer value {value}")]
    NonIntegerResult { context: &'static str, value: String },
    /// A fiber cardinality came out fractional or negative.
    #[error("internal: fiber count {value} is not a nonnegative integer")]
    IntegralityFailure { value: String },
    /// The general and single-resonance counts disagree on a one-subset profile.
    #[error("internal: general fiber count {general} disagrees with single-resonance count {single}")]
    SingleResonanceMismatch { general: String, single: String },
    /// Any other cross-check wired into a computation failed.
    #[error("internal: {context}: {detail}")]
    InternalInconsistency { context: &'static str, detail: String },
}

impl Error {
    /// True for failures that indicate a bug in the library rather than a
    /// caller mistake.  Front ends report these with a distinct exit status.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonIntegerResult { .. }
                | Error::IntegralityFailure { .. }
                | Error::SingleResonanceMismatch { .. }
                | Error::InternalInconsistency { .. }
        )
    }
}
