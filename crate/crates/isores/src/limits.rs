//! Guards that keep the exponential enumerations at desk scale.
//!
//! Subset sums run over `2^p` subsets and root-choice scans over `k^(p-1)`
//! tuples, so both are capped: the subset side by a pole-count bound
//! (default 16, overridable through the `ISORES_MAX_P` environment
//! variable) and the root side by a fixed work budget.  Hitting a cap is a
//! structured error, never a silent truncation.

/// Default upper bound on the number of poles in any subset enumeration.
pub const DEFAULT_MAX_P: u32 = 16;

/// Maximum number of root choices any single enumeration may visit.
pub const ROOT_CHOICE_BUDGET: u64 = 100_000_000;

/// Name of the environment variable overriding [`DEFAULT_MAX_P`].
pub const MAX_P_ENV: &str = "ISORES_MAX_P";

/// The pole-count bound currently in force: `ISORES_MAX_P` if set to a
/// positive integer, otherwise [`DEFAULT_MAX_P`].
pub fn enumeration_bound() -> u32 {
    std::env::var(MAX_P_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(DEFAULT_MAX_P)
}

/// Errors out if `p` poles exceed the current enumeration bound.
pub fn check_enumeration_bound(p: usize) -> crate::error::Result<()> {
    let bound = enumeration_bound();
    if p > bound as usize {
        return Err(crate::error::Error::EnumerationBoundExceeded { p, bound });
    }
    Ok(())
}

/// Errors out if a scan over `k^exponent` root choices busts the budget.
pub fn check_root_budget(k: u32, exponent: u32) -> crate::error::Result<()> {
    let mut required: u128 = 1;
    for _ in 0..exponent {
        required = required.saturating_mul(k.max(1) as u128);
        if required > ROOT_CHOICE_BUDGET as u128 {
            return Err(crate::error::Error::RootBudgetExceeded {
                required,
                budget: ROOT_CHOICE_BUDGET,
            });
        }
    }
    Ok(())
}
