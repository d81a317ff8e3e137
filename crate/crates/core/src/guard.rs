//! Scale guards. All of them can be lifted by setting
//! `MATFREE_GUARD_OVERRIDE=1`; the hard limits cannot.

use crate::error::{Error, Result};

pub const OVERRIDE_ENV: &str = "MATFREE_GUARD_OVERRIDE";

/// Hyperplane count accepted by lattice construction and MAT search.
pub const MAX_HYPERPLANES: usize = 24;
/// Hyperplane count accepted by the inductive-freeness search.
pub const MAX_INDUCTIVE_HYPERPLANES: usize = 12;
/// Number of points a subspace may have before enumeration is refused.
pub const MAX_POINTS: u128 = 1 << 20;
/// Atom sets are stored as `u64` masks.
pub const HARD_MAX_HYPERPLANES: usize = 64;

pub fn lifted() -> bool {
    std::env::var(OVERRIDE_ENV).map(|v| v == "1").unwrap_or(false)
}

pub fn check(what: &'static str, value: u128, limit: u128) -> Result<()> {
    if value > limit && !lifted() {
        return Err(Error::GuardExceeded { what, value, limit });
    }
    Ok(())
}

pub fn check_hard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::HardLimit { what, value, limit });
    }
    Ok(())
}
