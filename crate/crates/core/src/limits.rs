use crate::error::{Error, Result};

/// Capacity bounds for every brute-force computation.
///
/// Exceeding a bound is reported as [`Error::Capacity`]; nothing is ever
/// silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier an algebra may have (products, quotients, term-function
    /// algebras materialised as tables).
    pub max_carrier: u64,
    /// Largest number of points or table entries a single sweep may visit.
    pub max_points: u64,
    /// Largest number of elements a subalgebra closure may produce.
    pub max_closure: u64,
    /// Term depth bound for witness searches (inconsistent one-variable systems).
    pub witness_depth: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 1_000_000,
            max_points: 10_000_000,
            max_closure: 1_000_000,
            witness_depth: 4,
        }
    }
}

impl Limits {
    pub(crate) fn check_carrier(&self, needed: u128) -> Result<()> {
        if needed > self.max_carrier as u128 {
            return Err(Error::capacity("carrier", needed, self.max_carrier));
        }
        Ok(())
    }

    pub(crate) fn check_points(&self, needed: u128) -> Result<()> {
        if needed > self.max_points as u128 {
            return Err(Error::capacity("enumeration", needed, self.max_points));
        }
        Ok(())
    }
}

/// `base^exp` without overflow, saturating at `u128::MAX`.
pub(crate) fn checked_pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}
