//! Memory budgets for the heavy pipeline steps.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET_MB: u64 = 2048;

const MB: u64 = 1 << 20;

/// Known Dedekind numbers `d_0..=d_8`, used only for size estimates.
pub const DEDEKIND: [u128; 9] = [
    2,
    3,
    6,
    20,
    168,
    7581,
    7_828_354,
    2_414_682_040_998,
    56_130_437_228_687_557_907_788,
];

/// Caps memory-heavy steps; exceeding it yields [`Error::Budget`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    bytes: u64,
}

impl Budget {
    pub fn from_mb(mb: u64) -> Self {
        Self {
            bytes: mb.saturating_mul(MB),
        }
    }

    pub fn unlimited() -> Self {
        Self { bytes: u64::MAX }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    pub fn check(&self, what: impl Into<String>, needed: u128) -> Result<()> {
        if needed > self.bytes as u128 {
            return Err(Error::Budget {
                what: what.into(),
                needed_mb: (needed / MB as u128).min(u64::MAX as u128) as u64,
                budget_mb: self.bytes / MB,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_mb(DEFAULT_BUDGET_MB)
    }
}

/// Elements plus sort scratch plus index for a materialized layer.
pub fn layer_bytes(n: usize) -> u128 {
    DEDEKIND.get(n).map_or(u128::MAX, |d| d.saturating_mul(24))
}

/// Up-set adjacency of layer `n` has one entry per comparable pair, `d_{n+1}`.
pub fn up_sets_bytes(n: usize) -> u128 {
    DEDEKIND
        .get(n + 1)
        .map_or(u128::MAX, |d| d.saturating_mul(4))
}

/// Dense `d_n x d_n` table of 16-bit counts.
pub fn full_table_bytes(n: usize) -> u128 {
    DEDEKIND
        .get(n)
        .map_or(u128::MAX, |d| d.saturating_mul(*d).saturating_mul(2))
}
