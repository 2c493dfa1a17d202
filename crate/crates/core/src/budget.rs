//! Limits on the size of instantiated matrices and enumerations.
//!
//! The limit is counted in stored matrix entries (or enumerated points for
//! character sweeps). It is read from `ALEXINV_MAX_ENTRIES` when set;
//! `0` means no limit.

use crate::error::{Error, Result};

pub const ENTRY_BUDGET_VAR: &str = "ALEXINV_MAX_ENTRIES";
pub const DEFAULT_MAX_ENTRIES: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_entries: Option<u64>,
}

impl Budget {
    pub fn limited(max_entries: u64) -> Self {
        Budget { max_entries: Some(max_entries) }
    }

    pub fn unlimited() -> Self {
        Budget { max_entries: None }
    }

    /// The environment limit, or the default when unset. `0` lifts the limit.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENTRY_BUDGET_VAR) {
            Ok(s) => s
                .trim()
                .parse::<u64>()
                .map(|n| if n == 0 { Budget::unlimited() } else { Budget::limited(n) })
                .map_err(|_| Error::InvalidInput(format!("{ENTRY_BUDGET_VAR}={s:?} is not a non-negative integer"))),
            Err(_) => Ok(Budget::limited(DEFAULT_MAX_ENTRIES)),
        }
    }

    pub fn max_entries(&self) -> Option<u64> {
        self.max_entries
    }

    pub fn check(&self, what: &str, needed: u64) -> Result<()> {
        match self.max_entries {
            Some(limit) if needed > limit => Err(Error::BudgetExceeded { what: what.to_string(), needed, limit }),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::limited(DEFAULT_MAX_ENTRIES)
    }
}
