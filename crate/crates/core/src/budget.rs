//! Caps on exhaustive enumeration.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Default cap on the number of candidates a single scan may visit (`2^24`).
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Environment variable that overrides [`DEFAULT_BUDGET`] in front ends.
pub const BUDGET_ENV: &str = "FQ_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { cap: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget { cap }
    }

    pub fn unlimited() -> Self {
        Budget { cap: u64::MAX }
    }

    /// Reads [`BUDGET_ENV`], falling back to the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn check(&self, requested: &BigUint) -> Result<u64> {
        match requested.to_u64() {
            Some(n) if n <= self.cap => Ok(n),
            _ => Err(Error::BudgetExceeded {
                requested: requested.to_string(),
                cap: self.cap,
            }),
        }
    }

    /// Checks that `q^n` candidates fit.
    pub fn check_power(&self, q: u64, n: usize) -> Result<u64> {
        let mut total = BigUint::one();
        for _ in 0..n {
            total *= q;
        }
        self.check(&total)
    }
}
