//! Enumeration caps shared by the exhaustive operations.
//!
//! Every exhaustive routine takes an explicit cap and fails with
//! [`Error::BudgetExceeded`](crate::Error::BudgetExceeded) rather than
//! truncating. The defaults here are conservative desk-scale values.

/// Environment variable overriding [`Budget::enumeration`].
pub const BUDGET_ENV: &str = "HARDMAT_BUDGET";

/// Default cap on enumerated t-subsets, kernel vectors and similar.
pub const DEFAULT_ENUMERATION: u64 = 1_000_000;
/// Default cap on the number of t-subset sums sorted by the Sidon check.
pub const DEFAULT_SIDON_SUMS: u64 = 5_000_000;
/// Default upper limit for the Sidon prime search.
pub const DEFAULT_PRIME_BUDGET: u64 = 10_000_000;
/// Default cap on candidates examined by the irreducible polynomial search.
pub const DEFAULT_IRREDUCIBLE_CANDIDATES: u64 = 1_000_000;
/// Default cap on the side of the doubly-exponential matrix.
pub const DEFAULT_TRIVIAL_CAP: usize = 4;
/// Default cap on the side of the hard PSD instance.
pub const DEFAULT_PSD_CAP: usize = 64;
/// Default cap on search nodes in the depth-2 oracle.
pub const DEFAULT_SEARCH_NODES: u64 = 50_000_000;
/// Default cap on the bit length of a single integer entry.
pub const DEFAULT_MAX_ENTRY_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub enumeration: u64,
    pub sidon_sums: u64,
    pub prime_budget: u64,
    pub irreducible_candidates: u64,
    pub trivial_cap: usize,
    pub psd_cap: usize,
    pub search_nodes: u64,
    pub max_entry_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: DEFAULT_ENUMERATION,
            sidon_sums: DEFAULT_SIDON_SUMS,
            prime_budget: DEFAULT_PRIME_BUDGET,
            irreducible_candidates: DEFAULT_IRREDUCIBLE_CANDIDATES,
            trivial_cap: DEFAULT_TRIVIAL_CAP,
            psd_cap: DEFAULT_PSD_CAP,
            search_nodes: DEFAULT_SEARCH_NODES,
            max_entry_bits: DEFAULT_MAX_ENTRY_BITS,
        }
    }
}

impl Budget {
    /// Defaults, with `enumeration` taken from `HARDMAT_BUDGET` when it is
    /// set to a valid integer. Malformed values are reported, not ignored.
    pub fn from_env() -> Result<Self, String> {
        let mut budget = Budget::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            budget.enumeration = raw
                .trim()
                .parse()
                .map_err(|_| format!("{BUDGET_ENV}={raw:?} is not a non-negative integer"))?;
        }
        Ok(budget)
    }
}
