//! Enumeration and refinement budgets.

/// Caps for the explicit-enumeration code paths. Anything larger must go
/// through the symbolic (SAT/QBF) path, signalled by a capacity error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Max total assignments a scope may have before enumeration refuses.
    pub enum_budget: u64,
    /// Max (design, requirement) configuration pairs a direct conformance
    /// computation may examine.
    pub pair_budget: u64,
    /// Max counterexample-guided refinements of the forall-exists solver.
    pub refine_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enum_budget: 1 << 20, pair_budget: 1 << 20, refine_cap: 1_000_000 }
    }
}

impl Limits {
    /// Reads `SPLV_ENUM_BUDGET` from the environment, if set and valid.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var("SPLV_ENUM_BUDGET") {
            if let Ok(n) = v.trim().parse::<u64>() {
                limits.enum_budget = n;
                limits.pair_budget = n;
            }
        }
        limits
    }
}
