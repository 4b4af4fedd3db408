use serde::{Deserialize, Serialize};

/// Largest degree for which a full multiplication table of `Sym(d)` is built.
pub const HARD_MAX_DEGREE: usize = 6;

/// Enumeration limits shared by every exhaustive computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest order accepted for a finite vertex, singular or branch group.
    pub max_group_order: usize,
    /// Largest symmetric-group degree `d` for hom counting and cover enumeration.
    pub max_degree: usize,
    /// Largest number of free choices `(d!)^k` a hom count may walk.
    pub max_search: u128,
    /// Largest candidate-tuple count the cover oracle may walk.
    pub oracle_ceiling: u128,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_group_order: 5040,
            max_degree: 5,
            max_search: 100_000_000,
            oracle_ceiling: 100_000_000,
        }
    }
}
