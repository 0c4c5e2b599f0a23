//! Exact calculators for shattering dimensions and packing numbers.
//!
//! All searches are exponential. [`SearchCaps`] bounds instance size and the
//! number of explored nodes; a breach is reported as an error instead of a
//! silently truncated answer.

mod engine;
pub mod packing;
pub mod shattering;

pub use packing::{
    k_ary_packing, k_ary_packing_with, packing_lower_bound, packing_sandwich_check, packing_sandwich_check_with,
    packing_upper_bound, verify_packing_witness, PackingWitness, SandwichReport,
};
pub use shattering::{
    fat_dim, fat_dim_with, k_natarajan_dim, k_natarajan_dim_with, strong_fat_dim, strong_fat_dim_with,
    verify_fat_witness, verify_natarajan_witness, verify_strong_witness, DimensionResult, ShatterWitness,
};

/// Size guards for the exhaustive searches.
#[derive(Clone, Debug)]
pub struct SearchCaps {
    pub max_rows: usize,
    pub max_points: usize,
    pub max_k: usize,
    pub max_d: Option<usize>,
    pub max_packing_rows: usize,
    pub node_budget: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_rows: 20_000,
            max_points: 20_000,
            max_k: 6,
            max_d: None,
            max_packing_rows: 256,
            node_budget: 200_000_000,
        }
    }
}
