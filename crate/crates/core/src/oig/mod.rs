//! One-inclusion graphs, list orientations and the OIG dimension.

pub mod dim;
pub mod graph;
pub mod orient;

pub use dim::{koig_dim, witness_threshold, OigDimOptions, OigDimResult, OigWitness};
pub use graph::{build_oig, Edge, OneInclusionGraph};
pub use orient::{
    forces_outdeg, has_hard_edge, k_outdeg, max_outdeg, min_max_k_outdeg, min_max_k_outdeg_with, KListOrientation,
    OrientCaps, OrientMode, OrientationResult,
};
pub use orient::value_cover;
