//! Exact-arithmetic foundations: labels, classes, losses, distributions.

pub mod claims;
pub mod class;
pub mod distribution;
pub mod grid;
pub mod loss;
pub mod seed;

pub use claims::{union_intersection_check, union_intersection_prob_check};
pub use class::{ClassKind, Entry, HypothesisClass, Restriction};
pub use distribution::{Atom, FiniteDistribution};
pub use grid::{binomial, exact_string, Exact, GridValue, Ratio64, Scale};
pub use loss::{
    abs_list_loss, empirical_error, gamma_contains, population_error, LabelList, LabeledSample, ListHypothesis,
    ListPredictor,
};
pub use seed::derive_seed;
