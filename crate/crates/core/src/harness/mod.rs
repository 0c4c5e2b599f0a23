//! Example classes, adversarial distributions, experiments and the verification suite.

pub mod builders;
pub mod experiment;
pub mod fixtures;
pub mod lower;
pub mod verify;

pub use builders::{build_example1, build_example2};
pub use experiment::{
    run_experiment, ClassSpec, CurvePoint, DistributionSpec, Estimate, ExperimentConfig, LearnerMode, PropertyOutcome,
    Report, TrialOutcome,
};
pub use lower::{build_db_distribution, build_pv_distribution, pigeonhole_error_check};
pub use verify::verify_suite;
