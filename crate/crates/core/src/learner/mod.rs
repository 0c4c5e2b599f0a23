//! List learners: threshold reduction, one-inclusion weak learners, aggregation,
//! list merging, boosting game and compression pipelines.

pub mod aggregate;
pub mod game;
pub mod merge;
pub mod pipeline;
pub mod threshold;
pub mod weak;

pub use aggregate::{quantile_aggregate, topk_aggregate, MulticlassList};
pub use merge::{merge_lists, min_radius_cover, MergeMode, MergeOutcome};
pub use game::{certify, solve_game, solve_game_approx, solve_game_to_target, support_enumeration_value, GameSolution, PayoffMatrix};
pub use threshold::{build_threshold_class, classifier_f, scaled_sum, separated_set, thr_operator, KThreshold, ThresholdClass, ThresholdGrid};
pub use weak::{weak_learner_partial, weak_learner_real, PartialOigLearner, RealOigLearner};
pub use pipeline::{
    erm_row, log2_inverse_ceil, realizable_oig_pipeline, reg_agnostic, reg_realizable, select_subsequences, MergeDiagnostics,
    PipelineParams, PipelineRecord, PipelineRun, ResolvedConstants, Selection, ThresholdExample,
};
