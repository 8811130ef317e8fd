//! Configured experiments: data preparation, repeated cross-validation on a
//! worker pool, tuning blocks and report provenance.

mod config;
mod presets;
mod report;
mod runner;
mod voting;

pub use config::{
    file_checksum, ExperimentConfig, FoldSettings, LofSettings, NamedModel, SpaceRef, TuningBlock,
    DATA_ENV,
};
pub use presets::{
    bagged_extratrees, extratrees, gbt_default, gbt_leafy, preset_roster, random_forest, stacking,
    voting_candidates, BAGGED_ET_SIZE, ET_FOREST_SIZE, PRESETS,
};
pub use report::{BenchmarkReport, FoldRecord, ModelResult, ModelStatus, Provenance};
pub use runner::{
    apply_params, fold_plan, load_dataset, prepare, prepare_frame, run, run_fold, run_prepared,
    run_tuning, run_tuning_prepared, task_seed, train_prepared, write_predictions, Prepared,
};
pub use voting::{adaptive_voting, AdaptiveVoting};
