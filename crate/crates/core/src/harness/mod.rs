//! The comparison grid: train every encoding on every cross-validation
//! fold, decode the held-out test set with every compatible classifier and
//! summarize the weighted kappas as a ranked table.

mod config;
mod evaluate;
mod experiment;
mod report;
mod table;

pub use config::{DataSource, ExperimentConfig, ModelConfig};
pub use evaluate::{evaluate_checkpoint, render_evaluation, ClassifierEvaluation};
pub use experiment::{
    confusion_matrices, job_seed, run_experiment, run_experiment_with_jobs, Experiment, GridCell,
    TrainedGrid,
};
pub use report::{rank_change_report, MethodRanks, RankChangeReport};
pub use table::{
    competition_ranks, rank, ClassifierLabel, Format, MethodResult, ResultTable, Score,
    TableMetadata,
};
