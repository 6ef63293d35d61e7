//! Applications, scenario configuration, training and evaluation loops, metrics and CSV export.

mod apps;
mod config;
mod experiment;
mod metrics;
mod world;

pub use apps::{Consumer, DelaySample, Outstanding, Producer};
pub use config::{IdqfSection, ScenarioConfig, StrategyKind};
pub use experiment::{
    compare, evaluate_once, mean_throughput, replicate_seed, run_evaluation, run_scenario, run_training, CompareRow,
    Prepared, TrainingOutcome,
};
pub use metrics::{export_csv, sample_variance, write_rewards_csv, CsvPaths, MetricsReport, ReplicateSummary, RewardRow};
pub use world::{EpisodeParams, RttSample, World};
