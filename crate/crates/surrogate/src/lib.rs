//! Feature-based surrogate for tournament strength.
//!
//! Running full pairwise-judgment tournaments is expensive; this crate trains
//! a regression forest that maps cheap per-model feature vectors to the
//! strength logits a tournament would produce, so new models can be placed on
//! a leaderboard without judging them.
//!
//! - [`build_dataset`] aligns feature vectors with target logits and carves
//!   out a holdout split.
//! - [`train_forest`] fits a from-scratch regression forest (bootstrapped
//!   trees, random feature subsets per split, variance-reduction splitting).
//! - [`kendall_tau`] / [`r_squared`] quantify how well predicted scores
//!   recover the tournament ranking.
//! - [`train_linear`] is a least-squares baseline for comparison.
//! - [`surrogate_pipeline`] wires it all together and reports holdout
//!   accuracy, per-tournament stability, and a predicted leaderboard.

mod dataset;
mod error;
mod forest;
mod linear;
mod pipeline;
mod stats;
mod tree;

pub use dataset::{build_dataset, HoldoutProtocol, TrainingRow, TrainingSet};
pub use error::SurrogateError;
pub use forest::{train_forest, ForestHyper, RegressionForest, FOREST_FORMAT_VERSION};
pub use linear::{train_linear, LinearModel};
pub use pipeline::{surrogate_pipeline, PerTournamentR2, PipelineConfig, PipelineReport};
pub use stats::{kendall_tau, r_squared};
