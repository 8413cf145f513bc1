//! Synthetic evaluation worlds and brute-force reference implementations.
//!
//! A [`SyntheticWorld`] fixes a roster of models with *known* strength logits
//! and generates, deterministically from a seed:
//!
//! - pairwise judgments whose win probabilities follow the Bradley-Terry
//!   model on the true logits ([`generate_judgments`]), and
//! - per-model feature vectors correlated with the true logits to a chosen
//!   degree ([`generate_features`]).
//!
//! Because the ground truth is known, pipelines can be validated end to end:
//! fit strengths from the generated judgments and compare against
//! `true_logits`, or train a feature model and test whether it recovers the
//! strength ordering.
//!
//! The `brute_force_*` functions are deliberately naive, independent
//! implementations of quantities the main crates compute with fast
//! algorithms. They exist solely as cross-check oracles for tests.

mod brute;
mod error;
mod world;

pub use brute::{brute_force_bt, brute_force_lcs, brute_force_tau};
pub use error::SimError;
pub use world::{
    generate_features, generate_judgments, uniform_feature_specs, FeatureSpec, SyntheticWorld,
};
