//! Shared domain types for the ragrank evaluation engine.
//!
//! This crate defines the vocabulary the rest of the workspace speaks:
//! queries with labelled passages, model responses, pairwise judgments,
//! plus dataset readiness validation and the seeded RNG-stream derivation
//! that makes every downstream stage reproducible.

mod rng;
mod types;
mod validate;

pub use rng::{derive_rng, RngSeed};
pub use types::{
    CoreError, ModelId, PairwiseJudgment, Passage, QueryRecord, RagResponse, Verdict,
};
pub use validate::{validate_dataset, ValidationReport};
