//! Pairwise-judgment tournaments and Bradley-Terry leaderboards.
//!
//! This crate turns raw pairwise judgments between models into ranked
//! leaderboards with uncertainty estimates:
//!
//! 1. [`canonicalize_verdict`] reads a judge's free-text output and extracts
//!    the final `[[A]]`/`[[B]]`/`[[C]]` verdict, undoing position swaps.
//! 2. [`PairCounts::tally`] aggregates judgments into a win matrix over a
//!    (multi)set of queries.
//! 3. [`fit_bt`] fits Bradley-Terry strengths to a win matrix with a
//!    minorization-maximization solver and returns mean-centered logits.
//! 4. [`bootstrap_bt`] runs many tournaments over query resamples and reports
//!    per-model mean logits with percentile confidence intervals.
//! 5. [`to_leaderboard`] converts scores into a ranked table.

mod bootstrap;
mod counts;
mod error;
mod fit;
mod leaderboard;
mod verdict;

pub use bootstrap::{bootstrap_bt, run_tournament, BtFit, TournamentConfig};
pub use counts::PairCounts;
pub use error::ArenaError;
pub use fit::{fit_bt, BtLogits, FitOptions};
pub use leaderboard::{to_leaderboard, LeaderboardEntry, RankedLeaderboard};
pub use verdict::canonicalize_verdict;
