//! Ranked leaderboards from per-model scores.

use crate::ArenaError;
use ragrank_core::ModelId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One leaderboard row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardEntry {
    /// 1-based position; ties in score share relative order by model name
    /// but still receive consecutive ranks.
    pub rank: usize,
    /// The ranked model.
    pub model_id: ModelId,
    /// The score the ranking was computed from (higher is better).
    pub score: f64,
}

/// Models ordered best-first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLeaderboard {
    /// Rows in rank order.
    pub entries: Vec<LeaderboardEntry>,
}

impl RankedLeaderboard {
    /// Position (1-based) of a model, if ranked.
    pub fn rank_of(&self, model: &ModelId) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| &e.model_id == model)
            .map(|e| e.rank)
    }

    /// Models in rank order.
    pub fn order(&self) -> Vec<&ModelId> {
        self.entries.iter().map(|e| &e.model_id).collect()
    }
}

/// Ranks models by descending score, breaking exact ties by model name so
/// the output is deterministic.
///
/// # Errors
///
/// [`ArenaError::NonFiniteScore`] if any score is NaN or infinite.
pub fn to_leaderboard(scores: &BTreeMap<ModelId, f64>) -> Result<RankedLeaderboard, ArenaError> {
    for (model, &score) in scores {
        if !score.is_finite() {
            return Err(ArenaError::NonFiniteScore {
                model: model.clone(),
                score,
            });
        }
    }
    let mut rows: Vec<(&ModelId, f64)> = scores.iter().map(|(m, &s)| (m, s)).collect();
    rows.sort_by(|(ma, sa), (mb, sb)| {
        sb.partial_cmp(sa)
            .expect("scores checked finite")
            .then_with(|| ma.cmp(mb))
    });
    Ok(RankedLeaderboard {
        entries: rows
            .into_iter()
            .enumerate()
            .map(|(i, (model, score))| LeaderboardEntry {
                rank: i + 1,
                model_id: model.clone(),
                score,
            })
            .collect(),
    })
}
