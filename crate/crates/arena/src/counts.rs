//! Aggregation of pairwise judgments into a dense win matrix.

use ragrank_core::{ModelId, PairwiseJudgment, Verdict};
use std::collections::{BTreeSet, HashMap};

/// Dense pairwise win counts over a fixed roster of models.
///
/// `wins[i][j]` holds the (possibly fractional) number of wins model `i`
/// scored against model `j`; a tie contributes 0.5 to both directions. The
/// roster is fixed at construction so matrices tallied from different query
/// resamples of the same judgment pool stay dimension-compatible.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCounts {
    /// Sorted, deduplicated roster of models.
    models: Vec<ModelId>,
    /// `wins[i][j]` = wins of `models[i]` over `models[j]`; diagonal unused.
    wins: Vec<Vec<f64>>,
}

impl PairCounts {
    /// Builds an all-zero count matrix over the given roster.
    ///
    /// The roster is sorted and deduplicated; indices into the matrix follow
    /// that order.
    pub fn new(roster: impl IntoIterator<Item = ModelId>) -> Self {
        let models: Vec<ModelId> = roster
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = models.len();
        Self {
            models,
            wins: vec![vec![0.0; n]; n],
        }
    }

    /// Tallies a pool of judgments over a multiset of query ids.
    ///
    /// The roster is the set of models appearing anywhere in `pool`, so every
    /// tally over the same pool produces a matrix with identical dimensions
    /// and model order, regardless of which queries were drawn. Each entry of
    /// `queries` contributes all of that query's judgments once; a query id
    /// repeated `k` times (as happens when sampling with replacement)
    /// contributes its judgments `k` times. Query ids absent from the pool
    /// contribute nothing.
    pub fn tally(pool: &[PairwiseJudgment], queries: &[String]) -> Self {
        let roster: BTreeSet<ModelId> = pool
            .iter()
            .flat_map(|j| [j.model_a.clone(), j.model_b.clone()])
            .collect();
        let mut counts = Self::new(roster);

        let mut by_query: HashMap<&str, Vec<&PairwiseJudgment>> = HashMap::new();
        for judgment in pool {
            by_query
                .entry(judgment.query_id.as_str())
                .or_default()
                .push(judgment);
        }

        for query_id in queries {
            if let Some(judgments) = by_query.get(query_id.as_str()) {
                for judgment in judgments {
                    counts.record(judgment);
                }
            }
        }
        counts
    }

    /// Adds a single judgment to the matrix.
    pub fn record(&mut self, judgment: &PairwiseJudgment) {
        let a = self
            .index_of(&judgment.model_a)
            .expect("judgment references a model outside the roster");
        let b = self
            .index_of(&judgment.model_b)
            .expect("judgment references a model outside the roster");
        match judgment.verdict {
            Verdict::WinA => self.wins[a][b] += 1.0,
            Verdict::WinB => self.wins[b][a] += 1.0,
            Verdict::Tie => {
                self.wins[a][b] += 0.5;
                self.wins[b][a] += 0.5;
            }
        }
    }

    /// The sorted roster backing the matrix.
    pub fn models(&self) -> &[ModelId] {
        &self.models
    }

    /// Number of models in the roster.
    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    /// Index of a model in the roster, if present.
    pub fn index_of(&self, model: &ModelId) -> Option<usize> {
        self.models.binary_search(model).ok()
    }

    /// Wins of `models[i]` over `models[j]` (ties count 0.5 each way).
    pub fn wins(&self, i: usize, j: usize) -> f64 {
        self.wins[i][j]
    }

    /// Total comparisons recorded between `models[i]` and `models[j]`.
    pub fn pair_total(&self, i: usize, j: usize) -> f64 {
        self.wins[i][j] + self.wins[j][i]
    }

    /// Sum of all pairwise comparison counts over distinct pairs.
    pub fn total_comparisons(&self) -> f64 {
        let n = self.n_models();
        let mut total = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                total += self.pair_total(i, j);
            }
        }
        total
    }
}
