//! A single regression tree grown by variance-reduction splitting.

use rand::RngExt;
use serde::{Deserialize, Serialize};

/// Node of a regression tree, stored in a flat arena.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    /// Internal decision: rows with `features[feature] <= threshold` go left.
    Split {
        /// Index into the feature order the tree was trained with.
        feature: usize,
        /// Midpoint between two observed feature values.
        threshold: f64,
        /// Arena index of the left child.
        left: usize,
        /// Arena index of the right child.
        right: usize,
    },
    /// Terminal prediction: the mean target of the rows that reached it.
    Leaf {
        /// Predicted value.
        value: f64,
    },
}

/// A grown tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Arena of nodes; `TreeNode::Split` children index into it.
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    /// Predicts by walking from the root to a leaf.
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

/// Limits and randomness knobs for growing one tree.
pub(crate) struct GrowControls<'a> {
    /// Row-major feature matrix of the full training split.
    pub x: &'a [Vec<f64>],
    /// Targets aligned with `x`.
    pub y: &'a [f64],
    /// Number of features candidates are sampled from.
    pub n_features: usize,
    /// Features tried per split.
    pub features_per_split: usize,
    /// Depth at which growth stops unconditionally, if set.
    pub max_depth: Option<usize>,
    /// Minimum rows each child of a split must keep.
    pub min_leaf: usize,
}

/// Output of growing one tree: the tree plus the total squared-error
/// reduction each feature contributed across its splits.
pub(crate) struct GrownTree {
    pub tree: Tree,
    pub impurity_decrease: Vec<f64>,
}

/// Grows a tree on the given rows (indices into `controls.x`, possibly with
/// repeats from bootstrapping).
pub(crate) fn grow_tree<R: RngExt>(
    controls: &GrowControls<'_>,
    rows: Vec<usize>,
    rng: &mut R,
) -> GrownTree {
    let mut grower = Grower {
        controls,
        nodes: Vec::new(),
        impurity_decrease: vec![0.0; controls.n_features],
    };
    grower.grow(rows, 0, rng);
    GrownTree {
        tree: Tree {
            nodes: grower.nodes,
        },
        impurity_decrease: grower.impurity_decrease,
    }
}

struct Grower<'a> {
    controls: &'a GrowControls<'a>,
    nodes: Vec<TreeNode>,
    impurity_decrease: Vec<f64>,
}

impl Grower<'_> {
    /// Grows the subtree for `rows`, returns its arena index.
    fn grow<R: RngExt>(&mut self, rows: Vec<usize>, depth: usize, rng: &mut R) -> usize {
        let y = self.controls.y;
        let n = rows.len();
        let mean = rows.iter().map(|&r| y[r]).sum::<f64>() / n as f64;

        let depth_capped = self
            .controls
            .max_depth
            .is_some_and(|limit| depth >= limit);
        let too_small = n < 2 * self.controls.min_leaf;
        let pure = rows.iter().all(|&r| y[r] == y[rows[0]]);

        if depth_capped || too_small || pure {
            return self.push(TreeNode::Leaf { value: mean });
        }

        match self.best_split(&rows, rng) {
            None => self.push(TreeNode::Leaf { value: mean }),
            Some(split) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                    .into_iter()
                    .partition(|&r| self.controls.x[r][split.feature] <= split.threshold);
                self.impurity_decrease[split.feature] += split.impurity_decrease;

                // Reserve the slot before the children claim theirs.
                let at = self.push(TreeNode::Leaf { value: mean });
                let left = self.grow(left_rows, depth + 1, rng);
                let right = self.grow(right_rows, depth + 1, rng);
                self.nodes[at] = TreeNode::Split {
                    feature: split.feature,
                    threshold: split.threshold,
                    left,
                    right,
                };
                at
            }
        }
    }

    fn push(&mut self, node: TreeNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Finds the split minimizing the children's total squared error over a
    /// random sample of features. Ties keep the first candidate encountered
    /// (features in sorted order, thresholds ascending), so growth is
    /// deterministic given the RNG stream.
    fn best_split<R: RngExt>(&self, rows: &[usize], rng: &mut R) -> Option<ChosenSplit> {
        let controls = self.controls;
        let n = rows.len();

        // Sample features without replacement via partial Fisher-Yates, then
        // sort so the scanning order is independent of draw order.
        let mut candidates: Vec<usize> = (0..controls.n_features).collect();
        for i in 0..controls.features_per_split.min(controls.n_features) {
            let j = rng.random_range(i..candidates.len());
            candidates.swap(i, j);
        }
        candidates.truncate(controls.features_per_split.min(controls.n_features));
        candidates.sort_unstable();

        let node_sse = {
            let sum: f64 = rows.iter().map(|&r| controls.y[r]).sum();
            let sum_sq: f64 = rows.iter().map(|&r| controls.y[r] * controls.y[r]).sum();
            sum_sq - sum * sum / n as f64
        };

        let mut best: Option<ChosenSplit> = None;
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for feature in candidates {
            order.clear();
            order.extend_from_slice(rows);
            order.sort_by(|&a, &b| {
                controls.x[a][feature]
                    .partial_cmp(&controls.x[b][feature])
                    .expect("features validated finite")
            });

            // Prefix sums over the sorted order.
            let mut prefix_sum = 0.0;
            let mut prefix_sum_sq = 0.0;
            let total_sum: f64 = order.iter().map(|&r| controls.y[r]).sum();
            let total_sum_sq: f64 = order.iter().map(|&r| controls.y[r] * controls.y[r]).sum();

            for k in 1..n {
                let prev = order[k - 1];
                prefix_sum += controls.y[prev];
                prefix_sum_sq += controls.y[prev] * controls.y[prev];

                if k < controls.min_leaf || n - k < controls.min_leaf {
                    continue;
                }
                let v_prev = controls.x[prev][feature];
                let v_next = controls.x[order[k]][feature];
                if v_prev == v_next {
                    continue; // threshold must fall between distinct values
                }

                let left_sse = prefix_sum_sq - prefix_sum * prefix_sum / k as f64;
                let right_sum = total_sum - prefix_sum;
                let right_sse =
                    (total_sum_sq - prefix_sum_sq) - right_sum * right_sum / (n - k) as f64;
                let score = left_sse + right_sse;

                if best.as_ref().is_none_or(|b| score < b.score) {
                    best = Some(ChosenSplit {
                        feature,
                        threshold: (v_prev + v_next) / 2.0,
                        score,
                        impurity_decrease: (node_sse - score).max(0.0),
                    });
                }
            }
        }
        best
    }
}

struct ChosenSplit {
    feature: usize,
    threshold: f64,
    score: f64,
    impurity_decrease: f64,
}
