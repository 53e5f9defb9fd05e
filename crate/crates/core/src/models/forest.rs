//! Random forest of Gini-split decision trees with bootstrap bagging.
//!
//! Each tree sees a bootstrap resample of the training rows and, at every
//! node, a random subset of `max_features` (default ⌊√V⌋) features among those
//! that are not constant on the node. Tree `t` draws all of its randomness
//! from `SplitMix64::stream(seed, t)`, so trees can be grown in parallel
//! without changing the result.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::svm::check_training_set;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::textprep::SparseVector;

pub const DEFAULT_N_ESTIMATORS: usize = 10;
pub const DEFAULT_MIN_IMPURITY_SPLIT: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_estimators: usize,
    pub min_impurity_split: f64,
    /// Features examined per node; `None` means ⌊√V⌋.
    pub max_features: Option<usize>,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_estimators: DEFAULT_N_ESTIMATORS,
            min_impurity_split: DEFAULT_MIN_IMPURITY_SPLIT,
            max_features: None,
        }
    }
}

/// `1 − p₀² − p₁²` for a two-class node, computed as `2·p₀·p₁`.
pub fn gini_impurity(n0: u64, n1: u64) -> Result<f64> {
    let n = n0 + n1;
    if n == 0 {
        return Err(Error::InvalidInput("gini impurity of an empty node".into()));
    }
    Ok(gini(n0 as f64, n1 as f64))
}

fn gini(n0: f64, n1: f64) -> f64 {
    let n = n0 + n1;
    2.0 * n0 * n1 / (n * n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        counts: [u32; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn predict(&self, x: &SparseVector) -> u8 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x.get(*feature) <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
                TreeNode::Leaf { counts } => return u8::from(counts[1] >= counts[0]),
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[TreeNode], at: usize) -> usize {
            match nodes[at] {
                TreeNode::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
                TreeNode::Leaf { .. } => 0,
            }
        }
        go(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    pub params: ForestParams,
    pub seed: u64,
    pub dim: usize,
}

impl ForestModel {
    /// Per-tree votes for classes 0 and 1.
    pub fn votes(&self, x: &SparseVector) -> Result<[usize; 2]> {
        if x.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim,
            });
        }
        let mut v = [0usize; 2];
        for t in &self.trees {
            v[t.predict(x) as usize] += 1;
        }
        Ok(v)
    }

    /// Majority vote; a tie goes to class 1.
    pub fn predict(&self, x: &SparseVector) -> Result<u8> {
        let [v0, v1] = self.votes(x)?;
        Ok(u8::from(v1 >= v0))
    }
}

/// Row indices of the bootstrap sample for tree `tree` (with repetition).
pub fn bootstrap_rows(rng: &mut SplitMix64, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.below(n)).collect()
}

pub fn train_random_forest(
    x: &[SparseVector],
    y: &[u8],
    params: &ForestParams,
    seed: u64,
) -> Result<ForestModel> {
    let dim = check_training_set(x, y)?;
    if params.n_estimators == 0 {
        return Err(Error::InvalidInput(
            "n_estimators must be at least 1".into(),
        ));
    }
    let max_features = params
        .max_features
        .unwrap_or_else(|| (dim as f64).sqrt().floor() as usize)
        .max(1);
    let trees = (0..params.n_estimators)
        .into_par_iter()
        .map(|t| {
            let mut rng = SplitMix64::stream(seed, t as u64);
            let rows = bootstrap_rows(&mut rng, x.len());
            grow_tree(
                x,
                y,
                rows,
                max_features,
                params.min_impurity_split,
                &mut rng,
            )
        })
        .collect();
    Ok(ForestModel {
        trees,
        params: *params,
        seed,
        dim,
    })
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

/// Grows one tree on `rows`, which may repeat indices.
pub fn grow_tree(
    x: &[SparseVector],
    y: &[u8],
    rows: Vec<usize>,
    max_features: usize,
    min_impurity_split: f64,
    rng: &mut SplitMix64,
) -> DecisionTree {
    let mut nodes: Vec<TreeNode> = vec![TreeNode::Leaf { counts: [0, 0] }];
    let mut stack = vec![(0usize, rows)];
    while let Some((at, rows)) = stack.pop() {
        let mut counts = [0u32; 2];
        for &r in &rows {
            counts[y[r] as usize] += 1;
        }
        let impurity = gini(counts[0] as f64, counts[1] as f64);
        let split = if impurity < min_impurity_split || counts[0] == 0 || counts[1] == 0 {
            None
        } else {
            best_split(x, y, &rows, counts, max_features, rng)
        };
        match split {
            None => nodes[at] = TreeNode::Leaf { counts },
            Some(s) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows
                    .into_iter()
                    .partition(|&r| x[r].get(s.feature) <= s.threshold);
                let left = nodes.len();
                nodes.push(TreeNode::Leaf { counts: [0, 0] });
                let right = nodes.len();
                nodes.push(TreeNode::Leaf { counts: [0, 0] });
                nodes[at] = TreeNode::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left,
                    right,
                };
                // Right pushed first so the left subtree is grown first.
                stack.push((right, r));
                stack.push((left, l));
            }
        }
    }
    DecisionTree { nodes }
}

fn best_split(
    x: &[SparseVector],
    y: &[u8],
    rows: &[usize],
    counts: [u32; 2],
    max_features: usize,
    rng: &mut SplitMix64,
) -> Option<Split> {
    // (feature, value, label) for every nonzero cell in the node.
    let mut cells: Vec<(usize, f64, u8)> = Vec::new();
    for &r in rows {
        cells.extend(x[r].iter().map(|(f, v)| (f, v, y[r])));
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut groups: Vec<&[(usize, f64, u8)]> = Vec::new();
    let mut start = 0;
    for i in 1..=cells.len() {
        if i == cells.len() || cells[i].0 != cells[start].0 {
            let g = &cells[start..i];
            let constant = g.len() == rows.len() && g[0].1 == g[g.len() - 1].1;
            if !constant {
                groups.push(g);
            }
            start = i;
        }
    }
    if groups.is_empty() {
        return None;
    }
    let picks: Vec<usize> = (0..groups.len()).collect();
    let picks = rng.sample(&picks, max_features);

    let n = rows.len() as f64;
    let mut best: Option<Split> = None;
    for g in picks.into_iter().map(|i| groups[i]) {
        let feature = g[0].0;
        // Distinct values with per-class counts, zeros included.
        let mut nz = [0u32; 2];
        for c in g {
            nz[c.2 as usize] += 1;
        }
        let zeros = [counts[0] - nz[0], counts[1] - nz[1]];
        let mut levels: Vec<(f64, [u32; 2])> = Vec::new();
        let mut zeros_placed = zeros == [0, 0];
        for c in g {
            if !zeros_placed && c.1 > 0.0 {
                levels.push((0.0, zeros));
                zeros_placed = true;
            }
            match levels.last_mut() {
                Some((v, k)) if *v == c.1 => k[c.2 as usize] += 1,
                _ => {
                    let mut k = [0, 0];
                    k[c.2 as usize] += 1;
                    levels.push((c.1, k));
                }
            }
        }
        if !zeros_placed {
            levels.push((0.0, zeros));
        }

        let mut left = [0f64; 2];
        for w in 0..levels.len() - 1 {
            left[0] += levels[w].1[0] as f64;
            left[1] += levels[w].1[1] as f64;
            let right = [counts[0] as f64 - left[0], counts[1] as f64 - left[1]];
            let nl = left[0] + left[1];
            let nr = n - nl;
            let score = (nl * gini(left[0], left[1]) + nr * gini(right[0], right[1])) / n;
            if best.as_ref().is_none_or(|b| score < b.score) {
                let (a, b) = (levels[w].0, levels[w + 1].0);
                let mut threshold = a + (b - a) / 2.0;
                if threshold >= b {
                    threshold = a;
                }
                best = Some(Split {
                    feature,
                    threshold,
                    score,
                });
            }
        }
    }
    best
}
