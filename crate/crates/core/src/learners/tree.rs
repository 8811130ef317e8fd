//! Shared regression-tree builder.
//!
//! All tree learners grow on per-row gradients with unit Hessians. With
//! `g = -y`, `lambda = alpha = gamma = 0` the gain is the usual variance
//! reduction and the leaf weight is the mean target, which is how CART and
//! Extra-Trees use it; boosting passes residual gradients and its penalties.

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        weight: f64,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                TreeNode::Leaf { weight, .. } => return weight,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    pub fn leaf_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Leaf { weight, .. } => Some(*weight),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GrowParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub min_child_weight: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Fraction of features examined at each node.
    pub max_features: f64,
    /// One uniform threshold per feature instead of an exhaustive scan.
    pub random_thresholds: bool,
}

impl Default for GrowParams {
    fn default() -> Self {
        Self {
            max_depth: usize::MAX,
            min_samples_split: 2,
            min_samples_leaf: 1,
            min_child_weight: 0.0,
            lambda: 0.0,
            alpha: 0.0,
            gamma: 0.0,
            max_features: 1.0,
            random_thresholds: false,
        }
    }
}

fn soft(g: f64, alpha: f64) -> f64 {
    if g > alpha {
        g - alpha
    } else if g < -alpha {
        g + alpha
    } else {
        0.0
    }
}

impl GrowParams {
    fn score(&self, g: f64, h: f64) -> f64 {
        let d = h + self.lambda;
        if d <= 0.0 {
            return 0.0;
        }
        let s = soft(g, self.alpha);
        s * s / d
    }

    pub fn leaf_weight(&self, g: f64, h: f64) -> f64 {
        let d = h + self.lambda;
        if d <= 0.0 {
            return 0.0;
        }
        -soft(g, self.alpha) / d
    }
}

struct Builder<'a> {
    /// Column-major feature values of the samples.
    cols: Vec<Vec<f64>>,
    grad: &'a [f64],
    params: GrowParams,
    nodes: Vec<TreeNode>,
    go_left: Vec<bool>,
}

struct Best {
    gain: f64,
    feature: usize,
    threshold: f64,
}

/// Grows one tree on the rows `rows` of `x` (duplicates allowed) with one
/// gradient per entry of `rows`.
pub fn grow(x: &Matrix, rows: &[usize], grad: &[f64], params: GrowParams, rng: &mut Rng) -> Tree {
    assert_eq!(rows.len(), grad.len());
    let p = x.n_cols();
    let m = rows.len();
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|f| rows.iter().map(|&r| x.get(r, f)).collect())
        .collect();
    let sorted: Vec<Vec<u32>> = cols
        .iter()
        .map(|c| {
            let mut idx: Vec<u32> = (0..m as u32).collect();
            idx.sort_by(|&a, &b| c[a as usize].total_cmp(&c[b as usize]));
            idx
        })
        .collect();
    let mut b = Builder {
        cols,
        grad,
        params,
        nodes: Vec::new(),
        go_left: vec![false; m],
    };
    if m == 0 || p == 0 {
        let weight = params.leaf_weight(grad.iter().sum(), m as f64);
        return Tree {
            nodes: vec![TreeNode::Leaf { weight, n: m }],
        };
    }
    b.build(sorted, 0, rng);
    Tree { nodes: b.nodes }
}

impl Builder<'_> {
    fn build(&mut self, sorted: Vec<Vec<u32>>, depth: usize, rng: &mut Rng) -> usize {
        let members: &[u32] = &sorted[0];
        let n = members.len();
        let g_sum: f64 = members.iter().map(|&s| self.grad[s as usize]).sum();
        let h_sum = n as f64;
        let weight = self.params.leaf_weight(g_sum, h_sum);
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { weight, n });

        let p = &self.params;
        if depth >= p.max_depth || n < p.min_samples_split || n < 2 * p.min_samples_leaf {
            return id;
        }
        let first = self.grad[members[0] as usize];
        if members.iter().all(|&s| self.grad[s as usize] == first) {
            return id;
        }
        let Some(best) = self.find_split(&sorted, g_sum, h_sum, rng) else {
            return id;
        };

        let col = &self.cols[best.feature];
        for &s in members {
            self.go_left[s as usize] = col[s as usize] <= best.threshold;
        }
        let mut left = Vec::with_capacity(sorted.len());
        let mut right = Vec::with_capacity(sorted.len());
        for list in sorted {
            let (l, r): (Vec<u32>, Vec<u32>) =
                list.into_iter().partition(|&s| self.go_left[s as usize]);
            left.push(l);
            right.push(r);
        }
        let l = self.build(left, depth + 1, rng);
        let r = self.build(right, depth + 1, rng);
        self.nodes[id] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        id
    }

    fn find_split(
        &self,
        sorted: &[Vec<u32>],
        g_sum: f64,
        h_sum: f64,
        rng: &mut Rng,
    ) -> Option<Best> {
        let p = &self.params;
        let n_feat = sorted.len();
        let features: Vec<usize> = if p.max_features < 1.0 {
            let k = ((p.max_features * n_feat as f64).ceil() as usize).clamp(1, n_feat);
            let mut f = sample(rng, n_feat, k).into_vec();
            f.sort_unstable();
            f
        } else {
            (0..n_feat).collect()
        };
        let parent = p.score(g_sum, h_sum);
        let mut best: Option<Best> = None;
        for f in features {
            let list = &sorted[f];
            let col = &self.cols[f];
            let lo = col[list[0] as usize];
            let hi = col[*list.last().unwrap() as usize];
            if lo >= hi {
                continue;
            }
            let mut consider = |gain: f64, threshold: f64| {
                // near-ties keep the earlier candidate so rounding cannot flip the choice
                if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.gain * (1.0 + 1e-9)) {
                    best = Some(Best {
                        gain,
                        feature: f,
                        threshold,
                    });
                }
            };
            if p.random_thresholds {
                let t = rng.random_range(lo..hi);
                let mut gl = 0.0;
                let mut nl = 0usize;
                for &s in list {
                    if col[s as usize] > t {
                        break;
                    }
                    gl += self.grad[s as usize];
                    nl += 1;
                }
                if let Some(gain) = self.gain(gl, nl, g_sum, list.len(), parent) {
                    consider(gain, t);
                }
            } else {
                let mut gl = 0.0;
                for i in 0..list.len() - 1 {
                    let s = list[i] as usize;
                    gl += self.grad[s];
                    let a = col[s];
                    let b = col[list[i + 1] as usize];
                    if a == b {
                        continue;
                    }
                    if let Some(gain) = self.gain(gl, i + 1, g_sum, list.len(), parent) {
                        let mut t = a + (b - a) / 2.0;
                        if t >= b {
                            t = a;
                        }
                        consider(gain, t);
                    }
                }
            }
        }
        best
    }

    fn gain(&self, gl: f64, nl: usize, g: f64, n: usize, parent: f64) -> Option<f64> {
        let p = &self.params;
        let nr = n - nl;
        if nl < p.min_samples_leaf || nr < p.min_samples_leaf {
            return None;
        }
        let (hl, hr) = (nl as f64, nr as f64);
        if hl < p.min_child_weight || hr < p.min_child_weight {
            return None;
        }
        let gain = 0.5 * (p.score(gl, hl) + p.score(g - gl, hr) - parent) - p.gamma;
        // Rounding noise on an exact tie must not count as an improvement.
        let noise = 1e-12 * (parent.abs() + p.score(gl, hl).abs() + p.score(g - gl, hr).abs());
        (gain > noise).then_some(gain)
    }
}
