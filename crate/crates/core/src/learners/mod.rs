//! Base regressors: least squares, KNN, CART, Extra-Trees and boosted trees.

mod gbt;
mod knn;
mod linear;
mod spec;
pub mod tree;

use serde::{Deserialize, Serialize};

pub use gbt::{fit_gbt, GbtModel, GbtParams};
pub use knn::{fit_knn, KnnModel};
pub use linear::{fit_linear, LinearModel, RIDGE_PENALTY};
pub use spec::{Family, LearnerSpec, ParamRule};
pub use tree::{Tree, TreeNode};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed::rng_for;
use tree::{grow, GrowParams};

/// Fitted state of one base learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LearnerState {
    Linear(LinearModel),
    Knn(KnnModel),
    /// CART is a forest of one; Extra-Trees average `n_estimators` trees.
    Forest { trees: Vec<Tree> },
    Gbt(GbtModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedLearner {
    pub spec: LearnerSpec,
    pub n_features: usize,
    pub state: LearnerState,
}

impl FittedLearner {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match &self.state {
            LearnerState::Linear(m) => m.predict_row(row),
            LearnerState::Knn(m) => m.predict_row(row),
            LearnerState::Forest { trees } => {
                trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / trees.len() as f64
            }
            LearnerState::Gbt(m) => m.predict_row(row),
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.n_rows() > 0 && x.n_cols() != self.n_features {
            return Err(Error::SchemaMismatch {
                expected: self.n_features,
                got: x.n_cols(),
            });
        }
        Ok(match &self.state {
            LearnerState::Knn(m) => m.predict(x),
            _ => x.rows().map(|r| self.predict_row(r)).collect(),
        })
    }
}

fn tree_params(spec: &LearnerSpec) -> GrowParams {
    GrowParams {
        max_depth: spec.get_usize("max_depth").unwrap_or(usize::MAX),
        min_samples_split: spec.get_usize("min_samples_split").unwrap_or(2),
        min_samples_leaf: spec.get_usize("min_samples_leaf").unwrap_or(1),
        max_features: spec.get_or("max_features", 1.0),
        ..GrowParams::default()
    }
}

/// Gradients of squared error around the mean, so split gains do not depend
/// on the target's offset; `recentre` adds the mean back to the leaves.
fn mean_gradients(y: &[f64]) -> (Vec<f64>, f64) {
    let mean = if y.is_empty() { 0.0 } else { y.iter().sum::<f64>() / y.len() as f64 };
    (y.iter().map(|v| mean - v).collect(), mean)
}

fn recentre(mut tree: Tree, mean: f64) -> Tree {
    for node in &mut tree.nodes {
        if let TreeNode::Leaf { weight, .. } = node {
            *weight += mean;
        }
    }
    tree
}

pub fn fit_cart(x: &Matrix, y: &[f64], spec: &LearnerSpec) -> Result<Vec<Tree>> {
    let rows: Vec<usize> = (0..y.len()).collect();
    let mut rng = rng_for(spec.seed, &[0]);
    let (g, mean) = mean_gradients(y);
    Ok(vec![recentre(grow(x, &rows, &g, tree_params(spec), &mut rng), mean)])
}

/// Randomized-threshold trees, each grown on all rows with its own stream.
pub fn fit_extratree(x: &Matrix, y: &[f64], spec: &LearnerSpec) -> Result<Vec<Tree>> {
    let rows: Vec<usize> = (0..y.len()).collect();
    let (g, mean) = mean_gradients(y);
    let params = GrowParams {
        random_thresholds: true,
        ..tree_params(spec)
    };
    let n = spec.get_usize("n_estimators").unwrap_or(1);
    Ok((0..n)
        .map(|t| recentre(grow(x, &rows, &g, params, &mut rng_for(spec.seed, &[t as u64])), mean))
        .collect())
}

pub fn gbt_params(spec: &LearnerSpec) -> GbtParams {
    let d = GbtParams::default();
    GbtParams {
        n_estimators: spec.get_usize("n_est").unwrap_or(d.n_estimators),
        max_depth: spec.get_usize("max_d").unwrap_or(d.max_depth),
        eta: spec.get_or("eta", d.eta),
        gamma: spec.get_or("gamma", d.gamma),
        min_child_weight: spec.get_or("min_cw", d.min_child_weight),
        subsample: spec.get_or("sub_s", d.subsample),
        lambda: spec.get_or("lambda", d.lambda),
        alpha: spec.get_or("alpha", d.alpha),
        base_score: spec.get("base_score"),
    }
}

/// Validates `spec` and fits it on `(x, y)`.
pub fn fit_learner(spec: &LearnerSpec, x: &Matrix, y: &[f64]) -> Result<FittedLearner> {
    spec.validate()?;
    if x.n_rows() != y.len() {
        return Err(Error::invalid("row count differs from target length"));
    }
    if y.is_empty() {
        return Err(Error::invalid("no training rows"));
    }
    let state = match spec.family {
        Family::Linear => {
            LearnerState::Linear(fit_linear(x, y, spec.get_or("ridge_fallback", 1.0) != 0.0)?)
        }
        Family::Knn => LearnerState::Knn(fit_knn(x, y, spec.get_usize("K").unwrap_or(5))?),
        Family::Cart => LearnerState::Forest {
            trees: fit_cart(x, y, spec)?,
        },
        Family::Extratree => LearnerState::Forest {
            trees: fit_extratree(x, y, spec)?,
        },
        Family::Gbt => LearnerState::Gbt(fit_gbt(x, y, &gbt_params(spec), spec.seed)?),
    };
    Ok(FittedLearner {
        spec: spec.clone(),
        n_features: x.n_cols(),
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extratree_depth_zero_is_mean() {
        let x = Matrix::from_columns(&[vec![1.0, 5.0, 2.0]]).unwrap();
        let m = fit_learner(&LearnerSpec::extratree().with("max_depth", 0.0), &x, &[1.0, 2.0, 6.0])
            .unwrap();
        assert_eq!(m.predict_row(&[0.0]), 3.0);
    }

    #[test]
    fn schema_mismatch_and_empty() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0]]).unwrap();
        let m = fit_learner(&LearnerSpec::linear(), &x, &[1.0, 2.0, 3.0]).unwrap();
        assert!(m.predict(&Matrix::zeros(0, 0)).unwrap().is_empty());
        assert!(matches!(
            m.predict(&Matrix::zeros(2, 2)),
            Err(Error::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn json_roundtrip_predicts_identically() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![0.0, 1.0, 0.0, 1.0, 0.5]])
            .unwrap();
        let y = [1.0, 3.0, 2.0, 5.0, 4.0];
        for spec in [
            LearnerSpec::linear(),
            LearnerSpec::knn(2),
            LearnerSpec::cart(),
            LearnerSpec::extratree().with_seed(3),
            LearnerSpec::gbt().with("n_est", 5.0),
        ] {
            let m = fit_learner(&spec, &x, &y).unwrap();
            let back: FittedLearner =
                serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
            assert_eq!(back.predict(&x).unwrap(), m.predict(&x).unwrap());
        }
    }
}
