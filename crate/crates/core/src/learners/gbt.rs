//! Regularized gradient-boosted trees on squared error.
//!
//! Round k fits a tree to `g_i = pred_i - y_i` (unit Hessian); leaf weights are
//! `-soft(G, alpha) / (H + lambda)` and splits must beat `gamma`. The `dart`
//! booster value is accepted and trained as plain `gbtree`.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::tree::{grow, GrowParams, Tree};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed::rng_for;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbtParams {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub eta: f64,
    pub gamma: f64,
    pub min_child_weight: f64,
    pub subsample: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub base_score: Option<f64>,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            max_depth: 6,
            eta: 0.3,
            gamma: 0.0,
            min_child_weight: 1.0,
            subsample: 1.0,
            lambda: 1.0,
            alpha: 0.0,
            base_score: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub base_score: f64,
    pub eta: f64,
    pub trees: Vec<Tree>,
}

impl GbtModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.base_score + self.eta * self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>()
    }
}

pub fn fit_gbt(x: &Matrix, y: &[f64], params: &GbtParams, seed: u64) -> Result<GbtModel> {
    if x.n_rows() != y.len() {
        return Err(Error::invalid("row count differs from target length"));
    }
    if y.is_empty() {
        return Err(Error::invalid("no training rows"));
    }
    if params.n_estimators == 0 {
        return Err(Error::invalid("n_est must be at least 1"));
    }
    if !(params.eta > 0.0 && params.eta <= 1.0) {
        return Err(Error::invalid(format!("eta = {} outside (0, 1]", params.eta)));
    }
    if !(params.subsample > 0.0 && params.subsample <= 1.0) {
        return Err(Error::invalid(format!(
            "sub_s = {} outside (0, 1]",
            params.subsample
        )));
    }
    for (name, v) in [
        ("lambda", params.lambda),
        ("alpha", params.alpha),
        ("gamma", params.gamma),
        ("min_cw", params.min_child_weight),
    ] {
        if !(v >= 0.0) {
            return Err(Error::invalid(format!("{name} = {v} must be non-negative")));
        }
    }
    let n = y.len();
    let base = params
        .base_score
        .unwrap_or_else(|| y.iter().sum::<f64>() / n as f64);
    let grow_params = GrowParams {
        max_depth: params.max_depth,
        min_child_weight: params.min_child_weight,
        lambda: params.lambda,
        alpha: params.alpha,
        gamma: params.gamma,
        ..GrowParams::default()
    };
    let all: Vec<usize> = (0..n).collect();
    let n_sub = ((params.subsample * n as f64).round() as usize).clamp(1, n);
    let mut pred = vec![base; n];
    let mut trees = Vec::with_capacity(params.n_estimators);
    for round in 0..params.n_estimators {
        let mut rng = rng_for(seed, &[round as u64]);
        let rows = if n_sub < n {
            let mut r = sample(&mut rng, n, n_sub).into_vec();
            r.sort_unstable();
            r
        } else {
            all.clone()
        };
        let grad: Vec<f64> = rows.iter().map(|&i| pred[i] - y[i]).collect();
        let tree = grow(x, &rows, &grad, grow_params, &mut rng);
        for (i, p) in pred.iter_mut().enumerate() {
            *p += params.eta * tree.predict_row(x.row(i));
        }
        trees.push(tree);
    }
    Ok(GbtModel {
        base_score: base,
        eta: params.eta,
        trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_stump_is_mean() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let y = [1.0, 2.0, 4.0, 9.0];
        let p = GbtParams {
            n_estimators: 1,
            max_depth: 0,
            lambda: 0.0,
            eta: 1.0,
            base_score: Some(0.0),
            ..Default::default()
        };
        let m = fit_gbt(&x, &y, &p, 0).unwrap();
        assert!((m.predict_row(&[7.0]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn huge_lambda_keeps_base() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let y = [1.0, 2.0, 4.0, 9.0];
        let p = GbtParams {
            lambda: 1e12,
            base_score: Some(0.5),
            ..Default::default()
        };
        let m = fit_gbt(&x, &y, &p, 0).unwrap();
        assert!((m.predict_row(&[2.0]) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_rate() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0]]).unwrap();
        let p = GbtParams {
            eta: 0.0,
            ..Default::default()
        };
        assert!(fit_gbt(&x, &[1.0, 2.0], &p, 0).is_err());
    }
}
