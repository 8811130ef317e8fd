use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::standardize::Standardizer;

/// K-nearest-neighbour regressor on z-scored features. The scaling is
/// learned from the training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub scaler: Standardizer,
    pub train: Matrix,
    pub targets: Vec<f64>,
}

pub fn fit_knn(x: &Matrix, y: &[f64], k: usize) -> Result<KnnModel> {
    if x.n_rows() != y.len() {
        return Err(Error::invalid("row count differs from target length"));
    }
    if k == 0 || k > x.n_rows() {
        return Err(Error::invalid(format!(
            "K = {k} outside [1, {}]",
            x.n_rows()
        )));
    }
    let scaler = Standardizer::fit(x);
    Ok(KnnModel {
        k,
        train: scaler.transform(x),
        scaler,
        targets: y.to_vec(),
    })
}

impl KnnModel {
    /// Mean target of the K nearest training rows; distance ties resolve to
    /// the lower training index.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut q = Vec::with_capacity(row.len());
        self.scaler.transform_row(row, &mut q);
        let mut d: Vec<(f64, usize)> = self
            .train
            .rows()
            .enumerate()
            .map(|(i, t)| {
                let s: f64 = t.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                (s, i)
            })
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < d.len() {
            d.select_nth_unstable_by(self.k - 1, cmp);
        }
        d[..self.k].iter().map(|&(_, i)| self.targets[i]).sum::<f64>() / self.k as f64
    }

    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        (0..x.n_rows())
            .into_par_iter()
            .map(|i| self.predict_row(x.row(i)))
            .collect()
    }
}
