use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_model, ModelSpec, TrainedModel};
use crate::error::{Error, Result};
use crate::learners::{fit_learner, FittedLearner, LearnerSpec};
use crate::matrix::Matrix;
use crate::seed::{derive, rng_for};

pub const DEFAULT_OOF_FOLDS: usize = 5;

fn default_oof() -> usize {
    DEFAULT_OOF_FOLDS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingSpec {
    pub sub_learners: Vec<ModelSpec>,
    pub meta: LearnerSpec,
    #[serde(default = "default_oof")]
    pub oof_folds: usize,
    #[serde(default)]
    pub seed: u64,
}

impl StackingSpec {
    pub fn new(sub_learners: Vec<ModelSpec>, meta: LearnerSpec) -> Self {
        Self {
            sub_learners,
            meta,
            oof_folds: DEFAULT_OOF_FOLDS,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sub_learners.is_empty() {
            return Err(Error::invalid("stacking needs at least one sub-learner"));
        }
        if self.oof_folds < 2 {
            return Err(Error::invalid("oof_folds must be at least 2"));
        }
        self.meta.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingModel {
    pub sub_learners: Vec<TrainedModel>,
    pub meta: FittedLearner,
}

impl StackingModel {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        let cols = self
            .sub_learners
            .iter()
            .map(|m| m.predict(x))
            .collect::<Result<Vec<_>>>()?;
        if x.n_rows() == 0 {
            return Ok(Vec::new());
        }
        self.meta.predict(&Matrix::from_columns(&cols)?)
    }
}

/// Out-of-fold bookkeeping: which fold each training row was held out in and
/// the rows each fold's models were trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct OofReport {
    pub fold_of_row: Vec<usize>,
    pub train_rows: Vec<Vec<usize>>,
    pub meta_features: Matrix,
}

impl OofReport {
    /// True when no row's meta-feature came from a model that saw that row.
    pub fn leakage_free(&self) -> bool {
        self.fold_of_row
            .iter()
            .enumerate()
            .all(|(r, &f)| !self.train_rows[f].contains(&r))
    }
}

/// Out-of-fold meta-features: column `i` holds sub-learner `i`'s prediction
/// for each row from a model fit without that row's fold.
pub fn oof_meta_features(spec: &StackingSpec, x: &Matrix, y: &[f64]) -> Result<OofReport> {
    spec.validate()?;
    let n = x.n_rows();
    let k = spec.oof_folds;
    if n < k {
        return Err(Error::invalid(format!("{n} rows cannot fill {k} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_for(spec.seed, &[0x0F0F]));
    let mut fold_of_row = vec![0; n];
    for (pos, &r) in order.iter().enumerate() {
        fold_of_row[r] = pos % k;
    }
    let train_rows: Vec<Vec<usize>> = (0..k)
        .map(|f| (0..n).filter(|&r| fold_of_row[r] != f).collect())
        .collect();
    let jobs: Vec<(usize, usize)> = (0..spec.sub_learners.len())
        .flat_map(|i| (0..k).map(move |f| (i, f)))
        .collect();
    let preds = jobs
        .par_iter()
        .map(|&(i, f)| {
            let tr = &train_rows[f];
            let held: Vec<usize> = (0..n).filter(|&r| fold_of_row[r] == f).collect();
            let ys: Vec<f64> = tr.iter().map(|&r| y[r]).collect();
            let sub = spec.sub_learners[i].reseeded(derive(spec.seed, &[i as u64, f as u64]));
            let m = fit_model(&sub, &x.select_rows(tr), &ys)?;
            Ok((held.clone(), m.predict(&x.select_rows(&held))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = Matrix::zeros(n, spec.sub_learners.len());
    for (&(i, _), (held, p)) in jobs.iter().zip(preds) {
        for (r, v) in held.into_iter().zip(p) {
            meta.set(r, i, v);
        }
    }
    Ok(OofReport {
        fold_of_row,
        train_rows,
        meta_features: meta,
    })
}

pub fn fit_stacking_with_report(
    spec: &StackingSpec,
    x: &Matrix,
    y: &[f64],
) -> Result<(StackingModel, OofReport)> {
    let report = oof_meta_features(spec, x, y)?;
    let meta = fit_learner(&spec.meta, &report.meta_features, y)?;
    let sub_learners = spec
        .sub_learners
        .par_iter()
        .enumerate()
        .map(|(i, s)| fit_model(&s.reseeded(derive(spec.seed, &[i as u64, u64::MAX])), x, y))
        .collect::<Result<Vec<_>>>()?;
    Ok((StackingModel { sub_learners, meta }, report))
}

pub fn fit_stacking(spec: &StackingSpec, x: &Matrix, y: &[f64]) -> Result<StackingModel> {
    fit_stacking_with_report(spec, x, y).map(|(m, _)| m)
}
