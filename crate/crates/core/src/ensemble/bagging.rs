use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{fit_learner, FittedLearner, LearnerSpec};
use crate::matrix::Matrix;
use crate::seed::{derive, rng_for, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingSpec {
    pub base: LearnerSpec,
    pub members: usize,
    #[serde(default = "one")]
    pub max_samples: f64,
    #[serde(default = "one")]
    pub max_features: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

impl BaggingSpec {
    pub fn new(base: LearnerSpec, members: usize) -> Self {
        Self {
            base,
            members,
            max_samples: 1.0,
            max_features: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.members == 0 {
            return Err(Error::invalid("bagging needs at least one member"));
        }
        for (name, v) in [
            ("max_samples", self.max_samples),
            ("max_features", self.max_features),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(format!("{name} = {v} outside (0, 1]")));
            }
        }
        self.base.validate()
    }
}

/// `ceil(rate * n)` row ids drawn uniformly with replacement.
pub fn bootstrap_sample(n: usize, rate: f64, rng: &mut Rng) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::invalid("cannot resample zero rows"));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::invalid(format!("sample rate {rate} outside (0, 1]")));
    }
    let m = (rate * n as f64).ceil() as usize;
    Ok((0..m).map(|_| rng.random_range(0..n)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingMember {
    /// Column ids of the full design this member was trained on.
    pub features: Vec<usize>,
    pub model: FittedLearner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingModel {
    pub members: Vec<BaggingMember>,
}

impl BaggingModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut buf = Vec::new();
        let mut sum = 0.0;
        for m in &self.members {
            buf.clear();
            buf.extend(m.features.iter().map(|&f| row[f]));
            sum += m.model.predict_row(&buf);
        }
        sum / self.members.len() as f64
    }
}

pub fn fit_bagging(spec: &BaggingSpec, x: &Matrix, y: &[f64]) -> Result<BaggingModel> {
    spec.validate()?;
    let n = x.n_rows();
    let p = x.n_cols();
    let n_feat = (spec.max_features * p as f64).ceil() as usize;
    if n_feat == 0 {
        return Err(Error::invalid("feature subset is empty"));
    }
    let members = (0..spec.members)
        .into_par_iter()
        .map(|m| {
            let mut rng = rng_for(spec.seed, &[m as u64]);
            let rows = bootstrap_sample(n, spec.max_samples, &mut rng)?;
            let mut features = if n_feat < p {
                sample(&mut rng, p, n_feat).into_vec()
            } else {
                (0..p).collect()
            };
            features.sort_unstable();
            let xs = x.select_rows(&rows).select_cols(&features);
            let ys: Vec<f64> = rows.iter().map(|&r| y[r]).collect();
            let base = spec.base.clone().with_seed(derive(spec.seed, &[m as u64, 1]));
            Ok(BaggingMember {
                features,
                model: fit_learner(&base, &xs, &ys)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaggingModel { members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn bootstrap_shapes() {
        let ids = bootstrap_sample(5, 1.0, &mut rng(1)).unwrap();
        assert_eq!(ids.len(), 5);
        assert!(ids.iter().all(|&i| i < 5));
        assert_eq!(bootstrap_sample(1, 0.3, &mut rng(1)).unwrap(), vec![0]);
        assert!(bootstrap_sample(5, 0.0, &mut rng(1)).is_err());
        assert_eq!(bootstrap_sample(10, 0.25, &mut rng(1)).unwrap().len(), 3);
    }
}
