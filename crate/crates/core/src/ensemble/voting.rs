use serde::{Deserialize, Serialize};

use super::{ModelSpec, TrainedModel};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metaopt::{nelder_mead, NelderMeadOptions, OptResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VotingSpec {
    pub members: Vec<ModelSpec>,
    pub weights: Vec<f64>,
}

impl VotingSpec {
    pub fn equal(members: Vec<ModelSpec>) -> Self {
        let weights = vec![1.0; members.len()];
        Self { members, weights }
    }

    pub fn validate(&self) -> Result<()> {
        check_weights(&self.weights, self.members.len())
    }
}

fn check_weights(w: &[f64], n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::invalid(format!(
            "{} weights for {n} members",
            w.len()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("voting needs at least one member"));
    }
    if w.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::invalid("weights must be finite and non-negative"));
    }
    if w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::invalid("weights sum to zero"));
    }
    Ok(())
}

/// Weighted average of member predictions, normalized by the weight sum.
/// Equal weights reduce to the plain mean.
pub fn vote_average(weights: &[f64], member_predictions: &[f64]) -> Result<f64> {
    check_weights(weights, member_predictions.len())?;
    let n = weights.len() as f64;
    if weights.iter().all(|&w| w == weights[0]) {
        return Ok(member_predictions.iter().sum::<f64>() / n);
    }
    let num: f64 = weights.iter().zip(member_predictions).map(|(w, h)| w * h).sum();
    Ok(num / weights.iter().sum::<f64>())
}

/// Weighted plurality over class labels; ties go to the lowest label.
pub fn vote_majority(labels: &[usize], weights: &[f64]) -> Result<usize> {
    if labels.is_empty() {
        return Err(Error::invalid("empty vote set"));
    }
    check_weights(weights, labels.len())?;
    let n_class = labels.iter().max().unwrap() + 1;
    let mut tally = vec![0.0; n_class];
    for (&c, &w) in labels.iter().zip(weights) {
        tally[c] += w;
    }
    let mut best = 0;
    for c in 1..n_class {
        if tally[c] > tally[best] {
            best = c;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VotingModel {
    pub members: Vec<TrainedModel>,
    pub weights: Vec<f64>,
}

impl VotingModel {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        let preds = self
            .members
            .iter()
            .map(|m| m.predict(x))
            .collect::<Result<Vec<_>>>()?;
        combine(&self.weights, &preds)
    }
}

/// Row-wise [`vote_average`] over per-member prediction columns.
pub fn combine(weights: &[f64], preds: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_weights(weights, preds.len())?;
    let n = preds[0].len();
    let mut row = vec![0.0; preds.len()];
    (0..n)
        .map(|i| {
            for (r, p) in row.iter_mut().zip(preds) {
                *r = p[i];
            }
            vote_average(weights, &row)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneStep {
    pub removed: usize,
    pub score: f64,
}

/// Removes, one at a time, the member whose removal raises `evaluate` the
/// most, until no removal helps or one member is left. `removed` indexes the
/// original member list.
pub fn backward_prune_voting(
    spec: &VotingSpec,
    mut evaluate: impl FnMut(&VotingSpec) -> f64,
) -> Result<(VotingSpec, Vec<PruneStep>)> {
    spec.validate()?;
    let mut ids: Vec<usize> = (0..spec.members.len()).collect();
    let subset = |ids: &[usize]| VotingSpec {
        members: ids.iter().map(|&i| spec.members[i].clone()).collect(),
        weights: ids.iter().map(|&i| spec.weights[i]).collect(),
    };
    let mut current = nan_low(evaluate(spec));
    let mut trace = Vec::new();
    while ids.len() > 1 {
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..ids.len() {
            let mut trial = ids.clone();
            trial.remove(pos);
            if subset(&trial).validate().is_err() {
                continue;
            }
            let s = nan_low(evaluate(&subset(&trial)));
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((pos, s));
            }
        }
        match best {
            Some((pos, s)) if s > current => {
                trace.push(PruneStep {
                    removed: ids.remove(pos),
                    score: s,
                });
                current = s;
            }
            _ => break,
        }
    }
    Ok((subset(&ids), trace))
}

fn nan_low(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Nelder-Mead over weights in [0, 1]; an all-zero weight vector scores -inf.
pub fn refine_voting_weights(
    spec: &VotingSpec,
    mut evaluate: impl FnMut(&VotingSpec) -> f64,
    options: &NelderMeadOptions,
) -> Result<(VotingSpec, OptResult)> {
    spec.validate()?;
    let total: f64 = spec.weights.iter().sum();
    let start: Vec<f64> = spec.weights.iter().map(|w| w / total).collect();
    let bounds = vec![(0.0, 1.0); start.len()];
    let result = nelder_mead(&start, &bounds, options, |w| {
        if w.iter().sum::<f64>() <= 0.0 {
            return f64::NEG_INFINITY;
        }
        evaluate(&VotingSpec {
            members: spec.members.clone(),
            weights: w.to_vec(),
        })
    })?;
    let refined = VotingSpec {
        members: spec.members.clone(),
        weights: result.best.clone(),
    };
    Ok((refined, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages() {
        assert_eq!(vote_average(&[1.0, 1.0], &[10.0, 20.0]).unwrap(), 15.0);
        assert_eq!(vote_average(&[0.25, 0.75], &[0.0, 100.0]).unwrap(), 75.0);
        assert_eq!(vote_average(&[3.0], &[4.5]).unwrap(), 4.5);
        assert!(vote_average(&[0.0, 0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn majority() {
        assert_eq!(vote_majority(&[0, 0, 1], &[1.0; 3]).unwrap(), 0);
        assert_eq!(vote_majority(&[0, 1], &[1.0, 3.0]).unwrap(), 1);
        assert_eq!(vote_majority(&[0, 1], &[1.0, 1.0]).unwrap(), 0);
        assert!(vote_majority(&[], &[]).is_err());
    }
}
