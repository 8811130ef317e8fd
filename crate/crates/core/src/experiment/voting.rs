//! Adaptive voting: backward pruning of a candidate pool followed by
//! simplex refinement of the surviving weights. Each candidate is fitted once
//! per repeat; subsets are then scored from cached validation predictions.

use rayon::prelude::*;

use super::config::NamedModel;
use crate::dataio::FoldPlan;
use crate::ensemble::{backward_prune_voting, combine, fit_model, refine_voting_weights, ModelSpec, PruneStep, VotingSpec};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metaopt::{NelderMeadOptions, OptResult};
use crate::metrics::pearson;
use crate::seed::derive;

#[derive(Debug, Clone)]
pub struct AdaptiveVoting {
    pub names: Vec<String>,
    /// Surviving members with refined weights normalized to sum to one.
    pub spec: VotingSpec,
    pub prune_trace: Vec<PruneStep>,
    pub refine: OptResult,
    /// Mean validation R of each candidate on its own.
    pub solo_scores: Vec<f64>,
    /// Mean validation R of the pruned ensemble with equal and refined weights.
    pub pruned_score: f64,
    pub refined_score: f64,
}

struct Cache {
    /// `[repeat][candidate]` validation predictions.
    preds: Vec<Vec<Vec<f64>>>,
    truth: Vec<Vec<f64>>,
}

impl Cache {
    fn score(&self, ids: &[usize], weights: &[f64]) -> f64 {
        let mut total = 0.0;
        for (p, t) in self.preds.iter().zip(&self.truth) {
            let cols: Vec<Vec<f64>> = ids.iter().map(|&i| p[i].clone()).collect();
            let Ok(v) = combine(weights, &cols) else {
                return f64::NEG_INFINITY;
            };
            match pearson(&v, t) {
                Some(r) => total += r,
                None => return f64::NEG_INFINITY,
            }
        }
        total / self.preds.len() as f64
    }
}

pub fn adaptive_voting(
    candidates: &[NamedModel],
    x: &Matrix,
    y: &[f64],
    plan: &FoldPlan,
    seed: u64,
    options: &NelderMeadOptions,
) -> Result<AdaptiveVoting> {
    if candidates.len() < 2 {
        return Err(Error::invalid("adaptive voting needs at least two candidates"));
    }
    let jobs: Vec<(usize, usize)> = (0..plan.repeats.len())
        .flat_map(|r| (0..candidates.len()).map(move |c| (r, c)))
        .collect();
    let fitted = jobs
        .par_iter()
        .map(|&(r, c)| {
            let split = plan.split(r);
            let ys: Vec<f64> = split.train.iter().map(|&i| y[i]).collect();
            let spec = candidates[c].spec.reseeded(derive(seed, &[c as u64, r as u64]));
            let m = fit_model(&spec, &x.select_rows(&split.train), &ys)?;
            m.predict(&x.select_rows(&split.validation))
        })
        .collect::<Result<Vec<_>>>()?;
    let nc = candidates.len();
    let preds: Vec<Vec<Vec<f64>>> = fitted.chunks(nc).map(|c| c.to_vec()).collect();
    let truth: Vec<Vec<f64>> = (0..plan.repeats.len())
        .map(|r| plan.split(r).validation.iter().map(|&i| y[i]).collect())
        .collect();
    let cache = Cache { preds, truth };

    // Members are tagged by candidate index so subsets map back to the cache.
    let tagged = VotingSpec::equal(
        (0..nc)
            .map(|i| ModelSpec::Base(crate::learners::LearnerSpec::linear().with_seed(i as u64)))
            .collect(),
    );
    let ids_of = |s: &VotingSpec| -> Vec<usize> {
        s.members
            .iter()
            .map(|m| match m {
                ModelSpec::Base(l) => l.seed as usize,
                _ => unreachable!(),
            })
            .collect()
    };
    let solo_scores: Vec<f64> = (0..nc).map(|i| cache.score(&[i], &[1.0])).collect();
    let (pruned, prune_trace) = backward_prune_voting(&tagged, |s| cache.score(&ids_of(s), &s.weights))?;
    let ids = ids_of(&pruned);
    let pruned_score = cache.score(&ids, &pruned.weights);
    let (refined, refine) = refine_voting_weights(&pruned, |s| cache.score(&ids, &s.weights), options)?;
    let total: f64 = refined.weights.iter().sum();
    let weights: Vec<f64> = refined.weights.iter().map(|w| w / total).collect();
    let refined_score = cache.score(&ids, &weights);
    Ok(AdaptiveVoting {
        names: ids.iter().map(|&i| candidates[i].name.clone()).collect(),
        spec: VotingSpec {
            members: ids.iter().map(|&i| candidates[i].spec.clone()).collect(),
            weights,
        },
        prune_trace,
        refine,
        solo_scores,
        pruned_score,
        refined_score,
    })
}
