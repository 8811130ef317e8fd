//! Bagging, stacking and voting over base learners, plus the selection and
//! pruning procedures used to assemble them.

mod bagging;
mod selection;
mod stacking;
mod voting;

use serde::{Deserialize, Serialize};

pub use bagging::{bootstrap_sample, fit_bagging, BaggingMember, BaggingModel, BaggingSpec};
pub use selection::{greedy_forward_select, Selection, SelectionStep};
pub use stacking::{
    fit_stacking, fit_stacking_with_report, oof_meta_features, OofReport, StackingModel,
    StackingSpec, DEFAULT_OOF_FOLDS,
};
pub use voting::{
    backward_prune_voting, combine, refine_voting_weights, vote_average, vote_majority,
    PruneStep, VotingModel, VotingSpec,
};

use crate::error::{Error, Result};
use crate::learners::{fit_learner, FittedLearner, LearnerSpec};
use crate::matrix::Matrix;
use crate::seed::derive;

/// Any model the pipeline can train: a base learner or an ensemble of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelSpec {
    Base(LearnerSpec),
    Bagging(BaggingSpec),
    Stacking(StackingSpec),
    Voting(VotingSpec),
}

impl From<LearnerSpec> for ModelSpec {
    fn from(s: LearnerSpec) -> Self {
        ModelSpec::Base(s)
    }
}

impl ModelSpec {
    /// Copy with every random stream re-derived from `seed`.
    pub fn reseeded(&self, seed: u64) -> ModelSpec {
        match self {
            ModelSpec::Base(s) => ModelSpec::Base(s.clone().with_seed(seed)),
            ModelSpec::Bagging(b) => ModelSpec::Bagging(BaggingSpec {
                seed,
                ..b.clone()
            }),
            ModelSpec::Stacking(s) => ModelSpec::Stacking(StackingSpec {
                seed,
                meta: s.meta.clone().with_seed(derive(seed, &[u64::MAX])),
                ..s.clone()
            }),
            ModelSpec::Voting(v) => ModelSpec::Voting(VotingSpec {
                members: v
                    .members
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.reseeded(derive(seed, &[i as u64])))
                    .collect(),
                weights: v.weights.clone(),
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Base(s) => s.validate(),
            ModelSpec::Bagging(b) => b.validate(),
            ModelSpec::Stacking(s) => {
                s.validate()?;
                s.sub_learners.iter().try_for_each(ModelSpec::validate)
            }
            ModelSpec::Voting(v) => {
                v.validate()?;
                v.members.iter().try_for_each(ModelSpec::validate)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Base(_) => "base",
            ModelSpec::Bagging(_) => "bagging",
            ModelSpec::Stacking(_) => "stacking",
            ModelSpec::Voting(_) => "voting",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TrainedModel {
    Base(FittedLearner),
    Bagging(BaggingModel),
    Stacking(StackingModel),
    Voting(VotingModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        match self {
            TrainedModel::Base(m) => m.predict(x),
            TrainedModel::Bagging(m) => {
                let expected = m.members.iter().flat_map(|b| b.features.iter()).max();
                if let Some(&f) = expected {
                    if x.n_rows() > 0 && f >= x.n_cols() {
                        return Err(Error::SchemaMismatch {
                            expected: f + 1,
                            got: x.n_cols(),
                        });
                    }
                }
                Ok(x.rows().map(|r| m.predict_row(r)).collect())
            }
            TrainedModel::Stacking(m) => m.predict(x),
            TrainedModel::Voting(m) => m.predict(x),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn fit_model(spec: &ModelSpec, x: &Matrix, y: &[f64]) -> Result<TrainedModel> {
    Ok(match spec {
        ModelSpec::Base(s) => TrainedModel::Base(fit_learner(s, x, y)?),
        ModelSpec::Bagging(b) => TrainedModel::Bagging(fit_bagging(b, x, y)?),
        ModelSpec::Stacking(s) => TrainedModel::Stacking(fit_stacking(s, x, y)?),
        ModelSpec::Voting(v) => {
            spec.validate()?;
            let members = v
                .members
                .iter()
                .map(|m| fit_model(m, x, y))
                .collect::<Result<Vec<_>>>()?;
            TrainedModel::Voting(VotingModel {
                members,
                weights: v.weights.clone(),
            })
        }
    })
}

/// A fitted constant model; handy as a stub member.
pub fn constant_model(value: f64, n_features: usize) -> TrainedModel {
    use crate::learners::{LearnerState, LinearModel};
    TrainedModel::Base(FittedLearner {
        spec: LearnerSpec::linear(),
        n_features,
        state: LearnerState::Linear(LinearModel {
            intercept: value,
            coef: vec![0.0; n_features],
            ridge: false,
        }),
    })
}
