//! Built-in rosters. External boosters are replaced by in-house GBT settings:
//! `gbt` mirrors common XGBoost defaults, `gbt-leafy` stands in for a
//! leaf-wise booster with a small learning rate.

use super::config::{NamedModel, SpaceRef, TuningBlock};
use crate::ensemble::{BaggingSpec, ModelSpec, StackingSpec, VotingSpec};
use crate::error::{Error, Result};
use crate::learners::LearnerSpec;
use crate::metaopt::{Algorithm, OptimizerConfig};

pub const PRESETS: [&str; 4] = ["paper-baselines", "paper-bagging", "paper-stacking", "paper-voting"];

/// Trees per Extra-Trees forest when used as a standalone model.
pub const ET_FOREST_SIZE: f64 = 100.0;
/// Trees inside each bagged Extra-Trees member.
pub const BAGGED_ET_SIZE: f64 = 80.0;

fn named(name: &str, spec: impl Into<ModelSpec>) -> NamedModel {
    NamedModel {
        name: name.to_string(),
        spec: spec.into(),
    }
}

pub fn extratrees() -> LearnerSpec {
    LearnerSpec::extratree().with("n_estimators", ET_FOREST_SIZE)
}

pub fn gbt_default() -> LearnerSpec {
    LearnerSpec::gbt()
}

pub fn gbt_leafy() -> LearnerSpec {
    LearnerSpec::gbt()
        .with("n_est", 300.0)
        .with("max_d", 10.0)
        .with("eta", 0.05)
        .with("sub_s", 0.8)
}

pub fn random_forest() -> ModelSpec {
    ModelSpec::Bagging(BaggingSpec {
        max_features: 0.5,
        ..BaggingSpec::new(LearnerSpec::cart(), 100)
    })
}

pub fn bagged_extratrees() -> ModelSpec {
    ModelSpec::Bagging(BaggingSpec {
        max_features: 0.4,
        max_samples: 1.0,
        ..BaggingSpec::new(
            LearnerSpec::extratree().with("n_estimators", BAGGED_ET_SIZE),
            60,
        )
    })
}

pub fn stacking() -> ModelSpec {
    ModelSpec::Stacking(StackingSpec::new(
        vec![
            extratrees().into(),
            gbt_leafy().into(),
            random_forest(),
            LearnerSpec::knn(5).into(),
        ],
        LearnerSpec::linear(),
    ))
}

pub fn voting_candidates() -> Vec<NamedModel> {
    vec![
        named("gbt", gbt_default()),
        named("gbt-leafy", gbt_leafy()),
        named("extratrees", extratrees()),
        named("random-forest", random_forest()),
        named("knn", LearnerSpec::knn(5)),
    ]
}

pub fn preset_roster(name: &str) -> Result<(Vec<NamedModel>, Vec<TuningBlock>)> {
    Ok(match name {
        "paper-baselines" => (
            vec![
                named("linear", LearnerSpec::linear()),
                named("knn", LearnerSpec::knn(5)),
                named("cart", LearnerSpec::cart()),
                named("extratrees", extratrees()),
                named("random-forest", random_forest()),
                named("gbt", gbt_default()),
            ],
            vec![TuningBlock {
                name: "gbt-de".into(),
                target: "gbt".into(),
                space: SpaceRef::Named("gbt".into()),
                optimizer: OptimizerConfig::new(Algorithm::De, 25, 1000, 0),
            }],
        ),
        "paper-bagging" => (
            vec![named("bagged-extratrees", bagged_extratrees())],
            vec![TuningBlock {
                name: "bagging-opo-ea".into(),
                target: "bagged-extratrees".into(),
                space: SpaceRef::Named("bagging-extratrees".into()),
                optimizer: OptimizerConfig::new(Algorithm::OpoEa, 1, 60, 0),
            }],
        ),
        "paper-stacking" => {
            let mut m = vec![named("stacking", stacking())];
            m.push(named("extratrees", extratrees()));
            m.push(named("gbt-leafy", gbt_leafy()));
            m.push(named("random-forest", random_forest()));
            m.push(named("knn", LearnerSpec::knn(5)));
            (m, Vec::new())
        }
        "paper-voting" => {
            let cands = voting_candidates();
            let members = cands.iter().map(|c| c.spec.clone()).collect();
            let mut m = cands;
            m.push(named("voting", ModelSpec::Voting(VotingSpec::equal(members))));
            (m, Vec::new())
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown preset {other:?}; expected one of {PRESETS:?}"
            )))
        }
    })
}
