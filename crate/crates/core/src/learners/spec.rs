use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Knn,
    Cart,
    Extratree,
    Gbt,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Linear => "linear",
            Family::Knn => "knn",
            Family::Cart => "cart",
            Family::Extratree => "extratree",
            Family::Gbt => "gbt",
        };
        f.write_str(s)
    }
}

/// Validity rule of one hyper-parameter.
#[derive(Debug, Clone, Copy)]
pub struct ParamRule {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub lower_open: bool,
    pub integer: bool,
    /// `None` means "unset" (e.g. unlimited depth, base score from data).
    pub default: Option<f64>,
}

const fn rule(
    name: &'static str,
    lower: f64,
    upper: f64,
    lower_open: bool,
    integer: bool,
    default: Option<f64>,
) -> ParamRule {
    ParamRule {
        name,
        lower,
        upper,
        lower_open,
        integer,
        default,
    }
}

const INF: f64 = f64::INFINITY;

const LINEAR_RULES: &[ParamRule] = &[rule("ridge_fallback", 0.0, 1.0, false, true, Some(1.0))];

const KNN_RULES: &[ParamRule] = &[rule("K", 1.0, INF, false, true, Some(5.0))];

const CART_RULES: &[ParamRule] = &[
    rule("max_depth", 0.0, INF, false, true, None),
    rule("min_samples_split", 2.0, INF, false, true, Some(2.0)),
    rule("min_samples_leaf", 1.0, INF, false, true, Some(1.0)),
];

const EXTRATREE_RULES: &[ParamRule] = &[
    rule("max_depth", 0.0, INF, false, true, None),
    rule("min_samples_split", 2.0, INF, false, true, Some(2.0)),
    rule("min_samples_leaf", 1.0, INF, false, true, Some(1.0)),
    rule("max_features", 0.0, 1.0, true, false, Some(1.0)),
    rule("n_estimators", 1.0, INF, false, true, Some(1.0)),
];

/// Regularized boosting. Names follow the tuning table: number of rounds,
/// depth, booster type, learning rate, split loss reduction, minimum child
/// weight, row subsample rate, L2 and L1 leaf penalties.
const GBT_RULES: &[ParamRule] = &[
    rule("n_est", 1.0, INF, false, true, Some(100.0)),
    rule("max_d", 0.0, INF, false, true, Some(6.0)),
    rule("booster", 0.0, 1.0, false, true, Some(0.0)),
    rule("eta", 0.0, 1.0, true, false, Some(0.3)),
    rule("gamma", 0.0, INF, false, false, Some(0.0)),
    rule("min_cw", 0.0, INF, false, false, Some(1.0)),
    rule("sub_s", 0.0, 1.0, true, false, Some(1.0)),
    rule("lambda", 0.0, INF, false, false, Some(1.0)),
    rule("alpha", 0.0, INF, false, false, Some(0.0)),
    rule("base_score", -INF, INF, false, false, None),
];

impl Family {
    pub fn rules(self) -> &'static [ParamRule] {
        match self {
            Family::Linear => LINEAR_RULES,
            Family::Knn => KNN_RULES,
            Family::Cart => CART_RULES,
            Family::Extratree => EXTRATREE_RULES,
            Family::Gbt => GBT_RULES,
        }
    }

    pub fn rule(self, name: &str) -> Option<&'static ParamRule> {
        self.rules().iter().find(|r| r.name == name)
    }
}

/// One base learner family plus its hyper-parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub family: Family,
    #[serde(default)]
    pub hyperparams: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl LearnerSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            hyperparams: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn linear() -> Self {
        Self::new(Family::Linear)
    }

    pub fn knn(k: usize) -> Self {
        Self::new(Family::Knn).with("K", k as f64)
    }

    pub fn cart() -> Self {
        Self::new(Family::Cart)
    }

    pub fn extratree() -> Self {
        Self::new(Family::Extratree)
    }

    pub fn gbt() -> Self {
        Self::new(Family::Gbt)
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.hyperparams.insert(name.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Rejects unknown names and out-of-range values.
    pub fn validate(&self) -> Result<()> {
        for (name, &value) in &self.hyperparams {
            let r = self.family.rule(name).ok_or_else(|| Error::UnknownHyperparam {
                family: self.family.to_string(),
                name: name.clone(),
            })?;
            let below = if r.lower_open {
                value <= r.lower
            } else {
                value < r.lower
            };
            if value.is_nan() || below || value > r.upper || (r.integer && value.fract() != 0.0)
            {
                return Err(Error::OutOfBounds {
                    name: name.clone(),
                    value,
                    lower: r.lower,
                    upper: r.upper,
                });
            }
        }
        Ok(())
    }

    /// Value of `name`, falling back to the family default.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.hyperparams
            .get(name)
            .copied()
            .or_else(|| self.family.rule(name).and_then(|r| r.default))
    }

    pub(crate) fn get_usize(&self, name: &str) -> Option<usize> {
        self.get(name).map(|v| v as usize)
    }

    pub(crate) fn get_or(&self, name: &str, fallback: f64) -> f64 {
        self.get(name).unwrap_or(fallback)
    }
}
