use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DimKind {
    Continuous,
    Integer,
    /// Decoded by splitting `[lower, upper]` into equal buckets.
    Categorical { categories: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub name: String,
    #[serde(flatten)]
    pub kind: DimKind,
    pub lower: f64,
    pub upper: f64,
}

impl Dim {
    pub fn continuous(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            kind: DimKind::Continuous,
            lower,
            upper,
        }
    }

    pub fn integer(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            kind: DimKind::Integer,
            lower,
            upper,
        }
    }

    pub fn categorical(name: &str, categories: &[&str]) -> Self {
        Self {
            name: name.into(),
            kind: DimKind::Categorical {
                categories: categories.iter().map(|c| c.to_string()).collect(),
            },
            lower: 0.0,
            upper: 1.0,
        }
    }

    /// Decoded value; categorical dims decode to the bucket index.
    pub fn decode(&self, v: f64) -> f64 {
        let v = v.clamp(self.lower, self.upper);
        match &self.kind {
            DimKind::Continuous => v,
            DimKind::Integer => v.round(),
            DimKind::Categorical { categories } => {
                let n = categories.len();
                let t = (v - self.lower) / (self.upper - self.lower);
                ((t * n as f64).floor() as usize).min(n - 1) as f64
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub dims: Vec<Dim>,
}

impl ParamSpace {
    pub fn new(dims: Vec<Dim>) -> Result<Self> {
        for (i, d) in dims.iter().enumerate() {
            if !(d.lower < d.upper) {
                return Err(Error::invalid(format!(
                    "dimension {} has empty range [{}, {}]",
                    d.name, d.lower, d.upper
                )));
            }
            if dims[..i].iter().any(|o| o.name == d.name) {
                return Err(Error::invalid(format!("duplicate dimension {}", d.name)));
            }
            if let DimKind::Categorical { categories } = &d.kind {
                if categories.is_empty() {
                    return Err(Error::invalid(format!("{} has no categories", d.name)));
                }
            }
        }
        Ok(Self { dims })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.dims.iter().map(|d| (d.lower, d.upper)).collect()
    }

    pub fn decode(&self, v: &[f64]) -> Result<BTreeMap<String, f64>> {
        if v.len() != self.dims.len() {
            return Err(Error::invalid(format!(
                "candidate has {} values, space has {} dimensions",
                v.len(),
                self.dims.len()
            )));
        }
        Ok(self
            .dims
            .iter()
            .zip(v)
            .map(|(d, &x)| (d.name.clone(), d.decode(x)))
            .collect())
    }

    /// The nine-dimensional boosting space: rounds, depth, booster type,
    /// learning rate, split loss, child weight, row subsample, L2, L1.
    pub fn gbt() -> Self {
        Self::new(vec![
            Dim::integer("n_est", 1.0, 150.0),
            Dim::integer("max_d", 6.0, 150.0),
            Dim::categorical("booster", &["gbtree", "dart"]),
            Dim::continuous("eta", 0.0, 1.0),
            Dim::continuous("gamma", 0.0, 1.0),
            Dim::continuous("min_cw", 1.0, 10.0),
            Dim::continuous("sub_s", 0.0, 1.0),
            Dim::continuous("lambda", 0.0, 1.0),
            Dim::continuous("alpha", 0.0, 1.0),
        ])
        .expect("static space is valid")
    }

    /// Bagged Extra-Trees: member count, feature and sample rates, and the
    /// number of trees inside each member.
    pub fn bagging_extratrees() -> Self {
        Self::new(vec![
            Dim::integer("members", 10.0, 90.0),
            Dim::continuous("max_features", 0.05, 1.0),
            Dim::continuous("max_samples", 0.05, 1.0),
            Dim::integer("et_estimators", 10.0, 150.0),
        ])
        .expect("static space is valid")
    }
}
