use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::presets::preset_roster;
use crate::ensemble::ModelSpec;
use crate::error::{Error, Result};
use crate::metaopt::{OptimizerConfig, ParamSpace};
use crate::outlier::{DEFAULT_K, DEFAULT_THRESHOLD};

pub const DATA_ENV: &str = "EVOENSEMBLE_DATA";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LofSettings {
    pub enabled: bool,
    pub k: usize,
    pub threshold: f64,
}

impl Default for LofSettings {
    fn default() -> Self {
        Self {
            enabled: true,
            k: DEFAULT_K,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FoldSettings {
    pub k: usize,
    /// Number of (validation, test) fold pairs to run; defaults to `k`.
    pub repeats: Option<usize>,
}

impl Default for FoldSettings {
    fn default() -> Self {
        Self { k: 10, repeats: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedModel {
    pub name: String,
    pub spec: ModelSpec,
}

/// A named built-in space or an explicit one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Named(String),
    Explicit(ParamSpace),
}

impl SpaceRef {
    pub fn resolve(&self) -> Result<ParamSpace> {
        match self {
            SpaceRef::Named(n) => match n.as_str() {
                "gbt" => Ok(ParamSpace::gbt()),
                "bagging-extratrees" => Ok(ParamSpace::bagging_extratrees()),
                other => Err(Error::invalid(format!("unknown space {other:?}"))),
            },
            SpaceRef::Explicit(s) => ParamSpace::new(s.dims.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningBlock {
    pub name: String,
    /// Roster model whose hyper-parameters are tuned.
    pub target: String,
    pub space: SpaceRef,
    pub optimizer: OptimizerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub preset: Option<String>,
    pub dataset: Option<PathBuf>,
    pub seed: u64,
    pub lof: LofSettings,
    pub folds: FoldSettings,
    /// Keep the two random control columns as features.
    pub include_random: bool,
    pub models: Vec<NamedModel>,
    pub tuning: Vec<TuningBlock>,
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: None,
            dataset: None,
            seed: 42,
            lof: LofSettings::default(),
            folds: FoldSettings::default(),
            include_random: false,
            models: Vec::new(),
            tuning: Vec::new(),
            output_dir: PathBuf::from("out"),
            jobs: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_preset(name: &str) -> Result<Self> {
        let mut c = Self {
            preset: Some(name.to_string()),
            ..Self::default()
        };
        c.expand()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c: Self = serde_json::from_str(&text)?;
        c.expand()?;
        Ok(c)
    }

    /// Appends the preset roster (if any) in front of explicit models and
    /// checks the result.
    pub fn expand(&mut self) -> Result<()> {
        if let Some(p) = &self.preset {
            let (mut models, tuning) = preset_roster(p)?;
            for m in std::mem::take(&mut self.models) {
                models.retain(|x| x.name != m.name);
                models.push(m);
            }
            self.models = models;
            if self.tuning.is_empty() {
                self.tuning = tuning;
            }
            self.preset = Some(p.clone());
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.models.iter().enumerate() {
            if self.models[..i].iter().any(|o| o.name == m.name) {
                return Err(Error::invalid(format!("duplicate model name {:?}", m.name)));
            }
            m.spec.validate()?;
        }
        for t in &self.tuning {
            if self.model(&t.target).is_none() {
                return Err(Error::invalid(format!(
                    "tuning block {:?} targets unknown model {:?}",
                    t.name, t.target
                )));
            }
            t.space.resolve()?;
        }
        if self.folds.k < 3 {
            return Err(Error::invalid("need at least 3 folds"));
        }
        if self.folds.repeats.is_some_and(|r| r == 0 || r > self.folds.k) {
            return Err(Error::invalid("repeats must lie in [1, k]"));
        }
        Ok(())
    }

    pub fn model(&self, name: &str) -> Option<&NamedModel> {
        self.models.iter().find(|m| m.name == name)
    }

    /// Explicit dataset path, else the environment fallback.
    pub fn dataset_path(&self) -> Result<PathBuf> {
        if let Some(p) = &self.dataset {
            return Ok(p.clone());
        }
        match std::env::var_os(DATA_ENV) {
            Some(p) if !p.is_empty() => Ok(PathBuf::from(p)),
            _ => Err(Error::invalid(format!(
                "no dataset: set `dataset` in the config or {DATA_ENV}"
            ))),
        }
    }

    /// SHA-256 over the canonical JSON form, ignoring fields that do not
    /// change results (worker count, output directory, dataset location).
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("jobs");
            o.remove("output_dir");
            o.remove("dataset");
        }
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }
}

pub fn file_checksum(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
