use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::metrics::{summarize, write_summary_csv, MetricReport, RunSummary, METRIC_NAMES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub dataset_checksum: String,
    pub dataset_rows: usize,
    pub active_rows: usize,
    pub lof_removed: usize,
    pub folds: usize,
    pub repeats: usize,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub repeat: usize,
    pub validation_fold: usize,
    pub test_fold: usize,
    pub report: MetricReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResult {
    pub name: String,
    pub kind: String,
    pub status: ModelStatus,
    pub error: Option<String>,
    pub summary: Option<RunSummary>,
    pub folds: Vec<FoldRecord>,
}

impl ModelResult {
    pub fn mean_r(&self) -> Option<f64> {
        self.summary.as_ref().map(|s| s.r_value.mean)
    }

    pub fn mean_mae(&self) -> Option<f64> {
        self.summary.as_ref().map(|s| s.mae.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub provenance: Provenance,
    pub models: Vec<ModelResult>,
}

impl BenchmarkReport {
    pub fn model(&self, name: &str) -> Option<&ModelResult> {
        self.models.iter().find(|m| m.name == name)
    }

    /// Summaries must be recomputable from the fold-level reports.
    pub fn is_consistent(&self) -> bool {
        self.models.iter().all(|m| match &m.summary {
            Some(s) => {
                let reps: Vec<_> = m.folds.iter().map(|f| f.report).collect();
                summarize(&reps).is_ok_and(|r| &r == s)
            }
            None => m.status == ModelStatus::Failed,
        })
    }

    pub fn write_summary_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let rows: Vec<(String, Option<RunSummary>)> = self
            .models
            .iter()
            .map(|m| (m.name.clone(), m.summary.clone()))
            .collect();
        write_summary_csv(out, &rows)
    }

    pub fn write_folds_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["model", "repeat", "validation_fold", "test_fold", "n_samples"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(METRIC_NAMES.iter().map(|s| s.to_string()));
        header.push("msle_clamped".into());
        w.write_record(&header)?;
        for m in &self.models {
            for f in &m.folds {
                let mut rec = vec![
                    m.name.clone(),
                    f.repeat.to_string(),
                    f.validation_fold.to_string(),
                    f.test_fold.to_string(),
                    f.report.n_samples.to_string(),
                ];
                rec.extend(f.report.values().iter().map(|v| v.to_string()));
                rec.push(f.report.msle_clamped.to_string());
                w.write_record(&rec)?;
            }
        }
        w.flush().map_err(|e| Error::io("folds", e))?;
        Ok(())
    }

    /// Writes `summary.csv`, `folds.csv` and `report.json` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| {
            let p = dir.join(name);
            std::fs::File::create(&p).map_err(|e| Error::io(p, e))
        };
        self.write_summary_csv(create("summary.csv")?)?;
        self.write_folds_csv(create("folds.csv")?)?;
        serde_json::to_writer_pretty(create("report.json")?, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Refuses a report produced by another config or dataset.
    pub fn check_provenance(&self, config: &ExperimentConfig, dataset_checksum: Option<&str>) -> Result<()> {
        let hash = config.hash();
        if self.provenance.config_hash != hash {
            return Err(Error::Provenance(format!(
                "report was produced by config {} but this config hashes to {hash}",
                self.provenance.config_hash
            )));
        }
        if let Some(c) = dataset_checksum {
            if self.provenance.dataset_checksum != c {
                return Err(Error::Provenance(format!(
                    "report dataset checksum {} does not match {c}",
                    self.provenance.dataset_checksum
                )));
            }
        }
        Ok(())
    }

    /// Aligned text table of mean ± std per model.
    pub fn render(&self) -> String {
        let width = self.models.iter().map(|m| m.name.len()).max().unwrap_or(5).max(5);
        let mut s = String::new();
        let _ = write!(s, "{:width$}", "model");
        for n in METRIC_NAMES {
            let _ = write!(s, "  {n:>21}");
        }
        s.push('\n');
        for m in &self.models {
            let _ = write!(s, "{:width$}", m.name);
            match &m.summary {
                Some(sum) => {
                    for st in sum.stats() {
                        let _ = write!(s, "  {:>10.4} ± {:<8.4}", st.mean, st.std);
                    }
                }
                None => {
                    let _ = write!(s, "  FAILED: {}", m.error.as_deref().unwrap_or("unknown"));
                }
            }
            s.push('\n');
        }
        let p = &self.provenance;
        let _ = writeln!(
            s,
            "rows {} (active {}, LOF removed {}), {} folds x {} repeats, seed {}, {:.1}s",
            p.dataset_rows, p.active_rows, p.lof_removed, p.folds, p.repeats, p.seed, p.wall_clock_seconds
        );
        s
    }
}
