//! Regression metrics and their five-number summaries over repeated runs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub msle: f64,
    /// Percent, in [0, 200].
    pub smape: f64,
    pub evs: f64,
    /// `None` when either input is constant.
    pub r_value: Option<f64>,
    pub n_samples: usize,
    /// Entries clamped at zero before the log in MSLE.
    pub msle_clamped: usize,
}

pub const METRIC_NAMES: [&str; 7] = ["MSE", "RMSE", "MAE", "MSLE", "SMAPE", "EVS", "R"];

impl MetricReport {
    /// Values in [`METRIC_NAMES`] order; undefined R becomes NaN.
    pub fn values(&self) -> [f64; 7] {
        [
            self.mse,
            self.rmse,
            self.mae,
            self.msle,
            self.smape,
            self.evs,
            self.r_value.unwrap_or(f64::NAN),
        ]
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn population_var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
}

pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

pub fn evaluate(y_true: &[f64], y_pred: &[f64]) -> Result<MetricReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!(
            "{} targets vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::Empty("no samples to evaluate".into()));
    }
    let n = y_true.len() as f64;
    let mut se = 0.0;
    let mut ae = 0.0;
    let mut sle = 0.0;
    let mut sp = 0.0;
    let mut clamped = 0;
    let residuals: Vec<f64> = y_true.iter().zip(y_pred).map(|(t, e)| t - e).collect();
    for ((&t, &e), r) in y_true.iter().zip(y_pred).zip(&residuals) {
        se += r * r;
        ae += r.abs();
        if t < 0.0 {
            clamped += 1;
        }
        if e < 0.0 {
            clamped += 1;
        }
        let d = t.max(0.0).ln_1p() - e.max(0.0).ln_1p();
        sle += d * d;
        let denom = (t.abs() + e.abs()) / 2.0;
        if denom > 0.0 {
            sp += r.abs() / denom;
        }
    }
    let mse = se / n;
    let var_t = population_var(y_true);
    let var_r = population_var(&residuals);
    let evs = if var_t > 0.0 {
        1.0 - var_r / var_t
    } else if var_r == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(MetricReport {
        mse,
        rmse: mse.sqrt(),
        mae: ae / n,
        msle: sle / n,
        smape: sp / n * 100.0,
        evs,
        r_value: pearson(y_pred, y_true),
        n_samples: y_true.len(),
        msle_clamped: clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
}

impl Stat {
    /// Five-number summary with sample standard deviation; NaNs are skipped.
    pub fn of(values: &[f64]) -> Stat {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        if v.is_empty() {
            return Stat {
                min: f64::NAN,
                max: f64::NAN,
                mean: f64::NAN,
                median: f64::NAN,
                std: f64::NAN,
            };
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let m = mean(&v);
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        let std = if n > 1 {
            (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Stat {
            min: v[0],
            max: v[n - 1],
            mean: m,
            median,
            std,
        }
    }
}

/// Per-metric summary in [`METRIC_NAMES`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub mse: Stat,
    pub rmse: Stat,
    pub mae: Stat,
    pub msle: Stat,
    pub smape: Stat,
    pub evs: Stat,
    pub r_value: Stat,
    pub runs: usize,
}

pub const SUMMARY_ROWS: [&str; 5] = ["Min", "Max", "Mean", "Median", "STD"];

impl RunSummary {
    pub fn stats(&self) -> [&Stat; 7] {
        [
            &self.mse,
            &self.rmse,
            &self.mae,
            &self.msle,
            &self.smape,
            &self.evs,
            &self.r_value,
        ]
    }
}

pub fn summarize(reports: &[MetricReport]) -> Result<RunSummary> {
    if reports.is_empty() {
        return Err(Error::Empty("no reports to summarize".into()));
    }
    let col = |i: usize| Stat::of(&reports.iter().map(|r| r.values()[i]).collect::<Vec<_>>());
    Ok(RunSummary {
        mse: col(0),
        rmse: col(1),
        mae: col(2),
        msle: col(3),
        smape: col(4),
        evs: col(5),
        r_value: col(6),
        runs: reports.len(),
    })
}

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.6e}")
    }
}

/// Table-shaped CSV: one block of Min/Max/Mean/Median/STD rows per model,
/// one column per metric.
pub fn write_summary_csv<W: Write>(out: W, models: &[(String, Option<RunSummary>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["model".to_string(), "stat".to_string()];
    header.extend(METRIC_NAMES.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    for (name, summary) in models {
        match summary {
            Some(s) => {
                for (i, label) in SUMMARY_ROWS.iter().enumerate() {
                    let mut rec = vec![name.clone(), label.to_string()];
                    rec.extend(s.stats().iter().map(|st| {
                        fmt([st.min, st.max, st.mean, st.median, st.std][i])
                    }));
                    w.write_record(&rec)?;
                }
            }
            None => {
                let mut rec = vec![name.clone(), "FAILED".to_string()];
                rec.extend(std::iter::repeat_n(String::new(), METRIC_NAMES.len()));
                w.write_record(&rec)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("summary", e))?;
    Ok(())
}
