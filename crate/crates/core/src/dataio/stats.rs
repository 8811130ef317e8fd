use std::io::Write;

use serde::{Deserialize, Serialize};

use super::frame::Frame;
use crate::error::{Error, Result};

/// Five-number description of one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub std: f64,
}

impl ColumnStats {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoActiveRows);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        Ok(Self {
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            mean,
            median,
            std,
        })
    }
}

/// Statistics of one column over the active rows.
pub fn describe(frame: &Frame, column: &str) -> Result<ColumnStats> {
    let values = frame.active_values(column)?;
    ColumnStats::of(&values)
}

/// Pearson correlation matrix over active rows.
pub fn pearson_matrix(frame: &Frame, columns: &[String]) -> Result<Vec<Vec<f64>>> {
    if frame.n_active() < 2 {
        return Err(Error::invalid("correlation needs at least two active rows"));
    }
    let mut centered = Vec::with_capacity(columns.len());
    for name in columns {
        let v = frame.active_values(name)?;
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let c: Vec<f64> = v.iter().map(|x| x - mean).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || c.iter().all(|&x| x == 0.0) {
            return Err(Error::ConstantColumn(name.clone()));
        }
        centered.push((c, norm));
    }
    let k = columns.len();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        out[i][i] = 1.0;
        for j in i + 1..k {
            let (a, na) = &centered[i];
            let (b, nb) = &centered[j];
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let r = (dot / (na * nb)).clamp(-1.0, 1.0);
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}

/// CSV with header `column,min,max,mean,median,std`.
pub fn write_stats_csv<W: Write>(out: W, rows: &[(String, ColumnStats)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["column", "min", "max", "mean", "median", "std"])?;
    for (name, s) in rows {
        w.write_record([
            name.clone(),
            s.min.to_string(),
            s.max.to_string(),
            s.mean.to_string(),
            s.median.to_string(),
            s.std.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

/// CSV with header `column,<names...>` and one row per column.
pub fn write_correlation_csv<W: Write>(out: W, names: &[String], m: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["column".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in names.iter().zip(m) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}
