//! Local Outlier Factor scoring and row filtering.
//!
//! Neighbourhoods are exact: every point's distances to all others are
//! computed and all points tied with the k-th nearest distance are kept.
//! Degenerate densities follow fixed rules so every score stays finite:
//!
//! * a reachability sum of zero gives an infinite local density;
//! * a density ratio of infinity over infinity is 1;
//! * a finite neighbour density over an infinite own density is 0;
//! * an infinite neighbour density over a finite own density saturates at
//!   `f64::MAX`, so such points always exceed any finite threshold.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::Frame;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::standardize::Standardizer;

pub const DEFAULT_K: usize = 20;
pub const DEFAULT_THRESHOLD: f64 = 1.5;

/// Exact k-nearest-neighbour structure over a point set.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    k: usize,
    points: Matrix,
    neighbors: Vec<Vec<usize>>,
    neighbor_dist: Vec<Vec<f64>>,
    k_distance: Vec<f64>,
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn build_index(points: &Matrix, k: usize) -> Result<NeighborIndex> {
    let n = points.n_rows();
    if k == 0 {
        return Err(Error::invalid("neighbour count must be at least 1"));
    }
    if k >= n {
        return Err(Error::invalid(format!(
            "neighbour count {k} must be below the point count {n}"
        )));
    }
    if points.as_slice().iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("points contain NaN"));
    }
    let lists: Vec<(Vec<usize>, Vec<f64>, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = points.row(i);
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (euclidean(xi, points.row(j)), j))
                .collect();
            let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            cand.select_nth_unstable_by(k - 1, cmp);
            let kd = cand[k - 1].0;
            let mut hood: Vec<(f64, usize)> = cand.into_iter().filter(|c| c.0 <= kd).collect();
            hood.sort_by(cmp);
            let (d, ids): (Vec<f64>, Vec<usize>) = hood.into_iter().unzip();
            (ids, d, kd)
        })
        .collect();
    let mut neighbors = Vec::with_capacity(n);
    let mut neighbor_dist = Vec::with_capacity(n);
    let mut k_distance = Vec::with_capacity(n);
    for (ids, d, kd) in lists {
        neighbors.push(ids);
        neighbor_dist.push(d);
        k_distance.push(kd);
    }
    Ok(NeighborIndex {
        k,
        points: points.clone(),
        neighbors,
        neighbor_dist,
        k_distance,
    })
}

impl NeighborIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Neighbour ids of `x`, nearest first (ties by id).
    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn k_distance(&self, x: usize) -> f64 {
        self.k_distance[x]
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        euclidean(self.points.row(a), self.points.row(b))
    }

    /// max(k-distance of `o`, d(x, o)); `o` must be a neighbour of `x`.
    pub fn reach_dist(&self, x: usize, o: usize) -> Result<f64> {
        let pos = self.neighbors[x]
            .iter()
            .position(|&j| j == o)
            .ok_or_else(|| Error::invalid(format!("{o} is not a neighbour of {x}")))?;
        Ok(self.k_distance[o].max(self.neighbor_dist[x][pos]))
    }

    /// Local reachability density; `f64::INFINITY` when every reachability
    /// distance is zero.
    pub fn lrd(&self, x: usize) -> f64 {
        let sum: f64 = self.neighbors[x]
            .iter()
            .zip(&self.neighbor_dist[x])
            .map(|(&o, &d)| self.k_distance[o].max(d))
            .sum();
        if sum == 0.0 {
            f64::INFINITY
        } else {
            self.neighbors[x].len() as f64 / sum
        }
    }
}

/// Ratio of neighbour density to own density under the degenerate rules.
pub fn density_ratio(neighbor: f64, own: f64) -> f64 {
    match (neighbor.is_infinite(), own.is_infinite()) {
        (true, true) => 1.0,
        (false, true) => 0.0,
        (true, false) => f64::MAX,
        (false, false) => neighbor / own,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LofReport {
    pub row_ids: Vec<usize>,
    pub lrd: Vec<f64>,
    pub lof: Vec<f64>,
    pub threshold: f64,
    pub outliers: Vec<usize>,
}

impl LofReport {
    /// Marks rows with `lof > threshold` as outliers.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.outliers = self
            .row_ids
            .iter()
            .zip(&self.lof)
            .filter(|(_, &l)| l > threshold)
            .map(|(&r, _)| r)
            .collect();
        self
    }

    pub fn is_outlier(&self, i: usize) -> bool {
        self.lof[i] > self.threshold
    }

    /// CSV with header `row_id,lrd,lof,is_outlier`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row_id", "lrd", "lof", "is_outlier"])?;
        for i in 0..self.row_ids.len() {
            w.write_record([
                self.row_ids[i].to_string(),
                self.lrd[i].to_string(),
                self.lof[i].to_string(),
                u8::from(self.is_outlier(i)).to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

pub fn lof_from_index(index: &NeighborIndex) -> LofReport {
    let n = index.len();
    let lrd: Vec<f64> = (0..n).into_par_iter().map(|i| index.lrd(i)).collect();
    let lof = (0..n)
        .into_par_iter()
        .map(|i| {
            let hood = index.neighbors(i);
            let m = hood.len() as f64;
            let mean: f64 = hood
                .iter()
                .map(|&o| density_ratio(lrd[o], lrd[i]) / m)
                .sum();
            mean.min(f64::MAX)
        })
        .collect();
    LofReport {
        row_ids: (0..n).collect(),
        lrd,
        lof,
        threshold: f64::INFINITY,
        outliers: Vec::new(),
    }
}

/// LOF score of every point, computed on the points exactly as given.
pub fn lof_scores(points: &Matrix, k: usize) -> Result<LofReport> {
    Ok(lof_from_index(&build_index(points, k)?))
}

/// Scores the active rows on z-scored `feature_columns` and masks every row
/// whose LOF exceeds `threshold`. The report's row ids are frame row ids.
pub fn filter_outliers(
    frame: &Frame,
    feature_columns: &[String],
    k: usize,
    threshold: f64,
) -> Result<(Frame, LofReport)> {
    if threshold.is_nan() || threshold <= 1.0 {
        return Err(Error::invalid(format!("LOF threshold {threshold} must exceed 1")));
    }
    let active = frame.active_rows();
    if active.len() < k + 1 {
        return Err(Error::invalid(format!(
            "{} active rows is too few for k = {k}",
            active.len()
        )));
    }
    let raw = frame.matrix(feature_columns)?;
    let z = Standardizer::fit(&raw).transform(&raw);
    let mut report = lof_scores(&z, k)?;
    report.row_ids = active;
    let report = report.with_threshold(threshold);
    let mut keep = vec![true; frame.n_rows()];
    for &r in &report.outliers {
        keep[r] = false;
    }
    Ok((frame.with_mask(&keep)?, report))
}
