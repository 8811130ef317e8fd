//! Ordinary least squares with an intercept, solved by Householder QR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const RIDGE_PENALTY: f64 = 1e-8;
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub intercept: f64,
    pub coef: Vec<f64>,
    /// True when the design was rank deficient and the ridge solution was used.
    pub ridge: bool,
}

impl LinearModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept + row.iter().zip(&self.coef).map(|(x, b)| x * b).sum::<f64>()
    }
}

pub fn fit_linear(x: &Matrix, y: &[f64], ridge_fallback: bool) -> Result<LinearModel> {
    if x.n_rows() != y.len() {
        return Err(Error::invalid("row count differs from target length"));
    }
    if x.n_rows() == 0 {
        return Err(Error::invalid("no training rows"));
    }
    let p = x.n_cols();
    let design = augmented(x, 0.0);
    match solve_least_squares(design, y.to_vec(), p + 1) {
        Some(beta) => Ok(from_beta(beta, false)),
        None if ridge_fallback => {
            let design = augmented(x, RIDGE_PENALTY.sqrt());
            let mut rhs = y.to_vec();
            rhs.extend(std::iter::repeat_n(0.0, p));
            let beta = solve_least_squares(design, rhs, p + 1).ok_or(Error::RankDeficient)?;
            Ok(from_beta(beta, true))
        }
        None => Err(Error::RankDeficient),
    }
}

fn from_beta(beta: Vec<f64>, ridge: bool) -> LinearModel {
    LinearModel {
        intercept: beta[0],
        coef: beta[1..].to_vec(),
        ridge,
    }
}

/// Column-major `[1 | X]`, optionally followed by `sqrt(penalty) * I` rows on
/// the slope columns.
fn augmented(x: &Matrix, ridge_sqrt: f64) -> Vec<Vec<f64>> {
    let n = x.n_rows();
    let p = x.n_cols();
    let extra = if ridge_sqrt > 0.0 { p } else { 0 };
    let mut cols = Vec::with_capacity(p + 1);
    let mut ones = vec![1.0; n];
    ones.extend(std::iter::repeat_n(0.0, extra));
    cols.push(ones);
    for j in 0..p {
        let mut c = x.column(j);
        if extra > 0 {
            c.extend((0..p).map(|k| if k == j { ridge_sqrt } else { 0.0 }));
        }
        cols.push(c);
    }
    cols
}

/// Householder QR least squares. Returns `None` when a pivot is negligible
/// relative to its column norm (rank deficiency) or the system is
/// underdetermined.
fn solve_least_squares(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, p: usize) -> Option<Vec<f64>> {
    let m = b.len();
    if m < p {
        return None;
    }
    let norms: Vec<f64> = a.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let mut diag = vec![0.0; p];
    for k in 0..p {
        let alpha = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha <= RANK_TOL * norms[k].max(f64::MIN_POSITIVE) {
            return None;
        }
        let sign = if a[k][k] >= 0.0 { 1.0 } else { -1.0 };
        let r_kk = -sign * alpha;
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= r_kk;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        diag[k] = r_kk;
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(k + 1) {
                let dot: f64 = v.iter().zip(&col[k..]).map(|(s, t)| s * t).sum();
                let f = 2.0 * dot / vnorm2;
                for (c, s) in col[k..].iter_mut().zip(&v) {
                    *c -= f * s;
                }
            }
            let dot: f64 = v.iter().zip(&b[k..]).map(|(s, t)| s * t).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, s) in b[k..].iter_mut().zip(&v) {
                *c -= f * s;
            }
        }
    }
    let mut beta = vec![0.0; p];
    for k in (0..p).rev() {
        let mut s = b[k];
        for j in k + 1..p {
            s -= a[j][k] * beta[j];
        }
        beta[k] = s / diag[k];
    }
    beta.iter().all(|v| v.is_finite()).then_some(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = Matrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
        let m = fit_linear(&x, &[2.0, 4.0, 6.0], true).unwrap();
        assert!((m.coef[0] - 2.0).abs() < 1e-12);
        assert!(m.intercept.abs() < 1e-12);
        assert!((m.predict_row(&[4.0]) - 8.0).abs() < 1e-12);
        assert!(!m.ridge);
    }

    #[test]
    fn constant_target() {
        let x = Matrix::from_rows(&[[1.0, 0.5], [2.0, -1.0], [3.0, 4.0], [5.0, 1.0]]).unwrap();
        let m = fit_linear(&x, &[7.0; 4], true).unwrap();
        assert!((m.intercept - 7.0).abs() < 1e-12);
        assert!(m.coef.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn duplicate_columns_use_ridge_or_fail() {
        let x = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]]).unwrap();
        let y = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(fit_linear(&x, &y, false), Err(Error::RankDeficient)));
        let m = fit_linear(&x, &y, true).unwrap();
        assert!(m.ridge);
        assert!((m.coef[0] - 0.5).abs() < 1e-6 && (m.coef[1] - 0.5).abs() < 1e-6);
        assert!((m.predict_row(&[5.0, 5.0]) - 5.0).abs() < 1e-6);
    }
}
