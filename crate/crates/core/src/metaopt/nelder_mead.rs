use serde::{Deserialize, Serialize};

use super::{OptResult, TraceRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadOptions {
    /// Maximum number of fitness evaluations.
    pub budget: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub tol: f64,
    /// Initial simplex edge as a fraction of each dimension's range.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            budget: 1000,
            tol: 1e-8,
            initial_step: 0.05,
        }
    }
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn project(v: &mut [f64], bounds: &[(f64, f64)]) {
    super::operators::clamp_into(v, bounds);
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Maximizes `fitness` with a projected simplex search. NaN scores count as
/// -inf. The trace has one row per iteration.
pub fn nelder_mead(
    start: &[f64],
    bounds: &[(f64, f64)],
    options: &NelderMeadOptions,
    mut fitness: impl FnMut(&[f64]) -> f64,
) -> Result<OptResult> {
    let dim = start.len();
    if dim == 0 || bounds.len() != dim {
        return Err(Error::invalid("simplex search needs matching non-empty start and bounds"));
    }
    if options.budget == 0 {
        return Err(Error::invalid("budget must be positive"));
    }
    let mut evals = 0usize;
    let mut f = |v: &[f64], evals: &mut usize| {
        *evals += 1;
        let s = fitness(v);
        if s.is_nan() {
            f64::NEG_INFINITY
        } else {
            s
        }
    };

    let mut x0 = start.to_vec();
    project(&mut x0, bounds);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let s0 = f(&x0, &mut evals);
    simplex.push((x0.clone(), s0));
    for j in 0..dim {
        if evals >= options.budget {
            break;
        }
        let (lo, hi) = bounds[j];
        let step = options.initial_step * (hi - lo);
        let mut v = x0.clone();
        v[j] = if v[j] + step <= hi { v[j] + step } else { v[j] - step };
        project(&mut v, bounds);
        let s = f(&v, &mut evals);
        simplex.push((v, s));
    }

    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut trace = Vec::new();
    let mut generation = 0;
    let mut record = |s: &[(Vec<f64>, f64)], evals: usize, generation: usize| {
        let finite: Vec<f64> = s.iter().map(|v| v.1).filter(|v| v.is_finite()).collect();
        trace.push(TraceRow {
            generation,
            evaluations: evals,
            best_fitness: s[0].1,
            mean_fitness: if finite.is_empty() {
                f64::NAN
            } else {
                finite.iter().sum::<f64>() / finite.len() as f64
            },
        });
    };
    sort(&mut simplex);
    record(&simplex, evals, generation);

    while simplex.len() == dim + 1 && evals < options.budget {
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < options.tol {
            break;
        }
        generation += 1;
        let mut centroid = vec![0.0; dim];
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let mut xr = lerp(&centroid, &worst.0, -REFLECT);
        project(&mut xr, bounds);
        let fr = f(&xr, &mut evals);
        if fr > simplex[0].1 && evals < options.budget {
            let mut xe = lerp(&centroid, &worst.0, -EXPAND);
            project(&mut xe, bounds);
            let fe = f(&xe, &mut evals);
            simplex[dim] = if fe > fr { (xe, fe) } else { (xr, fr) };
        } else if fr > simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else if evals < options.budget {
            let outside = fr > worst.1;
            let toward = if outside { &xr } else { &worst.0 };
            let mut xc = lerp(&centroid, toward, CONTRACT);
            project(&mut xc, bounds);
            let fc = f(&xc, &mut evals);
            let accept = if outside { fc >= fr } else { fc > worst.1 };
            if accept {
                simplex[dim] = (xc, fc);
            } else {
                let b = simplex[0].0.clone();
                for i in 1..=dim {
                    if evals >= options.budget {
                        break;
                    }
                    let mut v = lerp(&b, &simplex[i].0, SHRINK);
                    project(&mut v, bounds);
                    let s = f(&v, &mut evals);
                    simplex[i] = (v, s);
                }
            }
        } else if fr > worst.1 {
            simplex[dim] = (xr, fr);
        }
        sort(&mut simplex);
        record(&simplex, evals, generation);
    }
    sort(&mut simplex);
    Ok(OptResult {
        best: simplex[0].0.clone(),
        best_fitness: simplex[0].1,
        trace,
        evaluations: evals,
    })
}
