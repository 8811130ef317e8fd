use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use super::{optimize, OptResult, OptimizerConfig, ParamSpace};
use crate::dataio::FoldPlan;
use crate::ensemble::{fit_model, ModelSpec};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::metrics::{evaluate, MetricReport};
use crate::seed::derive;

pub type Decoded = BTreeMap<String, f64>;

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub best_params: Decoded,
    pub best_spec: ModelSpec,
    pub result: OptResult,
    /// Validation metrics of the winning candidate, one per repeat.
    pub fold_reports: Vec<MetricReport>,
    /// Distinct candidate specs actually trained.
    pub unique_evaluations: usize,
}

/// Validation reports of `spec` over the plan's repeats: train on the
/// training folds, score on the validation fold. Test folds are never read.
/// Repeats run in parallel, so sequential optimizers still use the pool.
pub fn validation_reports(
    spec: &ModelSpec,
    x: &Matrix,
    y: &[f64],
    plan: &FoldPlan,
    seed: u64,
) -> Result<Vec<MetricReport>> {
    (0..plan.repeats.len())
        .into_par_iter()
        .map(|r| {
            let split = plan.split(r);
            let ys: Vec<f64> = split.train.iter().map(|&i| y[i]).collect();
            let model = fit_model(
                &spec.reseeded(derive(seed, &[r as u64])),
                &x.select_rows(&split.train),
                &ys,
            )?;
            let pred = model.predict(&x.select_rows(&split.validation))?;
            let yv: Vec<f64> = split.validation.iter().map(|&i| y[i]).collect();
            evaluate(&yv, &pred)
        })
        .collect()
}

/// Mean validation R over the repeats; any failure or undefined R gives -inf.
pub fn mean_validation_r(reports: &[MetricReport]) -> f64 {
    let mut s = 0.0;
    for r in reports {
        match r.r_value {
            Some(v) => s += v,
            None => return f64::NEG_INFINITY,
        }
    }
    s / reports.len() as f64
}

/// Maximizes mean validation R of `builder(decode(v))` over `space`.
pub fn tune<B>(
    builder: B,
    space: &ParamSpace,
    x: &Matrix,
    y: &[f64],
    plan: &FoldPlan,
    config: &OptimizerConfig,
) -> Result<TuneResult>
where
    B: Fn(&Decoded) -> Result<ModelSpec> + Sync,
{
    let cache: Mutex<HashMap<String, f64>> = Mutex::new(HashMap::new());
    let fitness = |v: &[f64]| -> f64 {
        let Ok(params) = space.decode(v) else {
            return f64::NEG_INFINITY;
        };
        let Ok(spec) = builder(&params) else {
            return f64::NEG_INFINITY;
        };
        let key = serde_json::to_string(&spec).unwrap_or_default();
        if let Some(&f) = cache.lock().unwrap().get(&key) {
            return f;
        }
        let f = match validation_reports(&spec, x, y, plan, config.seed) {
            Ok(reps) => mean_validation_r(&reps),
            Err(_) => f64::NEG_INFINITY,
        };
        cache.lock().unwrap().insert(key, f);
        f
    };
    let result = optimize(config, &space.bounds(), &fitness)?;
    let best_params = space.decode(&result.best)?;
    let best_spec = builder(&best_params)?;
    let fold_reports =
        validation_reports(&best_spec, x, y, plan, config.seed).unwrap_or_default();
    let unique_evaluations = cache.lock().unwrap().len();
    Ok(TuneResult {
        best_params,
        best_spec,
        result,
        fold_reports,
        unique_evaluations,
    })
}
