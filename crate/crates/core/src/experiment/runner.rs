use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{file_checksum, ExperimentConfig, NamedModel, TuningBlock};
use super::report::{BenchmarkReport, FoldRecord, ModelResult, ModelStatus, Provenance};
use crate::dataio::{derive_calendar, load_csv, make_folds, Design, FoldPlan, Frame, SchemaMode};
use crate::ensemble::{fit_model, ModelSpec, TrainedModel};
use crate::error::{Error, Result};
use crate::metaopt::{tune, Decoded, TuneResult};
use crate::metrics::{evaluate, summarize};
use crate::outlier::{filter_outliers, LofReport};
use crate::seed::derive;

/// The cleaned table and its design matrix.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub frame: Frame,
    pub design: Design,
    pub lof: Option<LofReport>,
    pub dataset_checksum: String,
}

pub fn load_dataset(config: &ExperimentConfig) -> Result<(Frame, String)> {
    let path = config.dataset_path().map_err(|e| e.in_stage("load"))?;
    let frame = load_csv(&path, SchemaMode::Infer).map_err(|e| e.in_stage("load"))?;
    let checksum = file_checksum(&path).map_err(|e| e.in_stage("load"))?;
    Ok((frame, checksum))
}

/// Calendar features, optional LOF cleaning of the full table, design matrix.
pub fn prepare_frame(frame: &Frame, config: &ExperimentConfig, checksum: String) -> Result<Prepared> {
    let frame = derive_calendar(frame).map_err(|e| e.in_stage("calendar"))?;
    let (frame, lof) = if config.lof.enabled {
        let mut cols = frame.feature_names(config.include_random);
        cols.push(frame.target_name().to_string());
        let (f, r) = filter_outliers(&frame, &cols, config.lof.k, config.lof.threshold)
            .map_err(|e| e.in_stage("lof"))?;
        (f, Some(r))
    } else {
        (frame, None)
    };
    let design = frame
        .design(config.include_random)
        .map_err(|e| e.in_stage("design"))?;
    Ok(Prepared {
        frame,
        design,
        lof,
        dataset_checksum: checksum,
    })
}

pub fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let (frame, checksum) = load_dataset(config)?;
    prepare_frame(&frame, config, checksum)
}

pub fn fold_plan(config: &ExperimentConfig, n_rows: usize) -> Result<FoldPlan> {
    let mut plan = make_folds(n_rows, config.folds.k, config.seed).map_err(|e| e.in_stage("folds"))?;
    if let Some(r) = config.folds.repeats {
        plan.repeats.truncate(r);
    }
    Ok(plan)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))
}

/// Seed of the task `(model, repeat)`; the fold ids are implied by the repeat.
pub fn task_seed(seed: u64, model: usize, repeat: usize) -> u64 {
    derive(seed, &[model as u64, repeat as u64])
}

/// Fits on the training folds of `repeat` and scores the test fold.
pub fn run_fold(spec: &ModelSpec, design: &Design, plan: &FoldPlan, repeat: usize, seed: u64) -> Result<FoldRecord> {
    let split = plan.split(repeat);
    debug_assert!(split.test.iter().all(|r| !split.train.contains(r)));
    let ys: Vec<f64> = split.train.iter().map(|&i| design.y[i]).collect();
    let model = fit_model(&spec.reseeded(seed), &design.x.select_rows(&split.train), &ys)?;
    let pred = model.predict(&design.x.select_rows(&split.test))?;
    let yt: Vec<f64> = split.test.iter().map(|&i| design.y[i]).collect();
    let (validation_fold, test_fold) = plan.repeats[repeat];
    Ok(FoldRecord {
        repeat,
        validation_fold,
        test_fold,
        report: evaluate(&yt, &pred)?,
    })
}

/// Cross-validated benchmark of every roster model on prepared data.
pub fn run_prepared(config: &ExperimentConfig, data: &Prepared) -> Result<BenchmarkReport> {
    let start = Instant::now();
    let plan = fold_plan(config, data.design.y.len())?;
    let tasks: Vec<(usize, usize)> = (0..config.models.len())
        .flat_map(|m| (0..plan.repeats.len()).map(move |r| (m, r)))
        .collect();
    let outcomes: Vec<Result<FoldRecord>> = pool(config.jobs)?.install(|| {
        tasks
            .par_iter()
            .map(|&(m, r)| {
                run_fold(
                    &config.models[m].spec,
                    &data.design,
                    &plan,
                    r,
                    task_seed(config.seed, m, r),
                )
            })
            .collect()
    });
    let mut per_model: Vec<Vec<Result<FoldRecord>>> = config.models.iter().map(|_| Vec::new()).collect();
    for (&(m, _), o) in tasks.iter().zip(outcomes) {
        per_model[m].push(o);
    }
    let models = config
        .models
        .iter()
        .zip(per_model)
        .map(|(nm, outs)| collect_model(nm, outs))
        .collect();
    Ok(BenchmarkReport {
        provenance: Provenance {
            config_hash: config.hash(),
            seed: config.seed,
            dataset_checksum: data.dataset_checksum.clone(),
            dataset_rows: data.frame.n_rows(),
            active_rows: data.frame.n_active(),
            lof_removed: data.lof.as_ref().map_or(0, |r| r.outliers.len()),
            folds: plan.k,
            repeats: plan.repeats.len(),
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        },
        models,
    })
}

fn collect_model(nm: &NamedModel, outs: Vec<Result<FoldRecord>>) -> ModelResult {
    let mut folds = Vec::new();
    let mut error = None;
    for o in outs {
        match o {
            Ok(f) => folds.push(f),
            Err(e) if error.is_none() => error = Some(e.to_string()),
            Err(_) => {}
        }
    }
    let summary = if error.is_none() {
        let reports: Vec<_> = folds.iter().map(|f| f.report).collect();
        summarize(&reports).ok()
    } else {
        None
    };
    ModelResult {
        name: nm.name.clone(),
        kind: nm.spec.kind().to_string(),
        status: if error.is_none() {
            ModelStatus::Ok
        } else {
            ModelStatus::Failed
        },
        error,
        summary,
        folds,
    }
}

pub fn run(config: &ExperimentConfig) -> Result<BenchmarkReport> {
    let data = prepare(config)?;
    run_prepared(config, &data)
}

/// Writes decoded values into `spec`. For bagging, `members`,
/// `max_features` and `max_samples` configure the ensemble, `et_estimators`
/// sets the member forest size and anything else goes to the base learner.
pub fn apply_params(spec: &ModelSpec, params: &Decoded) -> Result<ModelSpec> {
    match spec {
        ModelSpec::Base(s) => {
            let mut s = s.clone();
            for (k, &v) in params {
                s = s.with(k, v);
            }
            Ok(ModelSpec::Base(s))
        }
        ModelSpec::Bagging(b) => {
            let mut b = b.clone();
            for (k, &v) in params {
                match k.as_str() {
                    "members" => b.members = v.round().max(1.0) as usize,
                    "max_features" => b.max_features = v,
                    "max_samples" => b.max_samples = v,
                    "et_estimators" => b.base = b.base.clone().with("n_estimators", v.round()),
                    other => b.base = b.base.clone().with(other, v),
                }
            }
            Ok(ModelSpec::Bagging(b))
        }
        _ => Err(Error::invalid(format!(
            "cannot tune a {} model directly",
            spec.kind()
        ))),
    }
}

pub fn run_tuning_prepared(
    config: &ExperimentConfig,
    block: &TuningBlock,
    data: &Prepared,
) -> Result<TuneResult> {
    let target = config
        .model(&block.target)
        .ok_or_else(|| Error::invalid(format!("unknown model {:?}", block.target)))?;
    let space = block.space.resolve()?;
    let plan = fold_plan(config, data.design.y.len())?;
    let mut opt = block.optimizer.clone();
    opt.seed = derive(config.seed, &[opt.seed]);
    pool(config.jobs)?
        .install(|| {
            tune(
                |p| apply_params(&target.spec, p),
                &space,
                &data.design.x,
                &data.design.y,
                &plan,
                &opt,
            )
        })
        .map_err(|e| e.in_stage("tune"))
}

pub fn run_tuning(config: &ExperimentConfig, block: &str) -> Result<TuneResult> {
    let b = config
        .tuning
        .iter()
        .find(|t| t.name == block)
        .ok_or_else(|| Error::invalid(format!("unknown tuning block {block:?}")))?;
    let data = prepare(config)?;
    run_tuning_prepared(config, b, &data)
}

/// Fits one roster model on every active row.
pub fn train_prepared(config: &ExperimentConfig, name: &str, data: &Prepared) -> Result<TrainedModel> {
    let idx = config
        .models
        .iter()
        .position(|m| m.name == name)
        .ok_or_else(|| Error::invalid(format!("unknown model {name:?}")).in_stage("train"))?;
    let spec = config.models[idx].spec.reseeded(derive(config.seed, &[idx as u64]));
    pool(config.jobs)?
        .install(|| fit_model(&spec, &data.design.x, &data.design.y))
        .map_err(|e| e.in_stage("train"))
}

pub fn write_predictions(path: &Path, row_ids: &[usize], pred: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["row_id", "prediction"])?;
    for (r, p) in row_ids.iter().zip(pred) {
        w.write_record([r.to_string(), p.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

