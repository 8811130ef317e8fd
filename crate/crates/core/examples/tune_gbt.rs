use evoensemble::dataio::{make_folds, synthetic_frame};
use evoensemble::ensemble::ModelSpec;
use evoensemble::learners::LearnerSpec;
use evoensemble::metaopt::{tune, Algorithm, OptimizerConfig, ParamSpace};

fn main() {
    let design = synthetic_frame(1200, 5).design(false).unwrap();
    let mut plan = make_folds(design.y.len(), 10, 5).unwrap();
    plan.repeats.truncate(2);

    let space = ParamSpace::gbt();
    for d in &space.dims {
        println!("  {:<10} [{}, {}]", d.name, d.lower, d.upper);
    }

    // every candidate gets a small forest so the search stays cheap
    let build = |p: &std::collections::BTreeMap<String, f64>| {
        let mut s = LearnerSpec::gbt();
        for (k, &v) in p {
            s = s.with(k, v);
        }
        let n_est = s.get("n_est").unwrap().min(60.0);
        Ok(ModelSpec::Base(s.with("n_est", n_est)))
    };
    let config = OptimizerConfig::new(Algorithm::De, 8, 40, 17);
    let r = tune(build, &space, &design.x, &design.y, &plan, &config).unwrap();

    for row in &r.result.trace {
        println!(
            "gen {:>2}  evals {:>3}  best R {:.4}  mean {:.4}",
            row.generation, row.evaluations, row.best_fitness, row.mean_fitness
        );
    }
    println!("best parameters:");
    for (k, v) in &r.best_params {
        println!("  {k} = {v}");
    }
    println!("{} distinct candidates trained", r.unique_evaluations);
}
