use evoensemble::dataio::{make_folds, synthetic_frame};
use evoensemble::learners::{fit_learner, LearnerSpec};
use evoensemble::metrics::evaluate;

fn main() {
    let design = synthetic_frame(3000, 11).design(false).unwrap();
    let plan = make_folds(design.y.len(), 10, 11).unwrap();
    let (train, test) = plan.holdout(0);

    let xtr = design.x.select_rows(&train);
    let ytr: Vec<f64> = train.iter().map(|&i| design.y[i]).collect();
    let xte = design.x.select_rows(&test);
    let yte: Vec<f64> = test.iter().map(|&i| design.y[i]).collect();

    let learners = [
        ("linear", LearnerSpec::linear()),
        ("knn k=5", LearnerSpec::knn(5)),
        ("cart depth 8", LearnerSpec::cart().with("max_depth", 8.0)),
        ("extra trees x100", LearnerSpec::extratree().with("n_estimators", 100.0)),
        ("gbt defaults", LearnerSpec::gbt()),
        ("gbt slow", LearnerSpec::gbt().with("n_est", 300.0).with("eta", 0.05).with("sub_s", 0.8)),
    ];

    println!("{:<18} {:>8} {:>8} {:>8}", "learner", "R", "MAE", "RMSE");
    for (name, spec) in learners {
        let model = fit_learner(&spec.with_seed(5), &xtr, &ytr).unwrap();
        let m = evaluate(&yte, &model.predict(&xte).unwrap()).unwrap();
        println!(
            "{name:<18} {:>8.3} {:>8.2} {:>8.2}",
            m.r_value.unwrap_or(f64::NAN),
            m.mae,
            m.rmse
        );
    }
}
