use evoensemble::dataio::{make_folds, synthetic_frame};
use evoensemble::ensemble::{fit_model, fit_stacking_with_report, StackingSpec};
use evoensemble::experiment::{extratrees, gbt_leafy, random_forest};
use evoensemble::learners::{LearnerSpec, LearnerState};
use evoensemble::metrics::evaluate;

fn main() {
    let design = synthetic_frame(2000, 4).design(false).unwrap();
    let plan = make_folds(design.y.len(), 10, 4).unwrap();
    let (train, test) = plan.holdout(0);
    let xtr = design.x.select_rows(&train);
    let ytr: Vec<f64> = train.iter().map(|&i| design.y[i]).collect();
    let xte = design.x.select_rows(&test);
    let yte: Vec<f64> = test.iter().map(|&i| design.y[i]).collect();

    let subs = vec![
        extratrees().with("n_estimators", 30.0).into(),
        gbt_leafy().with("n_est", 100.0).into(),
        random_forest(),
        LearnerSpec::knn(5).into(),
    ];
    let spec = StackingSpec::new(subs.clone(), LearnerSpec::linear());
    let (model, oof) = fit_stacking_with_report(&spec, &xtr, &ytr).unwrap();
    println!("out-of-fold features leak-free: {}", oof.leakage_free());
    if let LearnerState::Linear(lm) = &model.meta.state {
        println!("meta-learner: intercept {:.2}, weights {:.3?}", lm.intercept, lm.coef);
    }

    for (i, s) in subs.iter().enumerate() {
        let m = fit_model(s, &xtr, &ytr).unwrap();
        let r = evaluate(&yte, &m.predict(&xte).unwrap()).unwrap();
        println!("  sub-learner {i} ({}): MAE {:.2}", s.kind(), r.mae);
    }
    let r = evaluate(&yte, &model.predict(&xte).unwrap()).unwrap();
    println!("stack: R {:.3}, MAE {:.2}", r.r_value.unwrap(), r.mae);
}
