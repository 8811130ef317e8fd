use evoensemble::dataio::{make_folds, synthetic_frame};
use evoensemble::ensemble::{fit_model, BaggingSpec, ModelSpec};
use evoensemble::learners::LearnerSpec;
use evoensemble::metrics::evaluate;

fn main() {
    let design = synthetic_frame(3000, 21).design(false).unwrap();
    let plan = make_folds(design.y.len(), 10, 21).unwrap();
    let (train, test) = plan.holdout(0);
    let xtr = design.x.select_rows(&train);
    let ytr: Vec<f64> = train.iter().map(|&i| design.y[i]).collect();
    let xte = design.x.select_rows(&test);
    let yte: Vec<f64> = test.iter().map(|&i| design.y[i]).collect();

    for (members, rate) in [(10, 1.0), (30, 0.4), (60, 0.4)] {
        let spec = ModelSpec::Bagging(BaggingSpec {
            max_features: rate,
            max_samples: 1.0,
            seed: 9,
            ..BaggingSpec::new(LearnerSpec::extratree().with("n_estimators", 20.0), members)
        });
        let model = fit_model(&spec, &xtr, &ytr).unwrap();
        let m = evaluate(&yte, &model.predict(&xte).unwrap()).unwrap();
        println!(
            "{members:>3} members, feature rate {rate:.1}: R = {:.3}, MAE = {:.2}",
            m.r_value.unwrap(),
            m.mae
        );
    }
}
