use evoensemble::ensemble::{
    constant_model, vote_average, vote_majority, BaggingMember, BaggingModel, TrainedModel, VotingModel,
};
use evoensemble::metrics::{evaluate, pearson, summarize, write_summary_csv, MetricReport, Stat};
use evoensemble::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::metrics::oracle;

const TOL: f64 = 1e-9;

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..500.0)).collect();
    let e: Vec<f64> = t.iter().map(|v| v + rng.random_range(-80.0..80.0)).collect();
    (t, e)
}

#[test]
fn seven_metrics_match_loop_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..5 {
        let (t, e) = random_pair(&mut rng, 10_000);
        let got = evaluate(&t, &e).unwrap().values();
        let want = oracle(&t, &e);
        for k in 0..7 {
            assert!(rel_close(got[k], want[k]), "metric {k}: {} vs {}", got[k], want[k]);
        }
    }
}

#[test]
fn shift_and_scale_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (t, e) = random_pair(&mut rng, 10_000);
    let base = evaluate(&t, &e).unwrap();

    // R is invariant to any positive affine map of either side
    let e2: Vec<f64> = e.iter().map(|v| 3.5 * v - 40.0).collect();
    let r2 = evaluate(&t, &e2).unwrap();
    assert!(rel_close(base.r_value.unwrap(), r2.r_value.unwrap()));
    let t2: Vec<f64> = t.iter().map(|v| 0.25 * v + 9.0).collect();
    assert!(rel_close(pearson(&e, &t2).unwrap(), base.r_value.unwrap()));
    let neg: Vec<f64> = e.iter().map(|v| -v).collect();
    assert!(rel_close(pearson(&neg, &t).unwrap(), -base.r_value.unwrap()));

    // joint shift leaves MSE and MAE unchanged
    let ts: Vec<f64> = t.iter().map(|v| v + 123.0).collect();
    let es: Vec<f64> = e.iter().map(|v| v + 123.0).collect();
    let shifted = evaluate(&ts, &es).unwrap();
    assert!(rel_close(shifted.mse, base.mse));
    assert!(rel_close(shifted.mae, base.mae));
    assert!(rel_close(shifted.evs, base.evs));

    // joint scaling: MSE by c², MAE and RMSE by c, SMAPE and EVS unchanged
    let c = 2.75;
    let tc: Vec<f64> = t.iter().map(|v| c * v).collect();
    let ec: Vec<f64> = e.iter().map(|v| c * v).collect();
    let scaled = evaluate(&tc, &ec).unwrap();
    assert!(rel_close(scaled.mse, c * c * base.mse));
    assert!(rel_close(scaled.rmse, c * base.rmse));
    assert!(rel_close(scaled.mae, c * base.mae));
    assert!(rel_close(scaled.smape, base.smape));
    assert!(rel_close(scaled.evs, base.evs));

    // a constant bias on the prediction does not change explained variance
    let eb: Vec<f64> = e.iter().map(|v| v + 17.0).collect();
    assert!(rel_close(evaluate(&t, &eb).unwrap().evs, base.evs));
}

#[test]
fn perfect_prediction() {
    let t: Vec<f64> = (0..100).map(|i| (i as f64).sin() * 10.0 + 20.0).collect();
    let m = evaluate(&t, &t).unwrap();
    assert_eq!(m.mse, 0.0);
    assert_eq!(m.mae, 0.0);
    assert_eq!(m.msle, 0.0);
    assert_eq!(m.smape, 0.0);
    assert_eq!(m.evs, 1.0);
    assert_eq!(m.r_value, Some(1.0));
}

#[test]
fn degenerate_inputs() {
    // constant prediction: R undefined, EVS still defined
    let m = evaluate(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
    assert_eq!(m.r_value, None);
    assert!(m.values()[6].is_nan());
    // zero truth and zero prediction contribute nothing to SMAPE
    let m = evaluate(&[0.0, 4.0], &[0.0, 2.0]).unwrap();
    assert!(rel_close(m.smape, 100.0 * (2.0 / 3.0) / 2.0));
    // negative values are clamped before the log and counted
    let m = evaluate(&[-1.0, 2.0], &[3.0, -4.0]).unwrap();
    assert_eq!(m.msle_clamped, 2);
    let want = ((4.0f64).ln().powi(2) + (3.0f64).ln().powi(2)) / 2.0;
    assert!(rel_close(m.msle, want));
    assert!(evaluate(&[], &[]).is_err());
    assert!(evaluate(&[1.0], &[1.0, 2.0]).is_err());
}

#[test]
fn smape_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t: Vec<f64> = (0..1000).map(|_| rng.random_range(-5.0..5.0)).collect();
    let e: Vec<f64> = (0..1000).map(|_| rng.random_range(-5.0..5.0)).collect();
    let m = evaluate(&t, &e).unwrap();
    assert!((0.0..=200.0).contains(&m.smape));
}

#[test]
fn summary_statistics() {
    let s = Stat::of(&[4.0, 1.0, 3.0, 2.0]);
    assert_eq!((s.min, s.max, s.mean, s.median), (1.0, 4.0, 2.5, 2.5));
    assert!(rel_close(s.std, (5.0f64 / 3.0).sqrt()));

    let reports: Vec<MetricReport> = (1..=3)
        .map(|k| evaluate(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0 + k as f64]).unwrap())
        .collect();
    let sum = summarize(&reports).unwrap();
    assert_eq!(sum.runs, 3);
    assert!(rel_close(sum.mae.mean, 0.5));
    assert_eq!(sum.mse.min, 0.25);

    let mut out = Vec::new();
    write_summary_csv(&mut out, &[("m".into(), Some(sum)), ("broken".into(), None)]).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("model,stat,MSE,RMSE,MAE,MSLE,SMAPE,EVS,R\n"));
    assert!(text.contains("m,Mean,"));
    assert!(text.contains("broken,FAILED"));
}

fn stub(value: f64) -> evoensemble::learners::FittedLearner {
    match constant_model(value, 2) {
        TrainedModel::Base(f) => f,
        _ => unreachable!(),
    }
}

#[test]
fn bag_of_stubs_is_their_mean() {
    let bag = BaggingModel {
        members: [1.0, 2.0, 3.0, 6.0]
            .iter()
            .map(|&v| BaggingMember {
                features: vec![0, 1],
                model: stub(v),
            })
            .collect(),
    };
    assert_eq!(bag.predict_row(&[0.3, -7.0]), 3.0);
    let x = Matrix::from_rows(&[[0.0, 0.0], [5.0, 1.0]]).unwrap();
    assert_eq!(TrainedModel::Bagging(bag).predict(&x).unwrap(), vec![3.0, 3.0]);
}

#[test]
fn weighted_vote_examples() {
    assert_eq!(vote_average(&[1.0, 1.0, 2.0], &[10.0, 20.0, 30.0]).unwrap(), 22.5);
    assert_eq!(vote_average(&[0.5, 0.5], &[10.0, 20.0]).unwrap(), 15.0);
    assert_eq!(vote_majority(&[0, 1, 1], &[1.0, 1.0, 1.0]).unwrap(), 1);
    assert_eq!(vote_majority(&[0, 1, 1], &[3.0, 1.0, 1.0]).unwrap(), 0);
    assert_eq!(vote_majority(&[2, 1], &[1.0, 1.0]).unwrap(), 1);

    let vm = VotingModel {
        members: vec![constant_model(10.0, 1), constant_model(20.0, 1), constant_model(30.0, 1)],
        weights: vec![1.0, 1.0, 2.0],
    };
    let x = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
    assert_eq!(vm.predict(&x).unwrap(), vec![22.5, 22.5]);
}
