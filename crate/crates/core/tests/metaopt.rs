use std::sync::atomic::{AtomicUsize, Ordering};

use evoensemble::dataio::make_folds;
use evoensemble::ensemble::ModelSpec;
use evoensemble::error::Error;
use evoensemble::learners::LearnerSpec;
use evoensemble::metaopt::operators::{
    binomial_crossover, de_mutant, geometric_crossover, geometric_gene, nonuniform_factor, nonuniform_mutation,
};
use evoensemble::metaopt::{
    nelder_mead, optimize, tune, Algorithm, Dim, NelderMeadOptions, OptResult, OptimizerConfig, ParamSpace,
};
use evoensemble::seed::rng;
use evoensemble::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn neg_sphere(v: &[f64]) -> f64 {
    -v.iter().map(|x| x * x).sum::<f64>()
}

fn run(alg: Algorithm, pop: usize, budget: usize, seed: u64, bounds: &[(f64, f64)], f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> OptResult {
    optimize(&OptimizerConfig::new(alg, pop, budget, seed), bounds, f).unwrap()
}

#[test]
fn de_operator_examples() {
    let b = [(-100.0, 100.0); 2];
    assert_eq!(de_mutant(&[1.0, 1.0], &[3.0, 5.0], &[1.0, 1.0], 0.5, &b), vec![2.0, 3.0]);
    // clamped at the box
    assert_eq!(de_mutant(&[90.0, 0.0], &[50.0, 0.0], &[0.0, 0.0], 1.0, &b), vec![100.0, 0.0]);
    // the forced coordinate survives a zero crossover rate
    let mut r = rng(4);
    for forced in 0..4 {
        let t = binomial_crossover(&[0.0; 4], &[1.0; 4], 0.0, forced, &mut r);
        assert_eq!(t.iter().sum::<f64>(), 1.0);
        assert_eq!(t[forced], 1.0);
    }
    // cr = 0.5: each non-forced coordinate is a fair coin
    let mut taken = 0;
    for _ in 0..4000 {
        taken += binomial_crossover(&[0.0; 2], &[1.0; 2], 0.5, 0, &mut r)[1] as usize;
    }
    assert!((taken as f64 / 4000.0 - 0.5).abs() < 0.03);
}

#[test]
fn geometric_crossover_stays_between_parents() {
    assert!((geometric_gene(4.0, 9.0, 0.5, 1.0) - 6.0).abs() < 1e-12);
    assert_eq!(geometric_gene(4.0, 9.0, 1.0, 1.0), 4.0);
    assert!((geometric_gene(4.0, 9.0, 0.0, 1.0) - 9.0).abs() < 1e-12);
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let bounds = [(-3.0, 7.0), (0.5, 2.0), (0.0, 1.0)];
    for _ in 0..2000 {
        let a: Vec<f64> = bounds.iter().map(|&(l, h)| r.random_range(l..=h)).collect();
        let b: Vec<f64> = bounds.iter().map(|&(l, h)| r.random_range(l..=h)).collect();
        let c = geometric_crossover(&a, &b, r.random(), &bounds);
        for j in 0..3 {
            assert!(c[j] >= a[j].min(b[j]) && c[j] <= a[j].max(b[j]));
        }
    }
}

#[test]
fn nonuniform_step_shrinks_to_zero() {
    let steps: Vec<f64> = (0..=20).map(|i| nonuniform_factor(0.8, i, 20, 6.0)).collect();
    assert!(steps.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(steps[20], 0.0);
    let moved: Vec<f64> = (0..20)
        .map(|i| (nonuniform_mutation(0.5, (0.0, 1.0), 0.9, false, i, 20, 2.0) - 0.5).abs())
        .collect();
    assert!(moved.windows(2).all(|w| w[1] < w[0]));
    assert!((nonuniform_mutation(0.2, (0.0, 1.0), 1.0, true, 0, 10, 1.0) - 1.0).abs() < 1e-15);
}

#[test]
fn one_plus_one_ea_finds_quadratic_peak() {
    let f = |v: &[f64]| -(v[0] - 3.0).powi(2);
    for seed in 0..10 {
        let r = run(Algorithm::OpoEa, 1, 500, seed, &[(0.0, 10.0)], &f);
        assert!((r.best[0] - 3.0).abs() < 0.05, "seed {seed}: {}", r.best[0]);
        assert_eq!(r.evaluations, 500);
        assert_eq!(r.trace.len(), 500);
    }
}

#[test]
fn pso_on_sphere() {
    let bounds = [(-5.12, 5.12); 5];
    for seed in 0..10 {
        let r = run(Algorithm::Pso, 25, 1000, seed, &bounds, &neg_sphere);
        assert!(-r.best_fitness < 1e-2, "seed {seed}: {}", -r.best_fitness);
    }
}

#[test]
fn best_so_far_never_decreases() {
    let bounds = [(-5.12, 5.12); 3];
    let rastrigin = |v: &[f64]| {
        -v.iter().map(|x| x * x - 10.0 * (2.0 * std::f64::consts::PI * x).cos() + 10.0).sum::<f64>()
    };
    for alg in [Algorithm::De, Algorithm::Ga, Algorithm::Pso, Algorithm::OpoEa, Algorithm::NelderMead] {
        for seed in 0..3 {
            let r = run(alg, 10, 300, seed, &bounds, &rastrigin);
            assert!(r.trace.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness), "{alg:?}");
            assert!(r.trace.windows(2).all(|w| w[1].evaluations >= w[0].evaluations));
            assert_eq!(r.best_fitness, rastrigin(&r.best));
            assert!(r.best.iter().zip(&bounds).all(|(x, b)| (b.0..=b.1).contains(x)));
        }
    }
}

#[test]
fn ga_keeps_its_elite() {
    // with elitism the current population always contains the best point,
    // so the population mean can never exceed the best-so-far
    let bounds = [(-1.0, 1.0); 4];
    let r = run(Algorithm::Ga, 12, 600, 1, &bounds, &neg_sphere);
    for row in &r.trace {
        assert!(row.mean_fitness <= row.best_fitness);
    }
    let first = r.trace[0].best_fitness;
    assert!(r.best_fitness > first);
}

#[test]
fn budget_is_exact() {
    let bounds = [(0.0, 1.0); 3];
    let calls = AtomicUsize::new(0);
    let f = |v: &[f64]| {
        calls.fetch_add(1, Ordering::Relaxed);
        v[0]
    };
    for (alg, pop, budget) in [
        (Algorithm::De, 7, 100),
        (Algorithm::Ga, 6, 53),
        (Algorithm::Pso, 9, 40),
        (Algorithm::OpoEa, 1, 17),
        (Algorithm::NelderMead, 1, 60),
    ] {
        calls.store(0, Ordering::Relaxed);
        let r = run(alg, pop, budget, 2, &bounds, &f);
        assert!(r.evaluations <= budget, "{alg:?}");
        assert_eq!(calls.load(Ordering::Relaxed), r.evaluations, "{alg:?}");
        if alg != Algorithm::NelderMead {
            assert_eq!(r.evaluations, budget, "{alg:?}");
        }
    }
    // budget equal to the population: best of the initial sample
    let r = run(Algorithm::De, 8, 8, 3, &bounds, &f);
    assert_eq!(r.trace.len(), 1);
    assert_eq!(r.evaluations, 8);
    assert!(matches!(
        optimize(&OptimizerConfig::new(Algorithm::De, 8, 7, 0), &bounds, &f),
        Err(Error::InvalidArgument(_))
    ));
    assert!(optimize(&OptimizerConfig::new(Algorithm::De, 3, 30, 0), &bounds, &f).is_err());
}

#[test]
fn same_seed_same_run() {
    let bounds = [(-2.0, 2.0); 4];
    for alg in [Algorithm::De, Algorithm::Ga, Algorithm::Pso, Algorithm::OpoEa, Algorithm::NelderMead] {
        let a = run(alg, 10, 200, 42, &bounds, &neg_sphere);
        let b = run(alg, 10, 200, 42, &bounds, &neg_sphere);
        assert_eq!(a, b, "{alg:?}");
        if alg != Algorithm::NelderMead {
            assert_ne!(a.best, run(alg, 10, 200, 43, &bounds, &neg_sphere).best);
        }
    }
}

#[test]
fn nan_fitness_counts_as_worst() {
    let bounds = [(-1.0, 1.0); 2];
    let f = |v: &[f64]| if v[0] < 0.0 { f64::NAN } else { -v[1].abs() };
    let r = run(Algorithm::De, 8, 200, 0, &bounds, &f);
    assert!(r.best[0] >= 0.0 && r.best_fitness.is_finite());
}

#[test]
fn decoding() {
    let s = ParamSpace::gbt();
    let lo: Vec<f64> = s.bounds().iter().map(|b| b.0).collect();
    let d = s.decode(&lo).unwrap();
    assert_eq!((d["n_est"], d["max_d"], d["min_cw"]), (1.0, 6.0, 1.0));
    let booster = &s.dims[2];
    assert_eq!(booster.decode(0.4), 0.0);
    assert_eq!(booster.decode(0.6), 1.0);
    assert_eq!(s.dims[0].decode(37.4), 37.0);
    assert_eq!(s.dims[0].decode(-5.0), 1.0);
    assert!(ParamSpace::new(vec![Dim::continuous("a", 1.0, 1.0)]).is_err());
    assert!(ParamSpace::new(vec![Dim::continuous("a", 0.0, 1.0), Dim::integer("a", 0.0, 3.0)]).is_err());
}

#[test]
fn nelder_mead_on_a_parabola() {
    let r = nelder_mead(&[9.0], &[(0.0, 10.0)], &NelderMeadOptions::default(), |v| -(v[0] - 3.0).powi(2)).unwrap();
    assert!((r.best[0] - 3.0).abs() < 1e-4);
    let r = nelder_mead(&[0.5, 0.5], &[(0.0, 1.0); 2], &NelderMeadOptions::default(), |v| v[0] + v[1]).unwrap();
    assert!(r.best.iter().all(|&x| (x - 1.0).abs() < 1e-6), "{:?}", r.best);
}

fn linear_data(n: usize) -> (Matrix, Vec<f64>) {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    let rows: Vec<[f64; 3]> = (0..n).map(|_| [r.random(), r.random(), r.random()]).collect();
    let y = rows.iter().map(|v| 4.0 * v[0] - 2.0 * v[1] + v[2] + r.random_range(-0.05..0.05)).collect();
    (Matrix::from_rows(&rows).unwrap(), y)
}

/// Exact fit only in the middle third; elsewhere a one-neighbour average of
/// far-away points or a failing spec.
fn stub_builder(p: &evoensemble::metaopt::Decoded) -> evoensemble::error::Result<ModelSpec> {
    let v = p["v"];
    if v > 0.9 {
        Err(Error::InvalidArgument("outside the supported range".into()))
    } else if (0.4..0.6).contains(&v) {
        Ok(LearnerSpec::linear().into())
    } else {
        Ok(LearnerSpec::knn(40).into())
    }
}

#[test]
fn tuning_picks_the_middle_and_never_reads_test_rows() {
    let (x, y) = linear_data(200);
    let plan = make_folds(200, 10, 0).unwrap();
    let space = ParamSpace::new(vec![Dim::continuous("v", 0.0, 1.0)]).unwrap();
    let config = OptimizerConfig::new(Algorithm::De, 6, 30, 5);
    let out = tune(stub_builder, &space, &x, &y, &plan, &config).unwrap();
    assert!((0.4..0.6).contains(&out.best_params["v"]));
    assert_eq!(out.best_spec, LearnerSpec::linear().into());
    assert_eq!(out.fold_reports.len(), 10);
    assert!(out.unique_evaluations <= 3);
    assert!(out.result.best_fitness > 0.99);

    // corrupting rows that are only ever test rows changes nothing
    let mut single = plan.clone();
    single.repeats.truncate(1);
    let test_rows = single.split(0).test;
    let mut poisoned = y.clone();
    for &r in &test_rows {
        poisoned[r] = 1e9;
    }
    let a = tune(stub_builder, &space, &x, &y, &single, &config).unwrap();
    let b = tune(stub_builder, &space, &x, &poisoned, &single, &config).unwrap();
    assert_eq!(a.result, b.result);
    assert_eq!(a.fold_reports, b.fold_reports);
}

#[test]
fn failing_candidates_score_minus_infinity() {
    let (x, y) = linear_data(100);
    let plan = make_folds(100, 5, 0).unwrap();
    let space = ParamSpace::new(vec![Dim::continuous("v", 0.95, 1.0)]).unwrap();
    let config = OptimizerConfig::new(Algorithm::OpoEa, 1, 5, 0);
    // every candidate fails, so the final spec cannot be built either
    assert!(tune(stub_builder, &space, &x, &y, &plan, &config).is_err());

    let calls = AtomicUsize::new(0);
    let failing = |_: &evoensemble::metaopt::Decoded| -> evoensemble::error::Result<ModelSpec> {
        calls.fetch_add(1, Ordering::Relaxed);
        Ok(LearnerSpec::knn(500).into())
    };
    let space = ParamSpace::new(vec![Dim::continuous("v", 0.0, 1.0)]).unwrap();
    // more neighbours than training rows: every fit fails, the run still completes
    let t = tune(failing, &space, &x, &y, &plan, &config).unwrap();
    assert_eq!(t.result.best_fitness, f64::NEG_INFINITY);
    assert!(t.result.trace.iter().all(|r| r.best_fitness == f64::NEG_INFINITY));
    assert!(t.fold_reports.is_empty());
    assert!(calls.load(Ordering::Relaxed) >= 5);
}
