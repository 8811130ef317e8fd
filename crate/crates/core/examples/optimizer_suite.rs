use evoensemble::metaopt::{optimize, Algorithm, OptimizerConfig};

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (std::f64::consts::TAU * v).cos())
            .sum::<f64>()
}

fn main() {
    let bounds = vec![(-5.0, 5.0); 5];
    let algorithms = [
        (Algorithm::De, 25),
        (Algorithm::Ga, 25),
        (Algorithm::Pso, 25),
        (Algorithm::OpoEa, 1),
        (Algorithm::NelderMead, 1),
    ];
    for (name, f) in [("sphere", sphere as fn(&[f64]) -> f64), ("rastrigin", rastrigin)] {
        println!("{name}, 5-D, 1000 evaluations");
        for (alg, pop) in algorithms {
            // optimizers maximize
            let fitness = |x: &[f64]| -f(x);
            let r = optimize(&OptimizerConfig::new(alg, pop, 1000, 1), &bounds, &fitness).unwrap();
            println!(
                "  {:<12} best {:>10.3e}  ({} evals)",
                format!("{alg:?}"),
                -r.best_fitness,
                r.evaluations
            );
        }
    }
}
