//! Variation operators shared by the population optimizers. All outputs are
//! clamped into the box.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::seed::Rng;

pub const SHIFT_EPS: f64 = 1e-9;

pub fn clamp_into(v: &mut [f64], bounds: &[(f64, f64)]) {
    for (x, &(lo, hi)) in v.iter_mut().zip(bounds) {
        *x = if x.is_nan() { lo } else { x.clamp(lo, hi) };
    }
}

pub fn uniform_point(bounds: &[(f64, f64)], rng: &mut Rng) -> Vec<f64> {
    bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect()
}

/// `d1 + f * (d2 - d3)`, clamped.
pub fn de_mutant(d1: &[f64], d2: &[f64], d3: &[f64], f: f64, bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut v: Vec<f64> = d1
        .iter()
        .zip(d2.iter().zip(d3))
        .map(|(a, (b, c))| a + f * (b - c))
        .collect();
    clamp_into(&mut v, bounds);
    v
}

/// Binomial crossover; coordinate `forced` always comes from the mutant.
pub fn binomial_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    forced: usize,
    rng: &mut Rng,
) -> Vec<f64> {
    target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&t, &m))| {
            if j == forced || rng.random::<f64>() < cr {
                m
            } else {
                t
            }
        })
        .collect()
}

/// Weighted geometric mean `a^alpha * b^(1-alpha)`. Genes on a box whose lower
/// bound is not positive are shifted to `v - lower + eps` first and shifted
/// back afterwards. The result always lies between `a` and `b`.
pub fn geometric_gene(a: f64, b: f64, alpha: f64, lower: f64) -> f64 {
    if a == b {
        return a;
    }
    let shift = if lower <= 0.0 { SHIFT_EPS - lower } else { 0.0 };
    let (sa, sb) = (a + shift, b + shift);
    let c = sa.powf(alpha) * sb.powf(1.0 - alpha) - shift;
    c.clamp(a.min(b), a.max(b))
}

pub fn geometric_crossover(a: &[f64], b: &[f64], alpha: f64, bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut c: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(bounds)
        .map(|((&x, &y), &(lo, _))| geometric_gene(x, y, alpha, lo))
        .collect();
    clamp_into(&mut c, bounds);
    c
}

/// Size of the non-uniform step `(theta * (1 - iter / iter_max))^beta`.
pub fn nonuniform_factor(theta: f64, iter: usize, iter_max: usize, beta: f64) -> f64 {
    let t = if iter_max == 0 {
        0.0
    } else {
        1.0 - (iter as f64 / iter_max as f64).min(1.0)
    };
    (theta * t).powf(beta)
}

/// Moves `gene` towards the upper bound (`up`) or the lower bound by the
/// non-uniform factor of the remaining distance.
pub fn nonuniform_mutation(
    gene: f64,
    (lo, hi): (f64, f64),
    theta: f64,
    up: bool,
    iter: usize,
    iter_max: usize,
    beta: f64,
) -> f64 {
    let k = nonuniform_factor(theta, iter, iter_max, beta);
    let v = if up {
        gene + (hi - gene) * k
    } else {
        gene - (gene - lo) * k
    };
    v.clamp(lo, hi)
}

/// Gaussian perturbation with standard deviation `sigma_frac * range` per
/// dimension, clamped.
pub fn gaussian_mutation(
    x: &[f64],
    sigma_frac: f64,
    bounds: &[(f64, f64)],
    rng: &mut Rng,
) -> Vec<f64> {
    let mut y: Vec<f64> = x
        .iter()
        .zip(bounds)
        .map(|(&v, &(lo, hi))| {
            let sd = sigma_frac * (hi - lo);
            if sd > 0.0 {
                v + Normal::new(0.0, sd).expect("positive sd").sample(rng)
            } else {
                v
            }
        })
        .collect();
    clamp_into(&mut y, bounds);
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn geometric_examples() {
        assert!((geometric_gene(4.0, 9.0, 0.5, 1.0) - 6.0).abs() < 1e-12);
        assert_eq!(geometric_gene(2.5, 2.5, 0.3, 0.0), 2.5);
        let c = geometric_gene(-0.5, 0.7, 0.4, -1.0);
        assert!((-0.5..=0.7).contains(&c));
    }

    #[test]
    fn de_cancellation_and_full_crossover() {
        let b = [(-10.0, 10.0); 3];
        let v = de_mutant(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0], &[4.0, 4.0, 4.0], 0.8, &b);
        assert_eq!(v, vec![1.0, 2.0, 3.0]);
        let t = binomial_crossover(&[0.0; 3], &[1.0; 3], 1.0, 0, &mut rng(0));
        assert_eq!(t, vec![1.0; 3]);
        let t = binomial_crossover(&[0.0; 3], &[1.0; 3], 0.0, 2, &mut rng(0));
        assert_eq!(t, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn mutation_vanishes_at_last_iteration() {
        assert_eq!(nonuniform_mutation(0.3, (0.0, 1.0), 0.9, true, 10, 10, 6.0), 0.3);
        assert!(nonuniform_factor(0.7, 2, 10, 6.0) > nonuniform_factor(0.7, 3, 10, 6.0));
        assert_eq!(gaussian_mutation(&[0.2], 0.0, &[(0.0, 1.0)], &mut rng(1)), vec![0.2]);
    }
}
