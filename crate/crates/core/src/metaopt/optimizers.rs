use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::operators::{
    binomial_crossover, clamp_into, de_mutant, gaussian_mutation, geometric_crossover,
    nonuniform_mutation, uniform_point,
};
use crate::error::{Error, Result};
use crate::seed::{rng_for, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    De,
    Ga,
    Pso,
    OpoEa,
    NelderMead,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "de" => Algorithm::De,
            "ga" => Algorithm::Ga,
            "pso" => Algorithm::Pso,
            "opo_ea" | "1+1ea" => Algorithm::OpoEa,
            "nelder_mead" => Algorithm::NelderMead,
            other => return Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeParams {
    pub f: f64,
    pub cr: f64,
    /// Replace a member as soon as its trial wins, so later donors in the
    /// same generation already see it. Otherwise the whole generation is
    /// scored as one parallel batch and replaced together.
    pub immediate: bool,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            f: 0.5,
            cr: 0.9,
            immediate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    /// Fixed crossover weight; `None` draws one uniformly per mating.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub mutation_prob: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            alpha: None,
            beta: 6.0,
            mutation_prob: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoParams {
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    /// Velocity limit as a fraction of each range.
    pub v_max: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            inertia: 0.72,
            c1: 1.49,
            c2: 1.49,
            v_max: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OpoParams {
    pub sigma_frac: f64,
}

impl Default for OpoParams {
    fn default() -> Self {
        Self { sigma_frac: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub budget: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub de: DeParams,
    #[serde(default)]
    pub ga: GaParams,
    #[serde(default)]
    pub pso: PsoParams,
    #[serde(default)]
    pub opo: OpoParams,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-8
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, population: usize, budget: usize, seed: u64) -> Self {
        Self {
            algorithm,
            population,
            budget,
            seed,
            de: DeParams::default(),
            ga: GaParams::default(),
            pso: PsoParams::default(),
            opo: OpoParams::default(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub generation: usize,
    pub evaluations: usize,
    /// Best fitness seen so far.
    pub best_fitness: f64,
    /// Mean of the finite fitness values in the current population.
    pub mean_fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best: Vec<f64>,
    pub best_fitness: f64,
    pub trace: Vec<TraceRow>,
    pub evaluations: usize,
}

impl OptResult {
    pub fn write_trace_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["generation", "evaluations", "best_fitness", "mean_fitness"])?;
        for r in &self.trace {
            w.write_record([
                r.generation.to_string(),
                r.evaluations.to_string(),
                r.best_fitness.to_string(),
                r.mean_fitness.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("trace", e))?;
        Ok(())
    }
}

/// Fitness wrapper that counts calls and enforces the budget. Batches are
/// evaluated in parallel; results are collected in input order.
pub struct Evaluator<'a> {
    fitness: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    pub used: usize,
    pub budget: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(fitness: &'a (dyn Fn(&[f64]) -> f64 + Sync), budget: usize) -> Self {
        Self {
            fitness,
            used: 0,
            budget,
        }
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.used
    }

    /// Scores as many leading candidates as the budget allows.
    pub fn batch(&mut self, cands: &[Vec<f64>]) -> Vec<f64> {
        let n = cands.len().min(self.remaining());
        self.used += n;
        let f = self.fitness;
        cands[..n].par_iter().map(|c| sanitize(f(c))).collect()
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
}

impl Population {
    pub fn random(n: usize, bounds: &[(f64, f64)], rng: &mut Rng, eval: &mut Evaluator) -> Self {
        let members: Vec<Vec<f64>> = (0..n).map(|_| uniform_point(bounds, rng)).collect();
        let fitness = eval.batch(&members);
        Self { members, fitness }
    }

    pub fn best(&self) -> usize {
        let mut b = 0;
        for i in 1..self.fitness.len() {
            if self.fitness[i] > self.fitness[b] {
                b = i;
            }
        }
        b
    }

    fn mean(&self) -> f64 {
        let finite: Vec<f64> = self.fitness.iter().copied().filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            f64::NAN
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        }
    }
}

struct Tracker {
    best: Vec<f64>,
    best_fitness: f64,
    trace: Vec<TraceRow>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            best: Vec::new(),
            best_fitness: f64::NEG_INFINITY,
            trace: Vec::new(),
        }
    }

    fn offer(&mut self, x: &[f64], f: f64) {
        if self.best.is_empty() || f > self.best_fitness {
            self.best = x.to_vec();
            self.best_fitness = f;
        }
    }

    fn offer_pop(&mut self, pop: &Population) {
        let b = pop.best();
        self.offer(&pop.members[b], pop.fitness[b]);
    }

    fn record(&mut self, generation: usize, evaluations: usize, mean: f64) {
        self.trace.push(TraceRow {
            generation,
            evaluations,
            best_fitness: self.best_fitness,
            mean_fitness: mean,
        });
    }

    fn finish(self, evaluations: usize) -> OptResult {
        OptResult {
            best: self.best,
            best_fitness: self.best_fitness,
            trace: self.trace,
            evaluations,
        }
    }
}

/// One rand/1/bin generation with greedy replacement (ties keep the trial).
/// Returns false when the budget ran out before any trial was scored.
pub fn de_step(
    pop: &mut Population,
    params: &DeParams,
    bounds: &[(f64, f64)],
    rng: &mut Rng,
    eval: &mut Evaluator,
) -> Result<bool> {
    let n = pop.members.len();
    if n < 4 {
        return Err(Error::invalid("differential evolution needs at least 4 members"));
    }
    let dim = bounds.len();
    let trial_for = |i: usize, pop: &Population, rng: &mut Rng| {
        let mut r = [0usize; 3];
        let mut k = 0;
        while k < 3 {
            let c = rng.random_range(0..n);
            if c != i && !r[..k].contains(&c) {
                r[k] = c;
                k += 1;
            }
        }
        let v = de_mutant(
            &pop.members[r[0]],
            &pop.members[r[1]],
            &pop.members[r[2]],
            params.f,
            bounds,
        );
        let forced = rng.random_range(0..dim);
        binomial_crossover(&pop.members[i], &v, params.cr, forced, rng)
    };
    if params.immediate {
        let mut scored = false;
        for i in 0..n {
            let trial = trial_for(i, pop, rng);
            let Some(&s) = eval.batch(std::slice::from_ref(&trial)).first() else {
                break;
            };
            scored = true;
            if s >= pop.fitness[i] {
                pop.members[i] = trial;
                pop.fitness[i] = s;
            }
        }
        return Ok(scored);
    }
    let trials: Vec<Vec<f64>> = (0..n).map(|i| trial_for(i, pop, rng)).collect();
    let scores = eval.batch(&trials);
    for (i, s) in scores.iter().enumerate() {
        if *s >= pop.fitness[i] {
            pop.members[i] = trials[i].clone();
            pop.fitness[i] = *s;
        }
    }
    Ok(!scores.is_empty())
}

fn tournament(pop: &Population, rng: &mut Rng) -> usize {
    let a = rng.random_range(0..pop.members.len());
    let b = rng.random_range(0..pop.members.len());
    if pop.fitness[b] > pop.fitness[a] {
        b
    } else {
        a
    }
}

/// One generation: elitism of one, tournament-2 parents, geometric crossover
/// producing two children, non-uniform mutation per gene.
pub fn ga_step(
    pop: &mut Population,
    params: &GaParams,
    bounds: &[(f64, f64)],
    iter: usize,
    iter_max: usize,
    rng: &mut Rng,
    eval: &mut Evaluator,
) -> Result<bool> {
    let n = pop.members.len();
    if n < 2 {
        return Err(Error::invalid("genetic algorithm needs at least 2 members"));
    }
    let elite = pop.best();
    let mut children = Vec::with_capacity(n);
    while children.len() < n - 1 {
        let a = &pop.members[tournament(pop, rng)];
        let b = &pop.members[tournament(pop, rng)];
        let alpha = params.alpha.unwrap_or_else(|| rng.random::<f64>());
        for (p, q) in [(a, b), (b, a)] {
            if children.len() == n - 1 {
                break;
            }
            let mut c = geometric_crossover(p, q, alpha, bounds);
            for (g, &bd) in c.iter_mut().zip(bounds) {
                if rng.random::<f64>() < params.mutation_prob {
                    let theta = rng.random::<f64>();
                    let up = rng.random::<f64>() < 0.5;
                    *g = nonuniform_mutation(*g, bd, theta, up, iter, iter_max, params.beta);
                }
            }
            clamp_into(&mut c, bounds);
            children.push(c);
        }
    }
    let scores = eval.batch(&children);
    if scores.is_empty() {
        return Ok(false);
    }
    // Survivors: the elite, every scored child, then the best of the old
    // population to refill slots the budget could not pay for.
    let mut members = vec![pop.members[elite].clone()];
    let mut fitness = vec![pop.fitness[elite]];
    let k = scores.len();
    members.extend(children.into_iter().take(k));
    fitness.extend(scores);
    if members.len() < n {
        let mut rest: Vec<usize> = (0..n).filter(|&i| i != elite).collect();
        rest.sort_by(|&a, &b| pop.fitness[b].total_cmp(&pop.fitness[a]));
        for i in rest.into_iter().take(n - members.len()) {
            members.push(pop.members[i].clone());
            fitness.push(pop.fitness[i]);
        }
    }
    pop.members = members;
    pop.fitness = fitness;
    Ok(true)
}

pub struct Swarm {
    pub pop: Population,
    pub velocity: Vec<Vec<f64>>,
    pub pbest: Vec<Vec<f64>>,
    pub pbest_fitness: Vec<f64>,
}

impl Swarm {
    pub fn new(pop: Population) -> Self {
        let dim = pop.members.first().map_or(0, |m| m.len());
        Self {
            velocity: vec![vec![0.0; dim]; pop.members.len()],
            pbest: pop.members.clone(),
            pbest_fitness: pop.fitness.clone(),
            pop,
        }
    }

    fn gbest(&self) -> usize {
        let mut b = 0;
        for i in 1..self.pbest_fitness.len() {
            if self.pbest_fitness[i] > self.pbest_fitness[b] {
                b = i;
            }
        }
        b
    }
}

/// Global-best velocity and position update with velocity clamping.
pub fn pso_step(
    swarm: &mut Swarm,
    params: &PsoParams,
    bounds: &[(f64, f64)],
    rng: &mut Rng,
    eval: &mut Evaluator,
) -> Result<bool> {
    let n = swarm.pop.members.len();
    if n < 2 {
        return Err(Error::invalid("particle swarm needs at least 2 particles"));
    }
    let g = swarm.pbest[swarm.gbest()].clone();
    for i in 0..n {
        for (j, &(lo, hi)) in bounds.iter().enumerate() {
            let vmax = params.v_max * (hi - lo);
            let x = swarm.pop.members[i][j];
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let v = params.inertia * swarm.velocity[i][j]
                + params.c1 * r1 * (swarm.pbest[i][j] - x)
                + params.c2 * r2 * (g[j] - x);
            let v = v.clamp(-vmax, vmax);
            swarm.velocity[i][j] = v;
            swarm.pop.members[i][j] = (x + v).clamp(lo, hi);
        }
    }
    let scores = eval.batch(&swarm.pop.members);
    for (i, s) in scores.iter().enumerate() {
        swarm.pop.fitness[i] = *s;
        if *s > swarm.pbest_fitness[i] {
            swarm.pbest_fitness[i] = *s;
            swarm.pbest[i] = swarm.pop.members[i].clone();
        }
    }
    Ok(!scores.is_empty())
}

/// One Gaussian offspring, kept when it scores at least as well as the parent.
pub fn opo_ea_step(
    x: &mut Vec<f64>,
    fx: &mut f64,
    sigma_frac: f64,
    bounds: &[(f64, f64)],
    rng: &mut Rng,
    eval: &mut Evaluator,
) -> bool {
    let y = gaussian_mutation(x, sigma_frac, bounds, rng);
    let s = eval.batch(std::slice::from_ref(&y));
    match s.first() {
        Some(&fy) => {
            if fy >= *fx {
                *x = y;
                *fx = fy;
            }
            true
        }
        None => false,
    }
}

/// Runs the configured algorithm until the evaluation budget is spent.
pub fn optimize(
    config: &OptimizerConfig,
    bounds: &[(f64, f64)],
    fitness: &(dyn Fn(&[f64]) -> f64 + Sync),
) -> Result<OptResult> {
    if bounds.is_empty() {
        return Err(Error::invalid("search space has no dimensions"));
    }
    if bounds.iter().any(|(lo, hi)| !(lo < hi)) {
        return Err(Error::invalid("every dimension needs lower < upper"));
    }
    let n = match config.algorithm {
        Algorithm::OpoEa | Algorithm::NelderMead => 1,
        _ => config.population,
    };
    if config.budget < n || config.budget == 0 {
        return Err(Error::invalid(format!(
            "budget {} cannot pay for an initial population of {n}",
            config.budget
        )));
    }
    let mut rng = rng_for(config.seed, &[0x0B7]);
    let mut eval = Evaluator::new(fitness, config.budget);
    let mut track = Tracker::new();
    match config.algorithm {
        Algorithm::De | Algorithm::Ga | Algorithm::Pso => {
            let min = if config.algorithm == Algorithm::De { 4 } else { 2 };
            if n < min {
                return Err(Error::invalid(format!("population must be at least {min}")));
            }
            let pop = Population::random(n, bounds, &mut rng, &mut eval);
            track.offer_pop(&pop);
            track.record(0, eval.used, pop.mean());
            let iter_max = (config.budget - n).div_ceil(n - 1).max(1);
            let mut generation = 0;
            match config.algorithm {
                Algorithm::De => {
                    let mut pop = pop;
                    while eval.remaining() > 0 && de_step(&mut pop, &config.de, bounds, &mut rng, &mut eval)? {
                        generation += 1;
                        track.offer_pop(&pop);
                        track.record(generation, eval.used, pop.mean());
                    }
                }
                Algorithm::Ga => {
                    let mut pop = pop;
                    while eval.remaining() > 0
                        && ga_step(&mut pop, &config.ga, bounds, generation, iter_max, &mut rng, &mut eval)?
                    {
                        generation += 1;
                        track.offer_pop(&pop);
                        track.record(generation, eval.used, pop.mean());
                    }
                }
                _ => {
                    let mut swarm = Swarm::new(pop);
                    while eval.remaining() > 0 && pso_step(&mut swarm, &config.pso, bounds, &mut rng, &mut eval)? {
                        generation += 1;
                        track.offer_pop(&swarm.pop);
                        track.record(generation, eval.used, swarm.pop.mean());
                    }
                }
            }
        }
        Algorithm::OpoEa => {
            let mut x = uniform_point(bounds, &mut rng);
            let mut fx = eval.batch(std::slice::from_ref(&x))[0];
            track.offer(&x, fx);
            track.record(0, eval.used, fx);
            let mut generation = 0;
            while eval.remaining() > 0
                && opo_ea_step(&mut x, &mut fx, config.opo.sigma_frac, bounds, &mut rng, &mut eval)
            {
                generation += 1;
                track.offer(&x, fx);
                track.record(generation, eval.used, fx);
            }
        }
        Algorithm::NelderMead => {
            let start = uniform_point(bounds, &mut rng);
            let options = NelderMeadOptions {
                budget: config.budget,
                tol: config.tol,
                ..Default::default()
            };
            return nelder_mead(&start, bounds, &options, |v| fitness(v));
        }
    }
    Ok(track.finish(eval.used))
}

