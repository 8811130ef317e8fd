//! Box-constrained metaheuristics (all maximize) and the hyper-parameter
//! tuning loop built on them.

mod nelder_mead;
pub mod operators;
mod optimizers;
mod space;
mod tune;

pub use nelder_mead::{nelder_mead, NelderMeadOptions};
pub use optimizers::{
    de_step, ga_step, opo_ea_step, optimize, pso_step, Algorithm, DeParams, Evaluator,
    GaParams, OpoParams, OptResult, OptimizerConfig, Population, PsoParams, Swarm, TraceRow,
};
pub use space::{Dim, DimKind, ParamSpace};
pub use tune::{mean_validation_r, tune, validation_reports, Decoded, TuneResult};
