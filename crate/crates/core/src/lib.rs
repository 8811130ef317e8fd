//! Ensemble regression for building energy data: LOF cleaning, in-house tree
//! and neighbour learners, bagging/stacking/voting, metaheuristic tuning and a
//! reproducible cross-validation runner.

pub mod dataio;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod matrix;
pub mod metaopt;
pub mod metrics;
pub mod outlier;
pub mod seed;
pub mod standardize;

pub use error::{Error, Result};
pub use matrix::Matrix;
