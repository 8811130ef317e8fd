#![allow(dead_code)]

pub mod lof;
pub mod metrics;
