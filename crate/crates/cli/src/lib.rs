//! Batch front-end for the `symhyp` toolkit: configuration parsing, model
//! construction, checks and run artifacts.

pub mod checks;
pub mod config;
pub mod exec;
pub mod initial;
pub mod model;
