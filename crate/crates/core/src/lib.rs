//! Poisson models of football scores: goal-count and goal-timing checks,
//! per-team scoring rates from Poisson GLMs, and Monte Carlo season
//! ensembles with title, top-four and relegation probabilities.

pub mod cli;
pub mod dist;
pub mod error;
pub mod gof;
pub mod ingest;
pub mod metrics;
pub mod regression;
pub mod simulate;
pub mod synthetic;

pub use error::{Error, Result};
