//! Randomized verification of the matrix inequalities through signed
//! Loewner margins.

mod cases;
pub mod checks;
mod config;
mod margin;
mod suite;

pub use cases::{run_trial, CheckCase};
pub use checks::*;
pub use config::{SuiteConfig, DEFAULT_SEED};
pub use margin::{loewner_margin, raw_margin, ChainMargins};
pub use suite::{replay, run_case, run_suite, trial_rng, Failure, Histogram, InequalityReport};
