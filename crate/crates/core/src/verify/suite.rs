use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cases::{run_trial, CheckCase};
use super::config::SuiteConfig;
use crate::error::Result;

const HISTOGRAM_BINS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges, or empty when there are no margins.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn of(sorted: &[f64]) -> Self {
        let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) else {
            return Self { edges: Vec::new(), counts: Vec::new() };
        };
        if lo == hi {
            return Self { edges: vec![lo, hi], counts: vec![sorted.len()] };
        }
        let width = (hi - lo) / HISTOGRAM_BINS as f64;
        let edges = (0..=HISTOGRAM_BINS).map(|k| lo + k as f64 * width).collect();
        let mut counts = vec![0; HISTOGRAM_BINS];
        for &m in sorted {
            let k = (((m - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
            counts[k] += 1;
        }
        Self { edges, counts }
    }
}

/// A trial whose margin fell below the tolerance, or which raised an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub trial: usize,
    pub margin: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub case: CheckCase,
    pub trials: usize,
    pub dims: [usize; 2],
    pub seed: u64,
    pub tol: f64,
    pub min_margin: Option<f64>,
    /// Per-trial margins in ascending order.
    pub margins: Vec<f64>,
    pub margins_histogram: Histogram,
    pub failures: Vec<Failure>,
    pub pass: bool,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

impl InequalityReport {
    /// Copy with `wall_time` zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self { wall_time: 0.0, ..self.clone() }
    }
}

/// 64-bit FNV-1a, used to give each case its own key.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Generator for one trial: keyed by the run seed and case, with the trial
/// index selecting the stream, so trials are independent of scheduling.
pub fn trial_rng(seed: u64, case: CheckCase, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(case.id()));
    rng.set_stream(trial as u64);
    rng
}

/// Re-runs a single trial exactly as [`run_suite`] did.
pub fn replay(case: CheckCase, cfg: &SuiteConfig, seed: u64, trial: usize) -> Result<f64> {
    cfg.validate()?;
    run_trial(case, cfg, &mut trial_rng(seed, case, trial), trial)
}

pub fn run_case(case: CheckCase, cfg: &SuiteConfig) -> InequalityReport {
    let start = Instant::now();
    let tol = cfg.tolerance_for(case);
    let outcomes: Vec<Result<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(case, cfg, &mut trial_rng(cfg.seed, case, trial), trial))
        .collect();
    let mut margins = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(m) => {
                if m.is_nan() || m < -tol {
                    failures.push(Failure { seed: cfg.seed, trial, margin: Some(m), error: None });
                }
                if m.is_finite() {
                    margins.push(m);
                }
            }
            Err(e) => failures.push(Failure { seed: cfg.seed, trial, margin: None, error: Some(e.to_string()) }),
        }
    }
    margins.sort_by(f64::total_cmp);
    InequalityReport {
        case,
        trials: cfg.trials,
        dims: [cfg.dim_min, cfg.dim_max],
        seed: cfg.seed,
        tol,
        min_margin: margins.first().copied(),
        margins_histogram: Histogram::of(&margins),
        margins,
        pass: failures.is_empty(),
        failures,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// Runs every selected case; deterministic given the config.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<InequalityReport>> {
    cfg.validate()?;
    Ok(cfg.selected_cases()?.into_iter().map(|case| run_case(case, cfg)).collect())
}
