use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::cases::CheckCase;
use crate::error::{Error, Result};

/// Everything that determines a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Case ids, or the single entry `"all"`.
    pub cases: Vec<String>,
    pub trials: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    pub alpha_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub seed: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            cases: vec!["all".into()],
            trials: 500,
            dim_min: 2,
            dim_max: 8,
            alpha_grid: vec![0.2, 0.5, 0.9, 1.2],
            t_grid: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            p_grid: vec![1.0, 2.0],
            s_grid: vec![0.25, 0.5, 1.0],
            seed: DEFAULT_SEED,
            tol: 1e-8,
            out: None,
        }
    }
}

fn check_grid(name: &str, grid: &[f64], ok: impl Fn(f64) -> bool, range: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if let Some(bad) = grid.iter().find(|&&v| !ok(v)) {
        return Err(Error::InvalidParameter(format!("{name} = {bad} is outside {range}")));
    }
    Ok(())
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.selected_cases()?;
        if self.dim_min == 0 || self.dim_max > 16 || self.dim_min > self.dim_max {
            return Err(Error::InvalidParameter(format!(
                "dimension range {}..{} must satisfy 1 <= min <= max <= 16",
                self.dim_min, self.dim_max
            )));
        }
        check_grid("alpha", &self.alpha_grid, |a| a > 0.0 && a < FRAC_PI_2, "(0, pi/2)")?;
        check_grid("t", &self.t_grid, |t| (0.0..=1.0).contains(&t), "[0, 1]")?;
        check_grid("p", &self.p_grid, |p| p >= 1.0 && p.is_finite(), "[1, inf)")?;
        check_grid("s", &self.s_grid, |s| s > 0.0 && s <= 1.0, "(0, 1]")?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(())
    }

    /// Resolves `cases` into concrete ids, in canonical order for `"all"`.
    pub fn selected_cases(&self) -> Result<Vec<CheckCase>> {
        if self.cases.iter().any(|c| c == "all") {
            return Ok(CheckCase::ALL.to_vec());
        }
        if self.cases.is_empty() {
            return Err(Error::InvalidParameter("no cases selected".into()));
        }
        let mut out = Vec::new();
        for id in &self.cases {
            let case: CheckCase = id.parse()?;
            if !out.contains(&case) {
                out.push(case);
            }
        }
        Ok(out)
    }

    /// Pass threshold for `case`: quadrature-bearing cases are allowed the
    /// quadrature error on top of `tol`.
    pub fn tolerance_for(&self, case: CheckCase) -> f64 {
        if case.uses_quadrature() {
            self.tol * 100.0
        } else {
            self.tol
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = SuiteConfig::default();
        c.validate().unwrap();
        assert_eq!(c.selected_cases().unwrap().len(), CheckCase::ALL.len());
    }

    #[test]
    fn rejects_out_of_range_grids() {
        let bad = [
            SuiteConfig { t_grid: vec![1.5], ..Default::default() },
            SuiteConfig { alpha_grid: vec![FRAC_PI_2], ..Default::default() },
            SuiteConfig { p_grid: vec![0.5], ..Default::default() },
            SuiteConfig { s_grid: vec![0.0], ..Default::default() },
            SuiteConfig { dim_min: 5, dim_max: 3, ..Default::default() },
            SuiteConfig { tol: 0.0, ..Default::default() },
            SuiteConfig { cases: vec!["nope".into()], ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn file_formats() {
        let c = SuiteConfig::from_toml("cases = [\"mccarthy_lower\"]\ntrials = 3\n").unwrap();
        assert_eq!(c.trials, 3);
        assert_eq!(c.selected_cases().unwrap(), vec![CheckCase::MccarthyLower]);
        assert_eq!(c.tol, 1e-8);
        let j = SuiteConfig::from_json(r#"{"seed": 7, "t_grid": [0.5]}"#).unwrap();
        assert_eq!((j.seed, j.t_grid.clone()), (7, vec![0.5]));
        assert!(SuiteConfig::from_toml("trails = 3").is_err());
    }
}
