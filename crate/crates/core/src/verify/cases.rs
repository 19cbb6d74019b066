use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::config::SuiteConfig;
use crate::entropy::{
    check_lnt_convexity, check_tsallis_monotone, check_tsallis_param_convexity, check_tsallis_sandwich,
};
use crate::error::{Error, Result};
use crate::means::{MeanKind, PathFamily, RepresentingMeasure, WeightParam};
use crate::radius::check_radius_chain;
use crate::sectorial::{
    random_complex, random_loewner_pair, random_positive_definite, random_sectorial, random_unit_vector, SectorialCert,
};

macro_rules! cases {
    ($($variant:ident => $id:literal),* $(,)?) => {
        /// One named inequality exercised by the harness.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum CheckCase { $($variant),* }

        impl CheckCase {
            pub const ALL: &'static [CheckCase] = &[$(Self::$variant),*];

            pub fn id(self) -> &'static str {
                match self { $(Self::$variant => $id),* }
            }
        }

        impl FromStr for CheckCase {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($id => Ok(Self::$variant),)*
                    _ => Err(Error::InvalidParameter(format!("unknown case id `{s}`"))),
                }
            }
        }
    };
}

cases! {
    LemmaScalar => "lemma_scalar",
    PropPathConvex => "prop_path_convex",
    PropPathLogconvex => "prop_path_logconvex",
    MccarthyLower => "mccarthy_lower",
    MccarthyUpper => "mccarthy_upper",
    BaselineRealMean => "baseline_real_mean",
    BaselineSec2Mean => "baseline_sec2_mean",
    ThmNablaVsSigma => "thm_nabla_vs_sigma",
    ThmSec2Reverse => "thm_sec2_reverse",
    RemarkPositiveSandwich => "remark_positive_sandwich",
    ThmHarmonicRefine => "thm_harmonic_refine",
    CorIntegralRefine => "cor_integral_refine",
    ThmConcaveSec2 => "thm_concave_sec2",
    ThmHermiteHadamard => "thm_hermite_hadamard",
    RadiusRefine => "radius_refine",
    TsallisLntConvex => "tsallis_lnt_convex",
    TsallisSandwich => "tsallis_sandwich",
    TsallisParamConvex => "tsallis_param_convex",
    TsallisMonotone => "tsallis_monotone",
}

impl fmt::Display for CheckCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl CheckCase {
    pub fn uses_quadrature(self) -> bool {
        matches!(self, Self::CorIntegralRefine | Self::ThmHermiteHadamard)
    }
}

/// Uniform grid `0, 0.1, ..., 1` for the path-convexity checks.
fn decile_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Nine-point grid `0.1, ..., 0.9` for Tsallis monotonicity and ln_t convexity.
fn interior_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

fn weights(cfg: &SuiteConfig) -> Result<Vec<WeightParam>> {
    cfg.t_grid.iter().map(|&t| WeightParam::new(t)).collect()
}

fn min_over<T>(items: impl IntoIterator<Item = T>, mut f: impl FnMut(T) -> Result<f64>) -> Result<f64> {
    let mut min = f64::INFINITY;
    for item in items {
        min = min.min(f(item)?);
    }
    Ok(min)
}

struct Trial<'a, R> {
    cfg: &'a SuiteConfig,
    rng: &'a mut R,
    dim: usize,
    alpha: f64,
}

impl<R: Rng> Trial<'_, R> {
    fn pd_pair(&mut self) -> (crate::linalg::ComplexMatrix, crate::linalg::ComplexMatrix) {
        let a = random_positive_definite(self.rng, self.dim, 1.0);
        let b = random_positive_definite(self.rng, self.dim, 1.0);
        (a, b)
    }

    fn sectorial_pair(&mut self) -> Result<(SectorialCert, SectorialCert)> {
        let a = random_sectorial(self.rng, self.dim, self.alpha, 1.0)?;
        let b = random_sectorial(self.rng, self.dim, self.alpha, 1.0)?;
        Ok((SectorialCert::new(a, self.alpha)?, SectorialCert::new(b, self.alpha)?))
    }
}

/// Draws fresh inputs for `case` and returns the smallest margin over the
/// configured parameter grids.
pub fn run_trial<R: Rng>(case: CheckCase, cfg: &SuiteConfig, rng: &mut R, trial: usize) -> Result<f64> {
    let dim = rng.random_range(cfg.dim_min..=cfg.dim_max);
    let alpha = cfg.alpha_grid[trial % cfg.alpha_grid.len()];
    let ws = weights(cfg)?;
    let mut tr = Trial { cfg, rng, dim, alpha };
    match case {
        CheckCase::LemmaScalar => min_over(ConvexFn::ALL, |f| {
            let (lo, hi) = f.sample_domain();
            let a = tr.rng.random_range(lo..=hi);
            let b = tr.rng.random_range(lo..=hi);
            let t = tr.rng.random_range(0.0..=1.0);
            let (m21, m22) = check_lemma_scalar(f, a, b, WeightParam::new(t)?)?;
            Ok(m21.min(m22))
        }),
        CheckCase::PropPathConvex | CheckCase::PropPathLogconvex => {
            let (a, b) = tr.pd_pair();
            let x = random_unit_vector(tr.rng, dim);
            let grid = decile_grid();
            let families: &[PathFamily] = if case == CheckCase::PropPathConvex {
                &PathFamily::ALL
            } else {
                &[PathFamily::Geometric, PathFamily::Harmonic]
            };
            min_over(families.iter(), |&family| {
                let r = check_path_convexity(&a, &b, family, &x, &grid)?;
                Ok(if case == CheckCase::PropPathConvex { r.convexity } else { r.log_convexity.unwrap_or(0.0) })
            })
        }
        CheckCase::MccarthyLower | CheckCase::MccarthyUpper => {
            let b = random_positive_definite(tr.rng, dim, 1.0);
            let x = random_unit_vector(tr.rng, dim);
            min_over(ws.iter(), |&w| {
                let m = check_mccarthy(&b, &x, w)?;
                Ok(if case == CheckCase::MccarthyLower { m.lower } else { m.upper })
            })
        }
        CheckCase::BaselineRealMean | CheckCase::BaselineSec2Mean => {
            let (a, b) = tr.sectorial_pair()?;
            let kinds = [MeanKind::Geometric, MeanKind::Harmonic];
            min_over(kinds.iter().flat_map(|k| ws.iter().map(move |w| (k, *w))), |(kind, w)| {
                if case == CheckCase::BaselineRealMean {
                    check_baseline_real_mean(a.matrix(), b.matrix(), kind, w)
                } else {
                    check_baseline_sec2(&a, &b, kind, w)
                }
            })
        }
        CheckCase::ThmNablaVsSigma | CheckCase::ThmSec2Reverse => {
            let (a, b) = tr.sectorial_pair()?;
            min_over(PathFamily::ALL.iter().flat_map(|f| ws.iter().map(move |w| (*f, *w))), |(family, w)| {
                if case == CheckCase::ThmNablaVsSigma {
                    check_thm_nabla_vs_sigma(a.matrix(), b.matrix(), family, w)
                } else {
                    check_thm_sec2_reverse(&a, &b, family, w)
                }
            })
        }
        CheckCase::RemarkPositiveSandwich => {
            let (a, b) = tr.pd_pair();
            min_over(PathFamily::ALL.iter().flat_map(|f| ws.iter().map(move |w| (*f, *w))), |(family, w)| {
                Ok(check_remark_sandwich(&a, &b, family, w)?.min())
            })
        }
        CheckCase::ThmHarmonicRefine => {
            let (a, b) = tr.sectorial_pair()?;
            min_over(ws.iter(), |&w| {
                let r = check_harmonic_refine(a.matrix(), b.matrix(), w)?;
                Ok(r.refine.min(r.baseline))
            })
        }
        CheckCase::CorIntegralRefine => {
            let (a, b) = tr.sectorial_pair()?;
            let interior: Vec<f64> = tr.cfg.t_grid.iter().copied().filter(|t| *t > 0.0 && *t < 1.0).collect();
            let measure = if interior.is_empty() {
                RepresentingMeasure::PowerDensity(0.5)
            } else {
                RepresentingMeasure::PowerDensity(interior[trial % interior.len()])
            };
            Ok(check_cor_integral(a.matrix(), b.matrix(), &measure)?.min())
        }
        CheckCase::ThmConcaveSec2 => {
            let (a, b) = tr.sectorial_pair()?;
            let s_grid = tr.cfg.s_grid.clone();
            min_over(s_grid.iter().flat_map(|s| ws.iter().map(move |w| (*s, *w))), |(s, w)| {
                check_concave_sec2(&a, &b, s, w)
            })
        }
        CheckCase::ThmHermiteHadamard => {
            let (a, b) = tr.sectorial_pair()?;
            let s_grid = tr.cfg.s_grid.clone();
            min_over(s_grid, |s| Ok(check_hermite_hadamard(&a, &b, s)?.min()))
        }
        CheckCase::RadiusRefine => {
            let a = random_complex(tr.rng, dim);
            let p_grid = tr.cfg.p_grid.clone();
            min_over(p_grid.iter().flat_map(|p| ws.iter().map(move |w| (*p, *w))), |(p, w)| {
                Ok(check_radius_chain(&a, p, w)?.min())
            })
        }
        CheckCase::TsallisLntConvex => {
            let x = (tr.rng.random_range(-3.0f64..=3.0)).exp();
            check_lnt_convexity(x, &interior_grid())
        }
        CheckCase::TsallisSandwich => {
            let (a, b) = tr.pd_pair();
            min_over(ws.iter(), |&w| Ok(check_tsallis_sandwich(&a, &b, w)?.min()))
        }
        CheckCase::TsallisParamConvex => {
            let (a, b) = random_loewner_pair(tr.rng, dim, 1.0);
            let pa = tr.rng.random_range(0.05..=1.0);
            let pb = tr.rng.random_range(0.05..=1.0);
            min_over(ws.iter(), |&w| check_tsallis_param_convexity(&a, &b, pa, pb, w))
        }
        CheckCase::TsallisMonotone => {
            let (a, b) = tr.pd_pair();
            check_tsallis_monotone(&a, &b, &interior_grid())
        }
    }
}
