//! Weighted arithmetic, geometric and harmonic means of accretive matrices,
//! and general Kubo–Ando means obtained by integrating the weighted harmonic
//! mean against a representing probability measure on `[0, 1]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, inverse, principal_power, ComplexMatrix};
use crate::quadrature::gauss_jacobi;
use crate::sectorial::is_accretive;

/// Interpolation weight `t` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParam(f64);

impl WeightParam {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("weight t = {t} is outside [0, 1]")));
        }
        Ok(Self(t))
    }

    pub const HALF: WeightParam = WeightParam(0.5);

    pub fn t(self) -> f64 {
        self.0
    }

    /// `r = min(t, 1 - t)`.
    pub fn min_weight(self) -> f64 {
        self.0.min(1.0 - self.0)
    }

    /// `R = max(t, 1 - t)`.
    pub fn max_weight(self) -> f64 {
        self.0.max(1.0 - self.0)
    }
}

/// Starting node count for power-density quadrature.
pub const DEFAULT_NODES: usize = 64;
/// Doubling stops here; beyond this the rule is reported as not converged.
pub const MAX_NODES: usize = 1024;
/// Relative Frobenius change accepted between successive doublings.
pub const QUADRATURE_TOL: f64 = 1e-7;
/// Mass tolerance for discrete measures and the power density.
pub const MASS_TOL: f64 = 1e-10;

/// Probability measure on `[0, 1]` representing a matrix monotone function.
#[derive(Clone, Debug, PartialEq)]
pub enum RepresentingMeasure {
    PointMass(f64),
    /// `(t_i, w_i)` pairs.
    Discrete(Vec<(f64, f64)>),
    /// `(sin(a pi) / pi) t^{a-1} (1-t)^{-a} dt`, the measure of `x^a`.
    PowerDensity(f64),
}

impl RepresentingMeasure {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::PointMass(t) => {
                WeightParam::new(*t)?;
            }
            Self::Discrete(nodes) => {
                if nodes.is_empty() {
                    return Err(Error::InvalidParameter("discrete measure has no atoms".into()));
                }
                for &(t, w) in nodes {
                    WeightParam::new(t)?;
                    if !(w >= 0.0 && w.is_finite()) {
                        return Err(Error::InvalidParameter(format!("atom weight {w} is negative")));
                    }
                }
                let mass: f64 = nodes.iter().map(|n| n.1).sum();
                if (mass - 1.0).abs() > MASS_TOL {
                    return Err(Error::InvalidParameter(format!("discrete measure has mass {mass}")));
                }
            }
            Self::PowerDensity(a) => {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(Error::InvalidParameter(format!("power density exponent {a} is outside (0, 1)")));
                }
            }
        }
        Ok(())
    }

    /// Mass computed from the quadrature rule actually used for integration.
    pub fn total_mass(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.rule(DEFAULT_NODES, false)?.iter().map(|p| p.1).sum())
    }

    /// Quadrature nodes `(t_i, w_i)` with the density folded into the weights.
    ///
    /// With `split_at_half` the power density is integrated separately on
    /// `[0, 1/2]` and `[1/2, 1]`, each piece carrying only its own endpoint
    /// singularity. This keeps integrands with a kink at `t = 1/2` (anything
    /// built from `min(t, 1 - t)`) spectrally convergent on each piece.
    pub fn rule(&self, nodes: usize, split_at_half: bool) -> Result<Vec<(f64, f64)>> {
        match self {
            Self::PointMass(t) => Ok(vec![(*t, 1.0)]),
            Self::Discrete(atoms) => Ok(atoms.clone()),
            Self::PowerDensity(a) => {
                let c = (a * PI).sin() / PI;
                if !split_at_half {
                    // t = (1 + x) / 2 maps t^{a-1} (1-t)^{-a} dt onto the
                    // Jacobi weight (1-x)^{-a} (1+x)^{a-1} dx exactly.
                    let rule = gauss_jacobi(nodes, -a, a - 1.0)?;
                    return Ok(rule.nodes.iter().zip(&rule.weights).map(|(x, w)| ((1.0 + x) / 2.0, c * w)).collect());
                }
                let half = nodes.div_ceil(2).max(1);
                let left = gauss_jacobi(half, 0.0, a - 1.0)?;
                let right = gauss_jacobi(half, -a, 0.0)?;
                let mut out = Vec::with_capacity(2 * half);
                for (x, w) in left.nodes.iter().zip(&left.weights) {
                    let t = (1.0 + x) / 4.0;
                    out.push((t, c * 4f64.powf(-a) * w * (1.0 - t).powf(-a)));
                }
                for (x, w) in right.nodes.iter().zip(&right.weights) {
                    let t = (3.0 + x) / 4.0;
                    out.push((t, c * 4f64.powf(a - 1.0) * w * t.powf(a - 1.0)));
                }
                Ok(out)
            }
        }
    }

    /// `int g(t) dnu(t)` for a matrix-valued `g`. Atomic measures are summed
    /// exactly; the density doubles its node count from [`DEFAULT_NODES`]
    /// until successive results agree to [`QUADRATURE_TOL`].
    pub fn integrate<F>(&self, g: F, split_at_half: bool) -> Result<ComplexMatrix>
    where
        F: Fn(f64) -> Result<ComplexMatrix>,
    {
        self.validate()?;
        let sum = |rule: &[(f64, f64)]| -> Result<ComplexMatrix> {
            let mut acc: Option<ComplexMatrix> = None;
            for &(t, w) in rule {
                let v = g(t)?.scale(w);
                acc = Some(match acc {
                    None => v,
                    Some(s) => &s + &v,
                });
            }
            acc.ok_or_else(|| Error::InvalidParameter("empty quadrature rule".into()))
        };
        match self {
            Self::PointMass(_) | Self::Discrete(_) => sum(&self.rule(0, split_at_half)?),
            Self::PowerDensity(_) => {
                let mut n = DEFAULT_NODES;
                let mut prev = sum(&self.rule(n, split_at_half)?)?;
                let mut change = f64::INFINITY;
                while n < MAX_NODES {
                    n *= 2;
                    let next = sum(&self.rule(n, split_at_half)?)?;
                    change = next.relative_distance(&prev);
                    if change <= QUADRATURE_TOL {
                        return Ok(next);
                    }
                    prev = next;
                }
                Err(Error::QuadratureNotConverged { nodes: n, change })
            }
        }
    }
}

/// The three interpolational paths `nabla_t`, `#_t`, `!_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathFamily {
    Arithmetic,
    Geometric,
    Harmonic,
}

impl PathFamily {
    pub const ALL: [PathFamily; 3] = [Self::Arithmetic, Self::Geometric, Self::Harmonic];

    pub fn apply(self, a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ComplexMatrix> {
        match self {
            Self::Arithmetic => arith_mean(a, b, w),
            Self::Geometric => geom_mean(a, b, w),
            Self::Harmonic => harm_mean(a, b, w),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Arithmetic => "arith",
            Self::Geometric => "geom",
            Self::Harmonic => "harm",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Measure(RepresentingMeasure),
}

impl From<PathFamily> for MeanKind {
    fn from(p: PathFamily) -> Self {
        match p {
            PathFamily::Arithmetic => Self::Arithmetic,
            PathFamily::Geometric => Self::Geometric,
            PathFamily::Harmonic => Self::Harmonic,
        }
    }
}

fn require_accretive(a: &ComplexMatrix) -> Result<()> {
    let acc = is_accretive(a);
    if !acc.accretive {
        return Err(Error::NotAccretive { margin: acc.margin });
    }
    Ok(())
}

/// `(1 - t) A + t B`.
pub fn arith_mean(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ComplexMatrix> {
    ensure_same_dim(a, b)?;
    let t = w.t();
    if t == 0.0 {
        Ok(a.clone())
    } else if t == 1.0 {
        Ok(b.clone())
    } else {
        ComplexMatrix::lincomb(1.0 - t, a, t, b)
    }
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}` with principal powers.
pub fn geom_mean(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ComplexMatrix> {
    ensure_same_dim(a, b)?;
    require_accretive(a)?;
    require_accretive(b)?;
    let t = w.t();
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let root = principal_power(a, 0.5)?;
    let inv_root = inverse(&root)?;
    let inner = &(&inv_root * b) * &inv_root;
    let powered = principal_power(&inner, t)?;
    Ok(&(&root * &powered) * &root)
}

/// `((1 - t) A^{-1} + t B^{-1})^{-1}`.
pub fn harm_mean(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ComplexMatrix> {
    ensure_same_dim(a, b)?;
    require_accretive(a)?;
    require_accretive(b)?;
    let t = w.t();
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let s = ComplexMatrix::lincomb(1.0 - t, &inverse(a)?, t, &inverse(b)?)?;
    inverse(&s)
}

/// `int A !_t B dnu(t)`.
pub fn mean_from_measure(a: &ComplexMatrix, b: &ComplexMatrix, m: &RepresentingMeasure) -> Result<ComplexMatrix> {
    ensure_same_dim(a, b)?;
    require_accretive(a)?;
    require_accretive(b)?;
    m.integrate(|t| harm_mean(a, b, WeightParam::new(t)?), false)
}

/// Dispatch on [`MeanKind`]; the measure variant ignores `w`.
pub fn mean(kind: &MeanKind, a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ComplexMatrix> {
    match kind {
        MeanKind::Arithmetic => arith_mean(a, b, w),
        MeanKind::Geometric => geom_mean(a, b, w),
        MeanKind::Harmonic => harm_mean(a, b, w),
        MeanKind::Measure(m) => mean_from_measure(a, b, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn w(t: f64) -> WeightParam {
        WeightParam::new(t).unwrap()
    }

    fn d(x: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(x)
    }

    fn sample_accretive() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            &[C64::new(2.0, 0.5), C64::new(0.3, -0.2)],
            &[C64::new(-0.1, 0.4), C64::new(1.5, -0.3)],
        ])
        .unwrap()
    }

    #[test]
    fn weight_param_sides() {
        let p = w(0.3);
        assert_eq!(p.min_weight(), 0.3);
        assert_eq!(p.max_weight(), 0.7);
        assert_eq!(p.min_weight() + p.max_weight(), 1.0);
        assert!(WeightParam::new(1.5).is_err());
        assert!(WeightParam::new(f64::NAN).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let a = sample_accretive();
        for t in [0.0, 0.3, 1.0] {
            assert!(arith_mean(&a, &a, w(t)).unwrap().relative_distance(&a) < 1e-15);
        }
        let b = d(&[5.0, 6.0]);
        assert_eq!(arith_mean(&a, &b, w(0.0)).unwrap(), a);
        assert_eq!(arith_mean(&a, &b, w(1.0)).unwrap(), b);
        assert!(arith_mean(&d(&[2.0]), &d(&[6.0]), w(0.5)).unwrap().relative_distance(&d(&[4.0])) < 1e-15);
        assert!(matches!(arith_mean(&d(&[1.0]), &b, w(0.5)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn geometric_examples() {
        assert!(geom_mean(&d(&[4.0]), &d(&[9.0]), w(0.5)).unwrap().relative_distance(&d(&[6.0])) < 1e-14);
        let a = sample_accretive();
        for t in [0.0, 0.2, 0.5, 1.0] {
            assert!(geom_mean(&a, &a, w(t)).unwrap().relative_distance(&a) < 1e-12);
        }
        // sqrt((1+i)(2+2i)) = sqrt(4i) = sqrt(2)(1+i) on the principal branch.
        let a1 = ComplexMatrix::from_rows(&[&[C64::new(1.0, 1.0)]]).unwrap();
        let b1 = ComplexMatrix::from_rows(&[&[C64::new(2.0, 2.0)]]).unwrap();
        let oracle = (C64::new(1.0, 1.0) * C64::new(2.0, 2.0)).sqrt();
        let g = geom_mean(&a1, &b1, w(0.5)).unwrap();
        assert!((g.get(0, 0) - oracle).norm() < 1e-14);
        assert!((oracle - C64::new(2f64.sqrt(), 2f64.sqrt())).norm() < 1e-14);
        // Commuting positive input.
        let g = geom_mean(&d(&[2.0, 0.5]), &d(&[3.0, 7.0]), w(0.3)).unwrap();
        let expected = d(&[2f64.powf(0.7) * 3f64.powf(0.3), 0.5f64.powf(0.7) * 7f64.powf(0.3)]);
        assert!(g.relative_distance(&expected) < 1e-9);
    }

    #[test]
    fn harmonic_examples() {
        assert!(harm_mean(&d(&[2.0]), &d(&[6.0]), w(0.5)).unwrap().relative_distance(&d(&[3.0])) < 1e-15);
        let a = sample_accretive();
        let b = d(&[1.0, 2.0]);
        assert_eq!(harm_mean(&a, &b, w(0.0)).unwrap(), a);
        assert!(harm_mean(&a, &a, w(0.4)).unwrap().relative_distance(&a) < 1e-13);
    }

    #[test]
    fn non_accretive_input_is_rejected() {
        let bad = ComplexMatrix::from_real_rows(&[&[1.0, 10.0], &[0.0, 1.0]]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(matches!(geom_mean(&bad, &id, w(0.5)), Err(Error::NotAccretive { .. })));
        assert!(matches!(harm_mean(&id, &bad, w(0.5)), Err(Error::NotAccretive { .. })));
        assert!(matches!(
            mean_from_measure(&bad, &id, &RepresentingMeasure::PointMass(0.5)),
            Err(Error::NotAccretive { .. })
        ));
    }

    #[test]
    fn scalar_power_identity_holds_before_wiring() {
        // x^a = int (x / ((1-t) x + t)) dnu_a(t): the scalar side of the
        // power-density representation.
        for a in [0.2, 0.5, 0.8] {
            let m = RepresentingMeasure::PowerDensity(a);
            for x in [0.1, 0.7, 1.0, 3.0, 10.0] {
                let rule = m.rule(256, false).unwrap();
                let got: f64 = rule.iter().map(|&(t, wt)| wt * x / ((1.0 - t) * x + t)).sum();
                assert!((got - f64::powf(x, a)).abs() < 1e-9, "a={a} x={x} got={got}");
            }
        }
    }

    #[test]
    fn power_density_mass_is_one() {
        for a in [0.1, 0.2, 0.5, 0.8, 0.95] {
            let m = RepresentingMeasure::PowerDensity(a);
            assert!((m.total_mass().unwrap() - 1.0).abs() <= MASS_TOL);
            let split: f64 = m.rule(64, true).unwrap().iter().map(|p| p.1).sum();
            assert!((split - 1.0).abs() <= MASS_TOL);
        }
        assert!(RepresentingMeasure::PowerDensity(1.0).validate().is_err());
        assert!(RepresentingMeasure::Discrete(vec![(0.2, 0.5)]).validate().is_err());
        assert!(RepresentingMeasure::Discrete(vec![(0.2, 1.5), (0.4, -0.5)]).validate().is_err());
    }

    #[test]
    fn measure_examples() {
        let a = sample_accretive();
        let b = ComplexMatrix::from_rows(&[
            &[C64::new(1.0, -0.2), C64::new(0.0, 0.1)],
            &[C64::new(0.2, 0.0), C64::new(3.0, 0.4)],
        ])
        .unwrap();
        let pm = mean_from_measure(&a, &b, &RepresentingMeasure::PointMass(0.3)).unwrap();
        assert_eq!(pm, harm_mean(&a, &b, w(0.3)).unwrap());

        let dm = mean_from_measure(&a, &b, &RepresentingMeasure::Discrete(vec![(0.0, 0.5), (1.0, 0.5)])).unwrap();
        assert!(dm.relative_distance(&arith_mean(&a, &b, WeightParam::HALF).unwrap()) < 1e-15);

        let g = mean_from_measure(&d(&[4.0]), &d(&[9.0]), &RepresentingMeasure::PowerDensity(0.5)).unwrap();
        assert!(g.relative_distance(&d(&[6.0])) < 1e-6);

        let kind = MeanKind::Measure(RepresentingMeasure::PowerDensity(0.3));
        let (pa, pb) = ([0.2, 1.0, 4.0], [0.9, 0.3, 4.0]);
        let got = mean(&kind, &d(&pa), &d(&pb), WeightParam::HALF).unwrap();
        let oracle: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x.powf(0.7) * y.powf(0.3)).collect();
        assert!(got.relative_distance(&d(&oracle)) < 1e-6);
    }

    #[test]
    fn dispatch_examples() {
        let (a, b) = (d(&[4.0, 1.0]), d(&[9.0, 3.0]));
        let am = mean(&MeanKind::Arithmetic, &a, &b, WeightParam::HALF).unwrap();
        assert!(am.relative_distance(&d(&[6.5, 2.0])) < 1e-15);
        let gm = mean(&MeanKind::Geometric, &d(&[4.0]), &d(&[9.0]), WeightParam::HALF).unwrap();
        assert!(gm.relative_distance(&d(&[6.0])) < 1e-14);
        let hm = mean(&MeanKind::Harmonic, &a, &b, WeightParam::HALF).unwrap();
        assert!(hm.relative_distance(&d(&[72.0 / 13.0, 1.5])) < 1e-14);
    }
}
