//! One check per inequality. Every check returns signed margins: a
//! non-negative value means the inequality holds on the given input.

use nalgebra::DVector;

use super::margin::{loewner_margin, ChainMargins};
use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, hermitian_part, inverse, principal_power, ComplexMatrix, HermitianMatrix, C64};
use crate::means::{
    arith_mean, harm_mean, mean, mean_from_measure, MeanKind, PathFamily, RepresentingMeasure, WeightParam,
};
use crate::quadrature::integrate_matrix_adaptive;
use crate::sectorial::{common_alpha, is_accretive, SectorialCert};

/// Convex scalar functions used to exercise the two-sided convexity lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvexFn {
    Exp,
    Square,
    Quartic,
    NegLog,
    Reciprocal,
}

impl ConvexFn {
    pub const ALL: [ConvexFn; 5] = [Self::Exp, Self::Square, Self::Quartic, Self::NegLog, Self::Reciprocal];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Self::Exp => x.exp(),
            Self::Square => x * x,
            Self::Quartic => x.powi(4),
            Self::NegLog => -x.ln(),
            Self::Reciprocal => 1.0 / x,
        }
    }

    /// Interval the harness samples from; `NegLog` and `Reciprocal` are
    /// only convex on `(0, inf)`.
    pub fn sample_domain(self) -> (f64, f64) {
        match self {
            Self::Exp | Self::Square | Self::Quartic => (-2.0, 2.0),
            Self::NegLog | Self::Reciprocal => (0.1, 4.0),
        }
    }

    fn admits(self, x: f64) -> bool {
        match self {
            Self::NegLog | Self::Reciprocal => x > 0.0,
            _ => x.is_finite(),
        }
    }
}

/// Margins `(m21, m22)` of the two-sided convexity lemma:
///
/// `f((1-t)a + tb) + 2r (avg - f(mid)) <= (1-t) f(a) + t f(b)` and
/// `(1-t) f(a) + t f(b) <= f((1-t)a + tb) + 2R (avg - f(mid))`.
pub fn check_lemma_scalar(f: ConvexFn, a: f64, b: f64, w: WeightParam) -> Result<(f64, f64)> {
    if !f.admits(a) || !f.admits(b) {
        return Err(Error::InvalidParameter(format!("{f:?} is not convex around [{a}, {b}]")));
    }
    let t = w.t();
    let (fa, fb) = (f.eval(a), f.eval(b));
    let jensen_gap = 0.5 * (fa + fb) - f.eval(0.5 * (a + b));
    let interior = f.eval((1.0 - t) * a + t * b);
    let chord = (1.0 - t) * fa + t * fb;
    let m21 = chord - (interior + 2.0 * w.min_weight() * jensen_gap);
    let m22 = interior + 2.0 * w.max_weight() * jensen_gap - chord;
    Ok((m21, m22))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathConvexity {
    pub convexity: f64,
    /// Present for the geometric and harmonic paths, which lie below `#`.
    pub log_convexity: Option<f64>,
}

fn require_positive_definite(a: &ComplexMatrix) -> Result<HermitianMatrix> {
    let h = HermitianMatrix::new(a.clone())?;
    let margin = h.min_eigenvalue();
    if margin <= 0.0 {
        return Err(Error::NotPositiveDefinite { margin });
    }
    Ok(h)
}

fn require_accretive(a: &ComplexMatrix) -> Result<()> {
    let acc = is_accretive(a);
    if !acc.accretive {
        return Err(Error::NotAccretive { margin: acc.margin });
    }
    Ok(())
}

/// Minimum normalized interpolation margin
/// `lambda g(t_{i-1}) + (1 - lambda) g(t_{i+1}) - g(t_i)` over consecutive
/// grid triples.
fn three_point_convexity(ts: &[f64], gs: &[f64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 1..ts.len().saturating_sub(1) {
        let (t0, t1, t2) = (ts[i - 1], ts[i], ts[i + 1]);
        let lambda = (t2 - t1) / (t2 - t0);
        let chord = lambda * gs[i - 1] + (1.0 - lambda) * gs[i + 1];
        let scale = (gs[i - 1].abs() + gs[i + 1].abs()).max(1.0);
        min = min.min((chord - gs[i]) / scale);
    }
    if min.is_finite() {
        min
    } else {
        0.0
    }
}

/// Convexity (and, below `#`, log-convexity) of `t -> <(A sigma_t B) x, x>`.
pub fn check_path_convexity(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    family: PathFamily,
    x: &DVector<C64>,
    t_grid: &[f64],
) -> Result<PathConvexity> {
    require_positive_definite(a)?;
    require_positive_definite(b)?;
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: x.len() });
    }
    if t_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidParameter("t grid must be strictly increasing".into()));
    }
    let gs = t_grid
        .iter()
        .map(|&t| Ok(family.apply(a, b, WeightParam::new(t)?)?.quadratic_form(x).re))
        .collect::<Result<Vec<f64>>>()?;
    let convexity = three_point_convexity(t_grid, &gs);
    let log_convexity = match family {
        PathFamily::Arithmetic => None,
        PathFamily::Geometric | PathFamily::Harmonic => {
            let logs: Vec<f64> = gs.iter().map(|g| g.ln()).collect();
            Some(three_point_convexity(t_grid, &logs))
        }
    };
    Ok(PathConvexity { convexity, log_convexity })
}

/// Margins of the multiplicative McCarthy refinements
/// `<B^t x,x> <= (<B^{1/2}x,x> / <Bx,x>^{1/2})^{2r} <Bx,x>^t` (lower) and
/// `<Bx,x>^t <= (<Bx,x>^{1/2} / <B^{1/2}x,x>)^{2R} <B^t x,x>` (upper).
pub fn check_mccarthy(b: &ComplexMatrix, x: &DVector<C64>, w: WeightParam) -> Result<ChainMargins> {
    let h = require_positive_definite(b)?;
    if x.len() != b.dim() {
        return Err(Error::DimensionMismatch { left: b.dim(), right: x.len() });
    }
    let t = w.t();
    let q = |s: f64| h.map_spectrum(|l| l.powf(s)).quadratic_form(x).re;
    let (q1, qh, qt) = (q(1.0), q(0.5), q(t));
    let ratio = qh / q1.sqrt();
    let lower = ratio.powf(2.0 * w.min_weight()) * q1.powf(t) - qt;
    let upper = (1.0 / ratio).powf(2.0 * w.max_weight()) * qt - q1.powf(t);
    Ok(ChainMargins { lower, upper })
}

fn re(m: &ComplexMatrix) -> HermitianMatrix {
    hermitian_part(m)
}

/// `Re(A) sigma Re(B)` at weight 1/2.
fn real_part_mean(a: &ComplexMatrix, b: &ComplexMatrix, family: PathFamily) -> Result<HermitianMatrix> {
    Ok(re(&family.apply(&re(a), &re(b), WeightParam::HALF)?))
}

/// `Re(A nabla B) - (Re A) sigma (Re B)`.
fn midpoint_gap(a: &ComplexMatrix, b: &ComplexMatrix, family: PathFamily) -> Result<HermitianMatrix> {
    let am = re(&arith_mean(a, b, WeightParam::HALF)?);
    Ok(&am - &real_part_mean(a, b, family)?)
}

/// Margin of `Re(A nabla_t B) <= Re(A sigma_t B) + 2R (Re(A nabla B) - Re A sigma Re B)`.
pub fn check_thm_nabla_vs_sigma(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    family: PathFamily,
    w: WeightParam,
) -> Result<f64> {
    ensure_same_dim(a, b)?;
    require_accretive(a)?;
    require_accretive(b)?;
    let lhs = re(&arith_mean(a, b, w)?);
    let sigma_t = re(&family.apply(a, b, w)?);
    let rhs = HermitianMatrix::lincomb(1.0, &sigma_t, 2.0 * w.max_weight(), &midpoint_gap(a, b, family)?)?;
    loewner_margin(&rhs, &lhs)
}

/// Margin of
/// `Re(A sigma_t B) <= sec^2(alpha) (Re(A nabla_t B) - 2r (Re(A nabla B) - Re A sigma Re B))`.
pub fn check_thm_sec2_reverse(a: &SectorialCert, b: &SectorialCert, family: PathFamily, w: WeightParam) -> Result<f64> {
    common_alpha(a, b)?;
    let (am, bm) = (a.matrix(), b.matrix());
    let lhs = re(&family.apply(am, bm, w)?);
    let inner = HermitianMatrix::lincomb(
        1.0,
        &re(&arith_mean(am, bm, w)?),
        -2.0 * w.min_weight(),
        &midpoint_gap(am, bm, family)?,
    )?;
    loewner_margin(&inner.scale(a.sec2()), &lhs)
}

/// Margins of `2r (A nabla B - A sigma B) <= A nabla_t B - A sigma_t B <= 2R (A nabla B - A sigma B)`
/// for a positive definite pair.
pub fn check_remark_sandwich(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    family: PathFamily,
    w: WeightParam,
) -> Result<ChainMargins> {
    require_positive_definite(a)?;
    require_positive_definite(b)?;
    let gap_t = HermitianMatrix::symmetrize(&(&arith_mean(a, b, w)? - &family.apply(a, b, w)?));
    let gap =
        HermitianMatrix::symmetrize(&(&arith_mean(a, b, WeightParam::HALF)? - &family.apply(a, b, WeightParam::HALF)?));
    Ok(ChainMargins {
        lower: loewner_margin(&gap_t, &gap.scale(2.0 * w.min_weight()))?,
        upper: loewner_margin(&gap.scale(2.0 * w.max_weight()), &gap_t)?,
    })
}

fn hermitian_inverse(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::symmetrize(&inverse(h)?))
}

/// `((Re A !_t Re B)^{-1} - 2r ((Re A ! Re B)^{-1} - (Re(A ! B))^{-1}))^{-1}`,
/// the middle term of the harmonic refinement.
pub fn harmonic_refined_middle(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<HermitianMatrix> {
    let (ra, rb) = (re(a), re(b));
    let ht = re(&harm_mean(&ra, &rb, w)?);
    if w.min_weight() == 0.0 {
        return Ok(ht);
    }
    let hh = re(&harm_mean(&ra, &rb, WeightParam::HALF)?);
    let re_half = re(&harm_mean(a, b, WeightParam::HALF)?);
    let correction = &hermitian_inverse(&hh)? - &hermitian_inverse(&re_half)?;
    let inner = HermitianMatrix::lincomb(1.0, &hermitian_inverse(&ht)?, -2.0 * w.min_weight(), &correction)?;
    hermitian_inverse(&inner)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicRefinement {
    /// Margin of `Re(A !_t B) >= middle`.
    pub refine: f64,
    /// Margin of `middle >= Re A !_t Re B`.
    pub baseline: f64,
    /// Margin of the unrefined `Re(A !_t B) >= Re A !_t Re B`.
    pub classical: f64,
}

pub fn check_harmonic_refine(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<HarmonicRefinement> {
    ensure_same_dim(a, b)?;
    let top = re(&harm_mean(a, b, w)?);
    let middle = harmonic_refined_middle(a, b, w)?;
    let bottom = re(&harm_mean(&re(a), &re(b), w)?);
    Ok(HarmonicRefinement {
        refine: loewner_margin(&top, &middle)?,
        baseline: loewner_margin(&middle, &bottom)?,
        classical: loewner_margin(&top, &bottom)?,
    })
}

/// Integrated harmonic refinement against a representing measure:
/// `Re(A sigma B) >= int middle(t) dnu(t) >= Re A sigma Re B`. `upper` is the
/// margin of the first link and `lower` of the second.
pub fn check_cor_integral(a: &ComplexMatrix, b: &ComplexMatrix, m: &RepresentingMeasure) -> Result<ChainMargins> {
    ensure_same_dim(a, b)?;
    require_accretive(a)?;
    require_accretive(b)?;
    let integral = m.integrate(|t| Ok(harmonic_refined_middle(a, b, WeightParam::new(t)?)?.into_complex()), true)?;
    let integral = HermitianMatrix::symmetrize(&integral);
    let top = re(&mean_from_measure(a, b, m)?);
    let bottom = re(&mean_from_measure(&re(a), &re(b), m)?);
    Ok(ChainMargins { lower: loewner_margin(&integral, &bottom)?, upper: loewner_margin(&top, &integral)? })
}

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!("exponent s = {s} is outside (0, 1]")));
    }
    Ok(())
}

fn power(x: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    principal_power(x, s)
}

/// Margin of
/// `Re(f(A) nabla_t f(B)) + 2r sec^2(alpha) (f(Re(A nabla B)) - f(Re A) nabla f(Re B)) <= sec^2(alpha) Re f(A nabla_t B)`
/// for `f(x) = x^s`.
pub fn check_concave_sec2(a: &SectorialCert, b: &SectorialCert, s: f64, w: WeightParam) -> Result<f64> {
    common_alpha(a, b)?;
    check_exponent(s)?;
    let sec2 = a.sec2();
    let (am, bm) = (a.matrix(), b.matrix());
    let (ra, rb) = (re(am), re(bm));
    let t = w.t();
    let chord = re(&ComplexMatrix::lincomb(1.0 - t, &power(am, s)?, t, &power(bm, s)?)?);
    let f_mid = re(&power(&re(&arith_mean(am, bm, WeightParam::HALF)?), s)?);
    let f_avg = re(&ComplexMatrix::lincomb(0.5, &power(&ra, s)?, 0.5, &power(&rb, s)?)?);
    let lhs = HermitianMatrix::lincomb(1.0, &chord, 2.0 * w.min_weight() * sec2, &(&f_mid - &f_avg))?;
    let rhs = re(&power(&arith_mean(am, bm, w)?, s)?).scale(sec2);
    loewner_margin(&rhs, &lhs)
}

/// Absolute tolerance (relative to the integral's scale) of the
/// Hermite–Hadamard quadrature.
pub const HERMITE_HADAMARD_QUAD_TOL: f64 = 1e-8;

/// Margins of
/// `Re((f(A) + f(B))/2) <= sec^2 int Re f((1-t)A + tB) dt <= sec^4 Re f((A+B)/2)`
/// for `f(x) = x^s`. `lower` is the left link.
pub fn check_hermite_hadamard(a: &SectorialCert, b: &SectorialCert, s: f64) -> Result<ChainMargins> {
    common_alpha(a, b)?;
    check_exponent(s)?;
    let sec2 = a.sec2();
    let (am, bm) = (a.matrix(), b.matrix());
    let left = re(&ComplexMatrix::lincomb(0.5, &power(am, s)?, 0.5, &power(bm, s)?)?);
    let integral = integrate_matrix_adaptive(
        |t| Ok(re(&power(&ComplexMatrix::lincomb(1.0 - t, am, t, bm)?, s)?).into_complex()),
        0.0,
        1.0,
        HERMITE_HADAMARD_QUAD_TOL,
    )?;
    let middle = HermitianMatrix::symmetrize(&integral).scale(sec2);
    let right = re(&power(&arith_mean(am, bm, WeightParam::HALF)?, s)?).scale(sec2 * sec2);
    Ok(ChainMargins { lower: loewner_margin(&middle, &left)?, upper: loewner_margin(&right, &middle)? })
}

/// Margin of `Re(A sigma B) >= Re A sigma Re B`.
pub fn check_baseline_real_mean(a: &ComplexMatrix, b: &ComplexMatrix, kind: &MeanKind, w: WeightParam) -> Result<f64> {
    require_accretive(a)?;
    require_accretive(b)?;
    let top = re(&mean(kind, a, b, w)?);
    let bottom = re(&mean(kind, &re(a), &re(b), w)?);
    loewner_margin(&top, &bottom)
}

/// Margin of `Re(A sigma B) <= sec^2(alpha) Re A sigma Re B`.
pub fn check_baseline_sec2(a: &SectorialCert, b: &SectorialCert, kind: &MeanKind, w: WeightParam) -> Result<f64> {
    common_alpha(a, b)?;
    let (am, bm) = (a.matrix(), b.matrix());
    let top = re(&mean(kind, am, bm, w)?);
    let bottom = re(&mean(kind, &re(am), &re(bm), w)?);
    loewner_margin(&bottom.scale(a.sec2()), &top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sectorial::{random_positive_definite, random_sectorial, random_unit_vector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(t: f64) -> WeightParam {
        WeightParam::new(t).unwrap()
    }

    fn grid(step: f64) -> Vec<f64> {
        let n = (1.0 / step).round() as usize;
        (0..=n).map(|k| k as f64 * step).collect()
    }

    fn sectorial_pair(seed: u64, n: usize, alpha: f64) -> (SectorialCert, SectorialCert) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sectorial(&mut rng, n, alpha, 1.0).unwrap();
        let b = random_sectorial(&mut rng, n, alpha, 1.0).unwrap();
        (SectorialCert::new(a, alpha).unwrap(), SectorialCert::new(b, alpha).unwrap())
    }

    fn pd_pair(seed: u64, n: usize) -> (ComplexMatrix, ComplexMatrix) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_positive_definite(&mut rng, n, 1.0), random_positive_definite(&mut rng, n, 1.0))
    }

    #[test]
    fn lemma_examples() {
        for f in ConvexFn::ALL {
            let (m21, m22) = check_lemma_scalar(f, 0.3, 1.7, w(0.5)).unwrap();
            assert!(m21.abs() < 1e-12 && m22.abs() < 1e-12, "{f:?}");
            // At the endpoints r = 0 and R = 1: (21) is an equality while
            // (22) keeps twice the Jensen gap.
            let gap = 0.5 * (f.eval(0.3) + f.eval(1.7)) - f.eval(1.0);
            for t in [0.0, 1.0] {
                let (m21, m22) = check_lemma_scalar(f, 0.3, 1.7, w(t)).unwrap();
                assert!(m21.abs() < 1e-12, "{f:?} t={t}");
                assert!((m22 - 2.0 * gap).abs() < 1e-12, "{f:?} t={t}");
            }
        }
        // f = x^2, a = 0, b = 1, t = 1/4: LHS 0.1875, RHS 0.25.
        let (m21, m22) = check_lemma_scalar(ConvexFn::Square, 0.0, 1.0, w(0.25)).unwrap();
        assert!((m21 - 0.0625).abs() < 1e-15);
        // (22): 0.0625 + 2(0.75)(0.25) - 0.25 = 0.1875.
        assert!((m22 - 0.1875).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (a, b, t) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.0..=1.0));
            let (m21, m22) = check_lemma_scalar(ConvexFn::Exp, a, b, w(t)).unwrap();
            assert!(m21 >= -1e-12 && m22 >= -1e-12);
        }
        assert!(check_lemma_scalar(ConvexFn::NegLog, -1.0, 1.0, w(0.3)).is_err());
    }

    #[test]
    fn path_convexity_examples() {
        let (a, b) = pd_pair(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_unit_vector(&mut rng, 4);
        let g = grid(0.1);
        for family in PathFamily::ALL {
            let same = check_path_convexity(&a, &a, family, &x, &g).unwrap();
            assert!(same.convexity.abs() < 1e-12);
            let r = check_path_convexity(&a, &b, family, &x, &g).unwrap();
            assert!(r.convexity >= -1e-10);
            match family {
                PathFamily::Arithmetic => {
                    assert!(r.log_convexity.is_none());
                    assert!(r.convexity.abs() < 1e-14);
                }
                _ => assert!(r.log_convexity.unwrap() >= -1e-10),
            }
        }
    }

    #[test]
    fn mccarthy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_unit_vector(&mut rng, 3);
        let m = check_mccarthy(&ComplexMatrix::identity(3), &x, w(0.3)).unwrap();
        assert!(m.lower.abs() < 1e-14 && m.upper.abs() < 1e-14);
        let b = ComplexMatrix::from_real_diagonal(&[1.0, 4.0]);
        let x2 = DVector::from_vec(vec![C64::new(0.5f64.sqrt(), 0.0), C64::new(0.5f64.sqrt(), 0.0)]);
        let m = check_mccarthy(&b, &x2, w(0.3)).unwrap();
        // <Bx,x> = 5/2, <B^{1/2}x,x> = 3/2, <B^t x,x> = (1 + 4^t)/2.
        let (q1, qh, qt) = (2.5f64, 1.5f64, (1.0 + 4f64.powf(0.3)) / 2.0);
        let lower = (qh / q1.sqrt()).powf(0.6) * q1.powf(0.3) - qt;
        let upper = (q1.sqrt() / qh).powf(1.4) * qt - q1.powf(0.3);
        assert!((m.lower - lower).abs() < 1e-14 && lower >= 0.0);
        assert!((m.upper - upper).abs() < 1e-14 && upper >= 0.0);
        for t in [0.0, 1.0] {
            assert!(check_mccarthy(&b, &x2, w(t)).unwrap().min() >= -1e-14);
        }
    }

    #[test]
    fn nabla_vs_sigma_examples() {
        let (ca, cb) = sectorial_pair(5, 4, 0.6);
        for family in PathFamily::ALL {
            let same = check_thm_nabla_vs_sigma(ca.matrix(), ca.matrix(), family, w(0.3)).unwrap();
            assert!(same.abs() < 1e-10, "{family:?} {same}");
            for t in [0.0, 0.3, 0.5, 1.0] {
                assert!(check_thm_nabla_vs_sigma(ca.matrix(), cb.matrix(), family, w(t)).unwrap() >= -1e-8);
            }
        }
        let arith = check_thm_nabla_vs_sigma(ca.matrix(), cb.matrix(), PathFamily::Arithmetic, w(0.3)).unwrap();
        assert!(arith.abs() < 1e-14);
    }

    #[test]
    fn sec2_reverse_examples() {
        let (a, _) = pd_pair(6, 3);
        let ca = SectorialCert::new(a, 0.0).unwrap();
        for t in [0.0, 0.2, 0.5, 1.0] {
            assert!(check_thm_sec2_reverse(&ca, &ca, PathFamily::Geometric, w(t)).unwrap().abs() < 1e-10);
        }
        let (ca, cb) = sectorial_pair(7, 4, 0.5);
        for family in PathFamily::ALL {
            for t in [0.0, 0.4, 1.0] {
                assert!(check_thm_sec2_reverse(&ca, &cb, family, w(t)).unwrap() >= -1e-8);
            }
        }
        let (other, _) = sectorial_pair(8, 4, 0.7);
        assert!(matches!(
            check_thm_sec2_reverse(&ca, &other, PathFamily::Geometric, w(0.3)),
            Err(Error::SectorMismatch { .. })
        ));
    }

    #[test]
    fn remark_sandwich_examples() {
        let (a, b) = pd_pair(9, 4);
        for family in PathFamily::ALL {
            let half = check_remark_sandwich(&a, &b, family, w(0.5)).unwrap();
            assert!(half.lower.abs() < 1e-12 && half.upper.abs() < 1e-12);
            let same = check_remark_sandwich(&a, &a, family, w(0.2)).unwrap();
            assert!(same.min().abs() < 1e-12);
            assert!(check_remark_sandwich(&a, &b, family, w(0.2)).unwrap().min() >= -1e-9);
        }
    }

    #[test]
    fn harmonic_refine_examples() {
        let (ca, cb) = sectorial_pair(10, 4, 0.8);
        let same = check_harmonic_refine(ca.matrix(), ca.matrix(), w(0.3)).unwrap();
        assert!(same.refine.abs() < 1e-10 && same.baseline.abs() < 1e-10);
        let (a, b) = pd_pair(11, 4);
        let herm = check_harmonic_refine(&a, &b, w(0.3)).unwrap();
        assert!(herm.refine.abs() < 1e-10 && herm.baseline.abs() < 1e-10);
        for t in [0.0, 0.1, 0.3, 0.5, 0.9, 1.0] {
            let r = check_harmonic_refine(ca.matrix(), cb.matrix(), w(t)).unwrap();
            assert!(r.refine >= -1e-8 && r.baseline >= -1e-8, "t={t} {r:?}");
            assert!(r.classical >= r.refine - 1e-10);
        }
    }

    #[test]
    fn cor_integral_examples() {
        let (ca, cb) = sectorial_pair(12, 3, 0.4);
        let (a, b) = (ca.matrix(), cb.matrix());
        let pm = check_cor_integral(a, b, &RepresentingMeasure::PointMass(0.3)).unwrap();
        let direct = check_harmonic_refine(a, b, w(0.3)).unwrap();
        assert!((pm.upper - direct.refine).abs() < 1e-14);
        assert!((pm.lower - direct.baseline).abs() < 1e-14);

        let same = check_cor_integral(a, a, &RepresentingMeasure::PowerDensity(0.5)).unwrap();
        assert!(same.min().abs() < 1e-6);
        let m = check_cor_integral(a, b, &RepresentingMeasure::PowerDensity(0.5)).unwrap();
        assert!(m.min() >= -1e-6, "{m:?}");
    }

    #[test]
    fn concave_sec2_examples() {
        let (ca, cb) = sectorial_pair(13, 4, 0.5);
        // s = 1: the margin is (sec^2 - 1) Re(A nabla_t B), normalized.
        let m = check_concave_sec2(&ca, &cb, 1.0, w(0.3)).unwrap();
        let base = re(&arith_mean(ca.matrix(), cb.matrix(), w(0.3)).unwrap());
        let (rhs, lhs) = (base.scale(ca.sec2()), base.clone());
        let expected = (ca.sec2() - 1.0) * base.min_eigenvalue() / (rhs.norm() + lhs.norm()).max(1.0);
        assert!((m - expected).abs() < 1e-12);

        let (a, _) = pd_pair(14, 3);
        let c0 = SectorialCert::new(a, 0.0).unwrap();
        for s in [0.25, 0.5, 1.0] {
            assert!(check_concave_sec2(&c0, &c0, s, w(0.3)).unwrap().abs() < 1e-10);
        }
        assert!(check_concave_sec2(&ca, &cb, 0.5, w(0.3)).unwrap() >= -1e-8);
        assert!(check_concave_sec2(&ca, &cb, 1.5, w(0.3)).is_err());
    }

    #[test]
    fn hermite_hadamard_examples() {
        let (a, b) = pd_pair(15, 3);
        let (c0a, c0b) = (SectorialCert::new(a, 0.0).unwrap(), SectorialCert::new(b, 0.0).unwrap());
        let m = check_hermite_hadamard(&c0a, &c0b, 1.0).unwrap();
        assert!(m.lower.abs() < 1e-10 && m.upper.abs() < 1e-10);
        let same = check_hermite_hadamard(&c0a, &c0a, 0.5).unwrap();
        assert!(same.min().abs() < 1e-10);
        let (ca, cb) = sectorial_pair(16, 4, 0.6);
        assert!(check_hermite_hadamard(&ca, &cb, 0.5).unwrap().min() >= -1e-7);
    }

    #[test]
    fn baseline_examples() {
        let (ca, cb) = sectorial_pair(17, 4, 0.9);
        for kind in [MeanKind::Geometric, MeanKind::Harmonic, MeanKind::Measure(RepresentingMeasure::PowerDensity(0.3))]
        {
            assert!(check_baseline_real_mean(ca.matrix(), cb.matrix(), &kind, w(0.4)).unwrap() >= -1e-8);
            assert!(check_baseline_sec2(&ca, &cb, &kind, w(0.4)).unwrap() >= -1e-8);
        }
    }
}
