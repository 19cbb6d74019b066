//! Deformed logarithm, Tsallis relative operator entropy and relative
//! operator entropy for positive definite pairs, with the checks for their
//! convexity, sandwich and monotonicity inequalities.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::means::{geom_mean, WeightParam};
use crate::verify::{loewner_margin, ChainMargins};

/// Tsallis parameter `t` in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyParam(f64);

impl EntropyParam {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidParameter(format!("entropy parameter t = {t} is outside (0, 1]")));
        }
        Ok(Self(t))
    }

    pub fn t(self) -> f64 {
        self.0
    }
}

/// `ln_t x = (x^t - 1) / t`; `t = 0` gives `log x`.
pub fn ln_t(x: f64, t: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("ln_t needs x > 0 (got {x})")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("ln_t needs t in [0, 1] (got {t})")));
    }
    if t == 0.0 {
        return Ok(x.ln());
    }
    Ok((t * x.ln()).exp_m1() / t)
}

/// Validated Hermitian positive definite operand.
fn positive_definite(a: &ComplexMatrix) -> Result<HermitianMatrix> {
    let h = HermitianMatrix::new(a.clone())?;
    let margin = h.min_eigenvalue();
    if margin <= 0.0 {
        return Err(Error::NotPositiveDefinite { margin });
    }
    Ok(h)
}

/// `A^{1/2}`, `A^{-1/2} B A^{-1/2}` for a positive definite pair.
struct Congruence {
    root: HermitianMatrix,
    inner: HermitianMatrix,
}

impl Congruence {
    fn new(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let a = positive_definite(a)?;
        let b = positive_definite(b)?;
        let root = a.map_spectrum(f64::sqrt);
        let inv_root = a.map_spectrum(|l| l.powf(-0.5));
        let inner = HermitianMatrix::symmetrize(&(&(&*inv_root * &*b) * &*inv_root));
        Ok(Self { root, inner })
    }

    fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let mid = self.inner.map_spectrum(f);
        HermitianMatrix::symmetrize(&(&(&*self.root * &*mid) * &*self.root))
    }
}

/// `T_t(A|B) = (A #_t B - A) / t`.
pub fn tsallis(a: &ComplexMatrix, b: &ComplexMatrix, t: EntropyParam) -> Result<HermitianMatrix> {
    positive_definite(a)?;
    positive_definite(b)?;
    let g = geom_mean(a, b, WeightParam::new(t.t())?)?;
    Ok(HermitianMatrix::symmetrize(&(&g - a).scale(1.0 / t.t())))
}

/// `T_t(A|B) = A^{1/2} ln_t(A^{-1/2} B A^{-1/2}) A^{1/2}`, the second route.
pub fn tsallis_congruence_form(a: &ComplexMatrix, b: &ComplexMatrix, t: EntropyParam) -> Result<HermitianMatrix> {
    let c = Congruence::new(a, b)?;
    let t = t.t();
    Ok(c.apply(|l| (t * l.ln()).exp_m1() / t))
}

/// `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn relative_entropy(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<HermitianMatrix> {
    Ok(Congruence::new(a, b)?.apply(f64::ln))
}

/// Minimum signed midpoint margin of `t -> ln_t x` over all pairs of grid
/// points: convexity is expected for `x >= 1` and concavity for `x <= 1`,
/// so the margin is `avg - mid` or `mid - avg` respectively.
pub fn check_lnt_convexity(x: f64, grid: &[f64]) -> Result<f64> {
    let sign = if x >= 1.0 { 1.0 } else { -1.0 };
    let mut min = f64::INFINITY;
    for (i, &a) in grid.iter().enumerate() {
        for &b in &grid[i + 1..] {
            let avg = 0.5 * (ln_t(x, a)? + ln_t(x, b)?);
            let mid = ln_t(x, 0.5 * (a + b))?;
            min = min.min(sign * (avg - mid));
        }
    }
    Ok(if min.is_finite() { min } else { 0.0 })
}

/// Margin of `T_{(1-t)a + tb} <= (1-t) T_a + t T_b` when `A <= B`, or of the
/// reverse inequality when `B <= A`.
pub fn check_tsallis_param_convexity(
    a_mat: &ComplexMatrix,
    b_mat: &ComplexMatrix,
    a: f64,
    b: f64,
    w: WeightParam,
) -> Result<f64> {
    let ha = positive_definite(a_mat)?;
    let hb = positive_definite(b_mat)?;
    let slack = 1e-12 * (ha.norm() + hb.norm()).max(1.0);
    let forward = (&hb - &ha).min_eigenvalue() >= -slack;
    let reverse = (&ha - &hb).min_eigenvalue() >= -slack;
    if !forward && !reverse {
        return Err(Error::HypothesisViolated("the pair is not ordered in the Loewner sense".into()));
    }
    let pa = EntropyParam::new(a)?;
    let pb = EntropyParam::new(b)?;
    let t = w.t();
    let pm = EntropyParam::new((1.0 - t) * a + t * b)?;
    let lhs = tsallis(a_mat, b_mat, pm)?;
    let rhs = HermitianMatrix::lincomb(1.0 - t, &tsallis(a_mat, b_mat, pa)?, t, &tsallis(a_mat, b_mat, pb)?)?;
    if forward {
        loewner_margin(&rhs, &lhs)
    } else {
        loewner_margin(&lhs, &rhs)
    }
}

/// Margins of
/// `2r K <= (1-t) S(A|B) + t (B - A) - T_t(A|B) <= 2R K` with
/// `K = (B - A + S(A|B)) / 2 - 2 (A # B - A)`.
pub fn check_tsallis_sandwich(a: &ComplexMatrix, b: &ComplexMatrix, w: WeightParam) -> Result<ChainMargins> {
    let t = EntropyParam::new(w.t())?;
    let s = relative_entropy(a, b)?;
    let tt = tsallis(a, b, t)?;
    let diff = HermitianMatrix::symmetrize(&(b - a));
    let g = HermitianMatrix::symmetrize(&(&geom_mean(a, b, WeightParam::HALF)? - a));
    let k = HermitianMatrix::lincomb(0.5, &(&diff + &s), -2.0, &g)?;
    let mid = HermitianMatrix::lincomb(1.0, &HermitianMatrix::lincomb(1.0 - w.t(), &s, w.t(), &diff)?, -1.0, &tt)?;
    Ok(ChainMargins {
        lower: loewner_margin(&mid, &k.scale(2.0 * w.min_weight()))?,
        upper: loewner_margin(&k.scale(2.0 * w.max_weight()), &mid)?,
    })
}

/// Minimum over consecutive grid points `t < s` of the margin of `T_t <= T_s`.
pub fn check_tsallis_monotone(a: &ComplexMatrix, b: &ComplexMatrix, grid: &[f64]) -> Result<f64> {
    if grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidParameter("t grid must be strictly increasing".into()));
    }
    let values = grid.iter().map(|&t| tsallis(a, b, EntropyParam::new(t)?)).collect::<Result<Vec<_>>>()?;
    let mut min = f64::INFINITY;
    for pair in values.windows(2) {
        min = min.min(loewner_margin(&pair[1], &pair[0])?);
    }
    Ok(if min.is_finite() { min } else { 0.0 })
}

/// `2 (A # B - A)`, the closed form of `T_{1/2}(A|B)`.
pub fn tsallis_half_closed_form(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<HermitianMatrix> {
    positive_definite(a)?;
    positive_definite(b)?;
    let g = geom_mean(a, b, WeightParam::HALF)?;
    Ok(HermitianMatrix::symmetrize(&(&g - a).scale(2.0)))
}
