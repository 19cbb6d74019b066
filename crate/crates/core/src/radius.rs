//! Numerical radius and its upper bounds built from `|A|` and `|A*|`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{abs_op, abs_power, hermitian_part, ComplexMatrix, HermitianMatrix, C64};
use crate::means::WeightParam;
use crate::verify::ChainMargins;

/// Number of equally spaced rotations scanned before refinement.
pub const GRID_POINTS: usize = 720;
/// Golden-section search stops when the bracket is this narrow.
pub const BRACKET_WIDTH: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub omega: f64,
    /// Rotation in `[0, 2 pi)` attaining `omega = lambda_max(Re(e^{i theta} A))`.
    pub theta_star: f64,
    pub grid_points: usize,
    /// Whether golden-section refinement improved on the grid maximum.
    pub refined: bool,
}

fn rotated_top(a: &ComplexMatrix, theta: f64) -> f64 {
    hermitian_part(&a.scale_complex(C64::from_polar(1.0, theta))).max_eigenvalue()
}

/// `omega(A) = max_theta lambda_max(Re(e^{i theta} A))`, scanned on a
/// uniform grid and polished by golden-section search on the best bracket.
pub fn numerical_radius(a: &ComplexMatrix) -> RadiusResult {
    let h = TAU / GRID_POINTS as f64;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..GRID_POINTS {
        let v = rotated_top(a, k as f64 * h);
        // Strict comparison keeps ties at the smaller angle.
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let center = best_k as f64 * h;
    let (mut lo, mut hi) = (center - h, center + h);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = rotated_top(a, x1);
    let mut f2 = rotated_top(a, x2);
    while hi - lo > BRACKET_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rotated_top(a, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rotated_top(a, x1);
        }
    }
    let (theta, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let (omega, theta_star, refined) = if value > best { (value, theta, true) } else { (best, center, false) };
    RadiusResult { omega, theta_star: theta_star.rem_euclid(TAU), grid_points: GRID_POINTS, refined }
}

/// `(1/2) || |A*| + |A| ||`.
pub fn kittaneh_bound(a: &ComplexMatrix) -> f64 {
    let sum = &abs_op(&a.adjoint()) + &abs_op(a);
    0.5 * sum.norm()
}

fn check_power(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("power p = {p} must be at least 1")));
    }
    Ok(())
}

/// `|| (1-t) |A*|^{2p} + t |A|^{2p} ||^{1/(2p)}`.
pub fn power_bound(a: &ComplexMatrix, p: f64, w: WeightParam) -> Result<f64> {
    check_power(p)?;
    let t = w.t();
    let m = HermitianMatrix::lincomb(1.0 - t, &abs_power(&a.adjoint(), 2.0 * p), t, &abs_power(a, 2.0 * p))?;
    Ok(m.norm().powf(1.0 / (2.0 * p)))
}

/// Refinement of [`power_bound`]: subtracts
/// `2r ((|A|^{2p} + |A*|^{2p})/2 - ((|A|^p + |A*|^p)/2)^2)` inside the norm.
pub fn refined_bound(a: &ComplexMatrix, p: f64, w: WeightParam) -> Result<f64> {
    check_power(p)?;
    let t = w.t();
    let r = w.min_weight();
    let abs_a_2p = abs_power(a, 2.0 * p);
    let abs_adj_2p = abs_power(&a.adjoint(), 2.0 * p);
    let half_sum_p = HermitianMatrix::lincomb(0.5, &abs_power(a, p), 0.5, &abs_power(&a.adjoint(), p))?;
    let square = &*half_sum_p * &*half_sum_p;
    let mean_2p = ComplexMatrix::lincomb(0.5, &abs_a_2p, 0.5, &abs_adj_2p)?;
    let correction = &mean_2p - &square;
    let base = ComplexMatrix::lincomb(1.0 - t, &abs_adj_2p, t, &abs_a_2p)?;
    let inner = HermitianMatrix::symmetrize(&ComplexMatrix::lincomb(1.0, &base, -2.0 * r, &correction)?);
    Ok(inner.norm().powf(1.0 / (2.0 * p)))
}

/// All four quantities for one matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusBounds {
    pub omega: f64,
    pub theta_star: f64,
    pub kittaneh: f64,
    pub power: f64,
    pub refined: f64,
}

pub fn radius_with_bounds(a: &ComplexMatrix, p: f64, w: WeightParam) -> Result<RadiusBounds> {
    let r = numerical_radius(a);
    Ok(RadiusBounds {
        omega: r.omega,
        theta_star: r.theta_star,
        kittaneh: kittaneh_bound(a),
        power: power_bound(a, p, w)?,
        refined: refined_bound(a, p, w)?,
    })
}

/// Scalar chain `omega <= refined <= power`, both links normalized by
/// `max(1, power)`. `lower` is the margin of the left link.
pub fn check_radius_chain(a: &ComplexMatrix, p: f64, w: WeightParam) -> Result<ChainMargins> {
    let omega = numerical_radius(a).omega;
    let power = power_bound(a, p, w)?;
    let refined = refined_bound(a, p, w)?;
    let scale = power.max(1.0);
    Ok(ChainMargins { lower: (refined - omega) / scale, upper: (power - refined) / scale })
}
