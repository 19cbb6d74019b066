//! Gauss rules computed with the Golub–Welsch eigenvalue method.
//!
//! Jacobi rules integrate `(1 - x)^a (1 + x)^b g(x)` on `[-1, 1]` and absorb
//! algebraic endpoint singularities; Legendre is the `a = b = 0` case.

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Nodes and weights of a Gauss rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Total mass `int_{-1}^{1} (1 - x)^a (1 + x)^b dx`.
pub fn jacobi_moment(a: f64, b: f64) -> f64 {
    let ln = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
    ln.exp()
}

/// `n`-point Gauss–Jacobi rule for the weight `(1 - x)^a (1 + x)^b`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::InvalidParameter("a Gauss rule needs at least one node".into()));
    }
    if !(a > -1.0 && b > -1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("Jacobi exponents must exceed -1 (got {a}, {b})")));
    }
    // Recurrence coefficients of the monic Jacobi polynomials. The k = 0 and
    // k = 1 entries are written in closed form because the generic
    // expressions are 0/0 when a + b = 0 or a + b = -1.
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    diag[0] = (b - a) / (ab + 2.0);
    for (k, d) in diag.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        *d = (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0));
    }
    for (idx, o) in off.iter_mut().enumerate() {
        let k = (idx + 1) as f64;
        let beta = if idx == 0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * k + ab;
            4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *o = beta.sqrt();
    }
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let eig = jac.symmetric_eigen();
    let mu0 = jacobi_moment(a, b);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(GaussRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}

pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Adaptive composite Gauss–Legendre integration of a matrix-valued function
/// on `[lo, hi]`. Each panel compares the `n`- and `2n`-point rules and is
/// bisected until the difference is below `tol * max(1, ||integral||_F)`.
pub fn integrate_matrix_adaptive<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    const BASE: usize = 8;
    const MAX_DEPTH: usize = 12;
    let coarse = gauss_legendre(BASE)?;
    let fine = gauss_legendre(2 * BASE)?;

    let panel = |rule: &GaussRule, a: f64, b: f64| -> Result<ComplexMatrix> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc: Option<ComplexMatrix> = None;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(mid + half * x)?.scale(w * half);
            acc = Some(match acc {
                None => v,
                Some(s) => &s + &v,
            });
        }
        Ok(acc.expect("rule has nodes"))
    };

    // Global scale estimate from the first fine evaluation.
    let whole = panel(&fine, lo, hi)?;
    let scale = whole.tolerance_scale();
    let mut stack = vec![(lo, hi, 0usize)];
    let mut total: Option<ComplexMatrix> = None;
    let mut worst = 0.0f64;
    while let Some((a, b, depth)) = stack.pop() {
        let c = panel(&coarse, a, b)?;
        let fi = panel(&fine, a, b)?;
        let err = (&fi - &c).frobenius_norm() / scale;
        let share = tol * (b - a) / (hi - lo);
        if err <= share || depth >= MAX_DEPTH {
            if err > share {
                worst = worst.max(err);
            }
            total = Some(match total {
                None => fi,
                Some(s) => &s + &fi,
            });
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    if worst > 0.0 {
        return Err(Error::QuadratureNotConverged { nodes: 2 * BASE, change: worst });
    }
    Ok(total.expect("at least one panel"))
}
