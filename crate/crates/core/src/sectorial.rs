//! Accretive and sectorial matrices: predicates, the sectorial index, sector
//! certificates, and seeded generators for the matrix classes the
//! verification harness draws from.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, imaginary_part, op_norm, ComplexMatrix, HermitianMatrix, C64};

/// Result of the accretivity test; `margin` is `lambda_min(Re A)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accretivity {
    pub accretive: bool,
    pub margin: f64,
}

pub fn is_accretive(a: &ComplexMatrix) -> Accretivity {
    let margin = hermitian_part(a).min_eigenvalue();
    Accretivity { accretive: margin > 0.0, margin }
}

/// Least `alpha` with `W(A)` inside the sector `|Im z| <= tan(alpha) Re z`.
///
/// With `H = Re A` and `K = Im A`, `W(A)` lies in the sector iff
/// `tan(alpha) H +- K >= 0`, i.e. iff `tan(alpha)` bounds the spectral radius
/// of `H^{-1/2} K H^{-1/2}`.
pub fn sectorial_index(a: &ComplexMatrix) -> Result<f64> {
    let h = hermitian_part(a);
    let acc = h.min_eigenvalue();
    if acc <= 0.0 {
        return Err(Error::NotAccretive { margin: acc });
    }
    let k = imaginary_part(a);
    let h_inv_root = h.map_spectrum(|l| l.powf(-0.5));
    let pencil = HermitianMatrix::symmetrize(&(&(&*h_inv_root * &*k) * &*h_inv_root));
    Ok(pencil.norm().atan())
}

/// A matrix together with a verified sector half-angle.
#[derive(Clone, Debug)]
pub struct SectorialCert {
    matrix: ComplexMatrix,
    alpha: f64,
}

impl SectorialCert {
    /// Certifies `W(matrix)` inside `S_alpha`: `Re(matrix) > 0` and
    /// `tan(alpha) Re(matrix) +- Im(matrix) >= 0` up to `1e-10 ||matrix||`.
    pub fn new(matrix: ComplexMatrix, alpha: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("sector half-angle {alpha} is outside [0, pi/2)")));
        }
        let h = hermitian_part(&matrix);
        let acc = h.min_eigenvalue();
        if acc <= 0.0 {
            return Err(Error::NotAccretive { margin: acc });
        }
        let k = imaginary_part(&matrix);
        let slack = 1e-10 * op_norm(&matrix);
        let scaled = h.scale(alpha.tan());
        for sign in [1.0, -1.0] {
            let m = HermitianMatrix::lincomb(1.0, &scaled, sign, &k)?;
            let margin = m.min_eigenvalue();
            if margin < -slack {
                return Err(Error::InvalidCertificate(format!(
                    "tan(alpha) Re A {} Im A has eigenvalue {margin:e}",
                    if sign > 0.0 { "+" } else { "-" }
                )));
            }
        }
        Ok(Self { matrix, alpha })
    }

    /// Certificate with the least admissible angle.
    pub fn tight(matrix: ComplexMatrix) -> Result<Self> {
        let alpha = sectorial_index(&matrix)?;
        Self::new(matrix, alpha)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `sec^2(alpha)`.
    pub fn sec2(&self) -> f64 {
        1.0 / self.alpha.cos().powi(2)
    }
}

/// Shared half-angle of two certificates.
pub fn common_alpha(a: &SectorialCert, b: &SectorialCert) -> Result<f64> {
    if a.alpha != b.alpha {
        return Err(Error::SectorMismatch { left: a.alpha, right: b.alpha });
    }
    Ok(a.alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum MatrixClass {
    PositiveDefinite,
    Accretive,
    Sectorial {
        alpha: f64,
    },
    /// `(A, A + Q)` with `Q >= 0`.
    LoewnerPair,
    PositivePair,
}

impl MatrixClass {
    pub fn is_pair(self) -> bool {
        matches!(self, Self::LoewnerPair | Self::PositivePair)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub class: MatrixClass,
    pub seed: u64,
    pub scale: f64,
}

impl EnsembleSpec {
    pub fn new(dim: usize, class: MatrixClass, seed: u64) -> Self {
        Self { dim, class, seed, scale: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.dim) {
            return Err(Error::InvalidParameter(format!("dimension {} is outside [1, 16]", self.dim)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale {} must be positive", self.scale)));
        }
        if let MatrixClass::Sectorial { alpha } = self.class {
            if !(alpha > 0.0 && alpha < FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!("sector half-angle {alpha} is outside (0, pi/2)")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Sample {
    Single(ComplexMatrix),
    Pair(ComplexMatrix, ComplexMatrix),
}

/// Deterministic draw from the ensemble described by `spec`.
pub fn generate(spec: &EnsembleSpec) -> Result<Sample> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    sample_class(&mut rng, spec.class, spec.dim, spec.scale)
}

pub fn sample_class<R: Rng + ?Sized>(rng: &mut R, class: MatrixClass, n: usize, scale: f64) -> Result<Sample> {
    Ok(match class {
        MatrixClass::PositiveDefinite => Sample::Single(random_positive_definite(rng, n, scale)),
        MatrixClass::Accretive => Sample::Single(random_accretive(rng, n, scale)),
        MatrixClass::Sectorial { alpha } => Sample::Single(random_sectorial(rng, n, alpha, scale)?),
        MatrixClass::LoewnerPair => {
            let (a, b) = random_loewner_pair(rng, n, scale);
            Sample::Pair(a, b)
        }
        MatrixClass::PositivePair => {
            Sample::Pair(random_positive_definite(rng, n, scale), random_positive_definite(rng, n, scale))
        }
    })
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Entries i.i.d. standard complex normal.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| C64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2);
    ComplexMatrix::wrap(m)
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    hermitian_part(&random_complex(rng, n))
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_complex(rng, n).into_matrix();
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::wrap(q)
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| C64::new(normal(rng), normal(rng)));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Hermitian with spectrum drawn uniformly from `[0.1, 1] * scale`.
pub fn random_positive_definite<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let diag: Vec<f64> = (0..n).map(|_| scale * rng.random_range(0.1..=1.0)).collect();
    let m = &(&u * &ComplexMatrix::from_real_diagonal(&diag)) * &u.adjoint();
    HermitianMatrix::symmetrize(&m).into_complex()
}

/// `H + iK` with `H` positive definite and `||K|| <= ||H||`.
pub fn random_accretive<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let h = random_positive_definite(rng, n, scale);
    let k = random_hermitian(rng, n);
    let target = rng.random_range(0.0..=1.0) * op_norm(&h);
    let k_norm = k.norm();
    let k = if k_norm > 0.0 { k.scale(target / k_norm) } else { k };
    &h + &k.into_complex().scale_complex(C64::new(0.0, 1.0))
}

/// `H + iK` whose sectorial index is `atan(0.95 tan(alpha))`, strictly
/// inside the sector `S_alpha`.
pub fn random_sectorial<R: Rng + ?Sized>(rng: &mut R, n: usize, alpha: f64, scale: f64) -> Result<ComplexMatrix> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!("sector half-angle {alpha} is outside (0, pi/2)")));
    }
    let h = HermitianMatrix::symmetrize(&random_positive_definite(rng, n, scale));
    let k = random_hermitian(rng, n);
    let h_inv_root = h.map_spectrum(|l| l.powf(-0.5));
    let pencil = HermitianMatrix::symmetrize(&(&(&*h_inv_root * &*k) * &*h_inv_root));
    let rho = pencil.norm();
    let k = if rho > 0.0 { k.scale(0.95 * alpha.tan() / rho) } else { k };
    Ok(&*h + &k.into_complex().scale_complex(C64::new(0.0, 1.0)))
}

/// `(A, A + Q)` with `A` positive definite and `Q` positive semidefinite.
pub fn random_loewner_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> (ComplexMatrix, ComplexMatrix) {
    let a = random_positive_definite(rng, n, scale);
    let g = random_complex(rng, n);
    let q = HermitianMatrix::symmetrize(&(&g * &g.adjoint()));
    let q = q.scale(scale * rng.random_range(0.1..=1.0) / q.norm().max(f64::MIN_POSITIVE));
    let b = &a + q.as_complex();
    (a, HermitianMatrix::symmetrize(&b).into_complex())
}
