//! Dense complex linear algebra used by every other module.
//!
//! [`ComplexMatrix`] is the carrier for all operands. Hermitian results are
//! wrapped in [`HermitianMatrix`], which guarantees a real spectrum and gives
//! access to the Loewner-order primitives (extreme eigenvalues, spectral
//! mapping).
//!
//! Matrix functions are evaluated from the complex Schur form with the
//! Parlett recurrence on the triangular factor. Hermitian arguments take the
//! unitary-diagonalization path instead, which is the same Schur form with a
//! diagonal triangular factor.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest admissible distance between an eigenvalue and the cut (-inf, 0].
pub const CUT_TOL: f64 = 1e-12;
/// Diagonal gap (relative to `max(1, ||T||_F)`) below which Parlett switches
/// to the perturbed recurrence.
pub const PARLETT_GAP: f64 = 1e-10;
/// Size of the diagonal perturbation used by the clustered fallback.
pub const CLUSTER_PERTURBATION: f64 = 1e-8;
/// `inverse` rejects matrices with `sigma_min < SINGULAR_RATIO * sigma_max`.
pub const SINGULAR_RATIO: f64 = 1e-12;

/// Dense square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) ", self.dim(), self.dim())?;
        f.debug_list().entries(self.0.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>())).finish()
    }
}

impl ComplexMatrix {
    /// Validates squareness and finiteness.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::Empty);
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    /// Wraps a result of internal arithmetic on already-validated operands.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    /// Builds a matrix from row-major real and (optional) imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if re.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("real part is not {n}x{n}")));
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|row| row.len() != n) {
                return Err(Error::Malformed(format!("imaginary part is not {n}x{n}")));
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im.map_or(0.0, |im| im[i][j])));
        Self::new(m)
    }

    /// Row-major complex entries.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(format!("rows do not form a {n}x{n} matrix")));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Row-major real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(format!("rows do not form a {n}x{n} matrix")));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(DMatrix::from_fn(
            diag.len(),
            diag.len(),
            |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            },
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(&self.0 * C64::new(c, 0.0))
    }

    pub fn scale_complex(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// `max(1, ||self||_F)`, the scale every relative tolerance is taken against.
    pub fn tolerance_scale(&self) -> f64 {
        self.frobenius_norm().max(1.0)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `a * self + b * other`.
    pub fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        ensure_same_dim(x, y)?;
        Ok(Self(&x.0 * C64::new(a, 0.0) + &y.0 * C64::new(b, 0.0)))
    }

    /// Relative Frobenius distance `||self - other||_F / max(1, ||other||_F)`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).norm() / other.tolerance_scale()
    }

    /// Quadratic form `<self x, x>`.
    pub fn quadratic_form(&self, x: &DVector<C64>) -> C64 {
        x.dotc(&(&self.0 * x))
    }

    /// Relative Hermitian defect `||M - M*||_F / max(1, ||M||_F)`.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm() / self.tolerance_scale()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL
    }

    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = self.dim();
        let re = (0..n).map(|i| (0..n).map(|j| self.0[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| self.0[(i, j)].im).collect()).collect();
        (re, im)
    }
}

pub(crate) fn ensure_same_dim(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    Ok(())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// A complex matrix equal to its adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianMatrix {
    /// Accepts `m` if its relative Hermitian defect is within [`HERMITIAN_TOL`];
    /// the stored matrix is exactly symmetrized.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(M + M*) / 2` for any square `M`.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        let s = (&m.0 + m.0.adjoint()) * C64::new(0.5, 0.0);
        Self(ComplexMatrix(s))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    pub fn eigen(&self) -> HermitianEigen {
        let eig = self.0 .0.clone().symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        HermitianEigen { values, vectors: ComplexMatrix(vectors) }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0 .0.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0 .0.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.0 .0.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Spectral norm, `max |lambda|`.
    pub fn norm(&self) -> f64 {
        self.0 .0.symmetric_eigenvalues().iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `f(H)` for a real function of the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let eig = self.eigen();
        let diag: Vec<C64> = eig.values.iter().map(|&l| C64::new(f(l), 0.0)).collect();
        let v = &eig.vectors.0;
        let m = v * DMatrix::from_diagonal(&DVector::from_vec(diag)) * v.adjoint();
        Self::symmetrize(&ComplexMatrix(m))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    /// `a * x + b * y`; real combinations stay Hermitian.
    pub fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        Ok(Self(ComplexMatrix::lincomb(a, &x.0, b, &y.0)?))
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;
    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

impl Add<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(a)
}

/// `(A - A*) / (2i)`.
pub fn imaginary_part(a: &ComplexMatrix) -> HermitianMatrix {
    let d = (&a.0 - a.0.adjoint()) * C64::new(0.0, -0.5);
    HermitianMatrix::symmetrize(&ComplexMatrix(d))
}

/// Complex Schur factorization `A = U T U*`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub unitary: ComplexMatrix,
    pub upper_triangular: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.upper_triangular.dim()).map(|i| self.upper_triangular.get(i, i)).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.unitary * &self.upper_triangular) * &self.unitary.adjoint()
    }
}

/// Complex Schur form. The QR iteration is capped at `100 n^2` sweeps.
pub fn schur(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let sweeps = 100 * n * n;
    let s = nalgebra::Schur::try_new(a.0.clone(), f64::EPSILON, sweeps).ok_or(Error::SchurNotConverged { sweeps })?;
    let (q, mut t) = s.unpack();
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(SpectralDecomposition { unitary: ComplexMatrix(q), upper_triangular: ComplexMatrix(t) })
}

/// A scalar function that can be lifted to matrices.
pub trait ScalarFunction {
    fn eval(&self, z: C64) -> C64;

    /// Principal-branch functions are undefined on the closed negative real
    /// axis; `matrix_function` rejects arguments with eigenvalues there.
    fn principal_branch(&self) -> bool {
        false
    }
}

impl<F: Fn(C64) -> C64> ScalarFunction for F {
    fn eval(&self, z: C64) -> C64 {
        self(z)
    }
}

/// `z^s = exp(s Log z)` on the principal branch.
#[derive(Clone, Copy, Debug)]
pub struct PrincipalPower(pub f64);

impl ScalarFunction for PrincipalPower {
    fn eval(&self, z: C64) -> C64 {
        if self.0 == 0.0 {
            return C64::new(1.0, 0.0);
        }
        (z.ln() * self.0).exp()
    }
    fn principal_branch(&self) -> bool {
        true
    }
}

/// Principal logarithm.
#[derive(Clone, Copy, Debug)]
pub struct PrincipalLog;

impl ScalarFunction for PrincipalLog {
    fn eval(&self, z: C64) -> C64 {
        z.ln()
    }
    fn principal_branch(&self) -> bool {
        true
    }
}

/// Value of a matrix function. `approximate` is set when the Parlett
/// recurrence had to fall back to a perturbed diagonal.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: ComplexMatrix,
    pub approximate: bool,
}

/// How `matrix_function` treats nearly repeated eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClusterPolicy {
    /// Perturb the triangular diagonal by `1e-8 ||X||` and flag the result.
    #[default]
    Perturb,
    /// Report [`Error::ClusteredEigenvalues`].
    Fail,
}

fn distance_to_cut(z: C64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn check_cut(eigs: impl IntoIterator<Item = C64>) -> Result<()> {
    for z in eigs {
        if distance_to_cut(z) <= CUT_TOL {
            return Err(Error::EigenvalueOnCut { eigenvalue: z });
        }
    }
    Ok(())
}

/// `f(X)` with the default cluster policy.
pub fn matrix_function<F: ScalarFunction + ?Sized>(x: &ComplexMatrix, f: &F) -> Result<Evaluated> {
    matrix_function_with(x, f, ClusterPolicy::Perturb)
}

pub fn matrix_function_with<F: ScalarFunction + ?Sized>(
    x: &ComplexMatrix,
    f: &F,
    policy: ClusterPolicy,
) -> Result<Evaluated> {
    if x.is_hermitian() {
        let h = HermitianMatrix::symmetrize(x);
        let eig = h.eigen();
        if f.principal_branch() {
            check_cut(eig.values.iter().map(|&l| C64::new(l, 0.0)))?;
        }
        let diag: Vec<C64> = eig.values.iter().map(|&l| f.eval(C64::new(l, 0.0))).collect();
        let v = &eig.vectors.0;
        let m = v * DMatrix::from_diagonal(&DVector::from_vec(diag)) * v.adjoint();
        return Ok(Evaluated { value: ComplexMatrix(m), approximate: false });
    }
    let s = schur(x)?;
    if f.principal_branch() {
        check_cut(s.eigenvalues())?;
    }
    let (ft, approximate) = parlett(&s.upper_triangular.0, f, policy)?;
    let u = &s.unitary.0;
    Ok(Evaluated { value: ComplexMatrix(u * ft * u.adjoint()), approximate })
}

/// Parlett recurrence for `f(T)` with `T` upper triangular.
fn parlett<F: ScalarFunction + ?Sized>(t: &DMatrix<C64>, f: &F, policy: ClusterPolicy) -> Result<(DMatrix<C64>, bool)> {
    let n = t.nrows();
    let scale = t.norm().max(1.0);
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            min_gap = min_gap.min((t[(j, j)] - t[(i, i)]).norm());
        }
    }
    let clustered = min_gap < PARLETT_GAP * scale;
    if clustered && policy == ClusterPolicy::Fail {
        return Err(Error::ClusteredEigenvalues { gap: min_gap });
    }

    let mut work = t.clone();
    if clustered {
        // Distinct points on a circle of radius delta separate every cluster.
        let delta = CLUSTER_PERTURBATION * scale;
        for i in 0..n {
            let phi = std::f64::consts::TAU * i as f64 / n as f64;
            work[(i, i)] += C64::from_polar(delta, phi);
        }
    }

    let mut out = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        out[(j, j)] = f.eval(work[(j, j)]);
        for i in (0..j).rev() {
            let mut s = work[(i, j)] * (out[(j, j)] - out[(i, i)]);
            for k in (i + 1)..j {
                s += work[(i, k)] * out[(k, j)] - out[(i, k)] * work[(k, j)];
            }
            out[(i, j)] = s / (work[(j, j)] - work[(i, i)]);
        }
    }
    if clustered {
        for i in 0..n {
            out[(i, i)] = f.eval(t[(i, i)]);
        }
    }
    Ok((out, clustered))
}

/// Principal power `X^s`. `s = 0` gives `I` and `s = 1` gives `X` exactly.
pub fn principal_power(x: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent {s} is not finite")));
    }
    if s == 1.0 || s == 0.0 {
        // The cut condition still applies to keep the contract uniform.
        let eigs = if x.is_hermitian() {
            HermitianMatrix::symmetrize(x).eigenvalues().into_iter().map(|l| C64::new(l, 0.0)).collect()
        } else {
            schur(x)?.eigenvalues()
        };
        check_cut(eigs)?;
        return Ok(if s == 1.0 { x.clone() } else { ComplexMatrix::identity(x.dim()) });
    }
    Ok(matrix_function(x, &PrincipalPower(s))?.value)
}

/// Principal logarithm of `X`.
pub fn principal_log(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(matrix_function(x, &PrincipalLog)?.value)
}

/// `|A| = (A* A)^{1/2}`, eigenvalues of `A* A` clamped at zero.
pub fn abs_op(a: &ComplexMatrix) -> HermitianMatrix {
    abs_power(a, 1.0)
}

/// `|A|^q = (A* A)^{q/2}` for `q > 0`.
pub fn abs_power(a: &ComplexMatrix, q: f64) -> HermitianMatrix {
    let gram = HermitianMatrix::symmetrize(&ComplexMatrix(a.0.adjoint() * &a.0));
    gram.map_spectrum(|l| l.max(0.0).powf(q / 2.0))
}

fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    a.0.singular_values().iter().copied().collect()
}

/// Largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).into_iter().fold(0.0, f64::max)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let sv = singular_values(a);
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = if max > 0.0 { min / max } else { 0.0 };
    if ratio < SINGULAR_RATIO {
        return Err(Error::Singular { ratio });
    }
    let inv = a.0.clone().lu().try_inverse().ok_or(Error::Singular { ratio })?;
    Ok(ComplexMatrix(inv))
}

/// Serialized form `{"n": .., "re": [[..]], "im": [[..]]}`; `im` defaults to zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.n {
            return Err(Error::Malformed(format!("declared n = {} but re has {} rows", self.n, self.re.len())));
        }
        ComplexMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        let (re, im) = m.to_parts();
        MatrixFile { n: m.dim(), re, im: Some(im) }
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixFile::from(self)).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        file.to_matrix()
    }
}
