use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, HermitianMatrix};

/// Signed Loewner margin `lambda_min(X - Y) / max(1, ||X|| + ||Y||)`.
///
/// Non-negative iff `X >= Y`; every matrix inequality is certified through it.
pub fn loewner_margin(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    ensure_same_dim(x, y)?;
    for m in [x, y] {
        let defect = m.hermitian_defect();
        if defect > crate::linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
    }
    let diff = HermitianMatrix::symmetrize(&(x.as_complex() - y.as_complex()));
    Ok(diff.min_eigenvalue() / (x.norm() + y.norm()).max(1.0))
}

/// Raw `lambda_min(X - Y)` without normalization.
pub fn raw_margin(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    ensure_same_dim(x, y)?;
    Ok(HermitianMatrix::symmetrize(&(x.as_complex() - y.as_complex())).min_eigenvalue())
}

/// Pair of margins for a two-sided chain `L <= M <= U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainMargins {
    /// Margin of the left link.
    pub lower: f64,
    /// Margin of the right link.
    pub upper: f64,
}

impl ChainMargins {
    pub fn min(self) -> f64 {
        self.lower.min(self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_examples() {
        let id = HermitianMatrix::identity(3);
        let zero = HermitianMatrix::from_real_diagonal(&[0.0, 0.0, 0.0]);
        assert_eq!(loewner_margin(&id, &zero).unwrap(), 1.0);
        assert_eq!(loewner_margin(&id, &id).unwrap(), 0.0);
        let x = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]);
        let y = HermitianMatrix::from_real_diagonal(&[2.0, 1.0]);
        let m = loewner_margin(&x, &y).unwrap();
        assert!((m + 0.25).abs() < 1e-15);
        assert!(loewner_margin(&x, &HermitianMatrix::identity(3)).is_err());
    }
}
