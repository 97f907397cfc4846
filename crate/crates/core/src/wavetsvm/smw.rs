use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{ensure_dims, Error, Result};

/// Applies `(MMᵀ + cI)⁻¹` through the Sherman-Morrison-Woodbury form
/// `(1/c)(I - M(cI + MᵀM)⁻¹Mᵀ)`, which only factors the `p × p` matrix
/// `cI + MᵀM` for a `d × p` matrix `M`.
#[derive(Debug, Clone)]
pub struct SmwSolver {
    m: DMatrix<f64>,
    c: f64,
    inner: Cholesky<f64, Dyn>,
}

impl SmwSolver {
    pub fn new(m: DMatrix<f64>, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "SMW shift must be positive, got {c}"
            )));
        }
        let mut inner = m.tr_mul(&m);
        for i in 0..inner.nrows() {
            inner[(i, i)] += c;
        }
        let chol = Cholesky::new(inner.clone()).ok_or_else(|| {
            Error::Numeric(format!(
                "SMW inner system (cI + MᵀM, {0}×{0}) is not positive definite; {1}",
                inner.nrows(),
                condition_report(&inner)
            ))
        })?;
        Ok(SmwSolver { m, c, inner: chol })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn apply(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let t = self.m.tr_mul(rhs);
        let u = self.inner.solve(&t);
        (rhs - &self.m * u) / self.c
    }
}

/// `(MMᵀ + cI)⁻¹ rhs` for a `d × p` matrix `M` and `rhs` of length `d`.
pub fn smw_inverse_apply(m: &DMatrix<f64>, c: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    ensure_dims(m.nrows(), rhs.len())?;
    let solver = SmwSolver::new(m.clone(), c)?;
    Ok(solver
        .apply(&DVector::from_column_slice(rhs))
        .iter()
        .copied()
        .collect())
}

pub(crate) fn condition_report(a: &DMatrix<f64>) -> String {
    let eig = a.clone().symmetric_eigenvalues();
    let max = eig.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |m, &v| m.min(v.abs()));
    if min > 0.0 {
        format!("estimated condition number {:.3e}", max / min)
    } else {
        format!("matrix is singular to working precision (largest |eigenvalue| {max:.3e})")
    }
}
