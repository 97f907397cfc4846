//! Kernel functions and Gram matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::Features;
use crate::error::{ensure_dims, Error, Result};

/// Kernel choice. The Gaussian width enters as `exp(-‖x - y‖² / σ²)`,
/// with `σ²` (not `2σ²`) in the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    Linear,
    Gaussian { sigma: f64 },
}

impl KernelSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let k = KernelSpec::Gaussian { sigma };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Gaussian { sigma } if sigma > 0.0 && sigma.is_finite() => Ok(()),
            KernelSpec::Gaussian { sigma } => Err(Error::InvalidParameter(format!(
                "gaussian sigma must be positive, got {sigma}"
            ))),
        }
    }

    pub fn sigma(&self) -> Option<f64> {
        match *self {
            KernelSpec::Linear => None,
            KernelSpec::Gaussian { sigma } => Some(sigma),
        }
    }

    /// Unchecked evaluation for slices already known to have equal length.
    #[inline]
    pub(crate) fn apply(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => x.iter().zip(y).map(|(a, b)| a * b).sum(),
            KernelSpec::Gaussian { sigma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-d2 / (sigma * sigma)).exp()
            }
        }
    }
}

pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    ensure_dims(x.len(), y.len())?;
    Ok(spec.apply(x, y))
}

/// `K[i, j] = k(x_i, y_j)` for the rows of `x` and `y`.
pub fn gram_matrix(spec: &KernelSpec, x: &Features, y: &Features) -> Result<DMatrix<f64>> {
    ensure_dims(x.n_cols(), y.n_cols())?;
    let mut k = DMatrix::zeros(x.n_rows(), y.n_rows());
    for j in 0..y.n_rows() {
        let yj = y.row(j);
        for i in 0..x.n_rows() {
            k[(i, j)] = spec.apply(x.row(i), yj);
        }
    }
    Ok(k)
}

/// Gram matrix of a sample set with itself. Only the upper triangle is
/// evaluated, so the result is exactly symmetric.
pub fn gram_symmetric(spec: &KernelSpec, x: &Features) -> DMatrix<f64> {
    let n = x.n_rows();
    let mut k = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let v = spec.apply(x.row(i), x.row(j));
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feats(rows: &[&[f64]]) -> Features {
        Features::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn gaussian_point_values() {
        let g = KernelSpec::gaussian(1.0).unwrap();
        assert_eq!(kernel_eval(&g, &[0.3, 0.7], &[0.3, 0.7]).unwrap(), 1.0);
        let v = kernel_eval(&g, &[0.0], &[1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.36788).abs() < 1e-5);

        let wide = KernelSpec::gaussian(1e6).unwrap();
        let v = kernel_eval(&wide, &[0.0, 1.0, 0.5], &[1.0, 0.0, 0.2]).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn linear_is_dot_product() {
        let v = kernel_eval(&KernelSpec::Linear, &[1.0, 2.0], &[3.0, -1.0]).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = kernel_eval(&KernelSpec::Linear, &[1.0], &[1.0, 2.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                got: 2
            }
        ));
        let a = feats(&[&[1.0, 2.0]]);
        let b = feats(&[&[1.0]]);
        assert!(gram_matrix(&KernelSpec::Linear, &a, &b).is_err());
    }

    #[test]
    fn invalid_sigma_rejected() {
        assert!(KernelSpec::gaussian(0.0).is_err());
        assert!(KernelSpec::gaussian(-1.0).is_err());
        assert!(KernelSpec::gaussian(f64::NAN).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = KernelSpec::gaussian(0.7).unwrap();
        let one = feats(&[&[0.2, 0.9]]);
        assert_eq!(
            gram_matrix(&g, &one, &one).unwrap(),
            DMatrix::from_element(1, 1, 1.0)
        );

        let eye = feats(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(
            gram_matrix(&KernelSpec::Linear, &eye, &eye).unwrap(),
            DMatrix::identity(2, 2)
        );

        let three = feats(&[&[0.1, 0.4], &[0.8, 0.3], &[0.5, 0.5]]);
        let k = gram_matrix(&g, &three, &three).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let direct = kernel_eval(&g, three.row(i), three.row(j)).unwrap();
                assert_eq!(k[(i, j)], direct);
                assert!((k[(i, j)] - k[(j, i)]).abs() <= 1e-12);
            }
        }
        assert_eq!(gram_symmetric(&g, &three), k);
    }
}
