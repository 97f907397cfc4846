//! Wave-TSVM: two nonparallel planes, each close to one class and pushed
//! away from the other through the wave loss.
//!
//! Each plane solves its own fixed-point equation, starting from zero. The
//! positive plane iterates `w ← -(GGᵀ + C₁I)⁻¹ C₂ H s(1 + Hᵀw)` and the
//! negative plane `w ← (HHᵀ + C₃I)⁻¹ C₄ G s(1 - Gᵀw)`, where `G` and `H`
//! hold the augmented positive and negative samples as columns and `s` is
//! the wave-loss derivative applied entrywise. The kernel variant replaces
//! the samples by kernel columns against the full training set.
//!
//! No damping is applied. A two-cycle in the iterates stops the plane early
//! and is reported as non-convergence.

mod smw;
mod train;

pub use smw::{smw_inverse_apply, SmwSolver};
pub use train::{train_twin_kernel, train_twin_linear};

use serde::{Deserialize, Serialize};

use crate::data::Features;
use crate::error::{ensure_dims, Error, Result};
use crate::kernels::{gram_matrix, KernelSpec};
use crate::losses::WaveParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwinConfig {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub loss: WaveParams,
    pub eta: f64,
    pub max_iter: usize,
    pub kernel: Option<KernelSpec>,
}

impl Default for TwinConfig {
    fn default() -> Self {
        TwinConfig {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            loss: WaveParams {
                a: 1.0,
                lambda: 1.0,
            },
            eta: 1e-5,
            max_iter: 50,
            kernel: None,
        }
    }
}

impl TwinConfig {
    /// Symmetric setting `C₁ = C₃`, `C₂ = C₄`.
    pub fn symmetric(c1: f64, c2: f64, loss: WaveParams) -> Self {
        TwinConfig {
            c1,
            c2,
            c3: c1,
            c4: c2,
            loss,
            ..TwinConfig::default()
        }
    }

    pub fn with_kernel(mut self, kernel: KernelSpec) -> Self {
        self.kernel = Some(kernel);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.loss.validate()?;
        for (name, c) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
        ] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {c}"
                )));
            }
        }
        if !(self.eta > 0.0) {
            return Err(Error::InvalidParameter("eta must be positive".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if let Some(k) = &self.kernel {
            k.validate()?;
        }
        Ok(())
    }
}

/// How one plane's iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlaneStatus {
    pub iterations: usize,
    pub converged: bool,
    pub oscillating: bool,
    /// Max-norm of the last update.
    pub final_change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwinParams {
    pub a: f64,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub sigma: Option<f64>,
    pub eta: f64,
    pub max_iter: usize,
}

impl TwinParams {
    pub(crate) fn from_config(config: &TwinConfig, sigma: Option<f64>) -> Self {
        TwinParams {
            a: config.loss.a,
            lambda: config.loss.lambda,
            c1: config.c1,
            c2: config.c2,
            c3: config.c3,
            c4: config.c4,
            sigma,
            eta: config.eta,
            max_iter: config.max_iter,
        }
    }
}

/// A trained twin model. Plane vectors end with the bias. For kernel models
/// the planes hold one coefficient per training row plus the bias, and
/// `training_rows` keeps those rows with positives first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwinModel {
    pub kernel: KernelSpec,
    pub params: TwinParams,
    pub positive_plane: Vec<f64>,
    pub negative_plane: Vec<f64>,
    pub training_rows: Option<Features>,
    /// Distance normalisers: `‖w±‖` for linear planes, `√(v±ᵀKv±)` for
    /// kernel planes.
    pub plane_norms: [f64; 2],
    pub positive_status: PlaneStatus,
    pub negative_status: PlaneStatus,
}

impl TwinModel {
    pub fn converged(&self) -> bool {
        self.positive_status.converged && self.negative_status.converged
    }

    /// Unnormalised plane scores `(f₊(x), f₋(x))` for each row.
    pub fn plane_scores(&self, x: &Features) -> Result<Vec<(f64, f64)>> {
        let w1 = &self.positive_plane;
        let w2 = &self.negative_plane;
        match &self.training_rows {
            None => {
                ensure_dims(w1.len() - 1, x.n_cols())?;
                Ok(x.rows().map(|r| (affine(w1, r), affine(w2, r))).collect())
            }
            Some(train) => {
                ensure_dims(train.n_cols(), x.n_cols())?;
                let k = gram_matrix(&self.kernel, x, train)?;
                Ok((0..x.n_rows())
                    .map(|i| {
                        let row = k.row(i);
                        let f = |v: &[f64]| {
                            row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() + v[v.len() - 1]
                        };
                        (f(w1), f(w2))
                    })
                    .collect())
            }
        }
    }
}

fn affine(w: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    w[..n].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + w[n]
}

/// Wave-loss derivative at each margin: `m(am+2)e^{am}/(1+λm²e^{am})²`,
/// zero once the exponential saturates.
pub fn s_vector(margins: &[f64], loss: &WaveParams) -> Result<Vec<f64>> {
    if margins.iter().any(|m| !m.is_finite()) {
        return Err(Error::Domain("margins must be finite".into()));
    }
    let mut out = vec![0.0; margins.len()];
    s_vector_into(margins, loss, &mut out);
    Ok(out)
}

pub(crate) fn s_vector_into(margins: &[f64], loss: &WaveParams, out: &mut [f64]) {
    for (o, &m) in out.iter_mut().zip(margins) {
        *o = loss.derivative(m);
    }
}

/// Assigns `+1` when the normalised distance to the positive plane is no
/// larger than the distance to the negative plane.
pub fn predict_twin(model: &TwinModel, x: &Features) -> Result<Vec<i8>> {
    let [n1, n2] = model.plane_norms;
    if !(n1 > 0.0 && n2 > 0.0) {
        return Err(Error::Numeric(
            "degenerate twin model: a plane has zero norm".into(),
        ));
    }
    Ok(model
        .plane_scores(x)?
        .into_iter()
        .map(|(f1, f2)| {
            if f1.abs() / n1 <= f2.abs() / n2 {
                1
            } else {
                -1
            }
        })
        .collect())
}
