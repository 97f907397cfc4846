use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linear::{draw_batch, sign_label};
use super::{AdamConfig, AdamState, ModelParams};
use crate::data::{Dataset, Features};
use crate::error::{ensure_dims, Error, Result};
use crate::kernels::{gram_matrix, gram_symmetric, KernelSpec};
use crate::losses::WaveParams;

/// Kernel Wave-SVM: `f(x) = Σⱼ γⱼ k(sⱼ, x)` over a fixed support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelModel {
    pub kernel: KernelSpec,
    pub params: ModelParams,
    pub gamma: Vec<f64>,
    pub support: Features,
    /// Labels of the support rows, kept for inspection.
    pub support_labels: Vec<i8>,
    pub seed: u64,
    pub iterations_run: usize,
}

impl KernelModel {
    pub fn decision_function(&self, x: &Features) -> Result<Vec<f64>> {
        ensure_dims(self.support.n_cols(), x.n_cols())?;
        let k = gram_matrix(&self.kernel, x, &self.support)?;
        let gamma = DVector::from_column_slice(&self.gamma);
        Ok((k * gamma).iter().copied().collect())
    }
}

/// `½ γᵀKγ + C Σ L(1 - yᵢ (Kγ)ᵢ)` over the support set.
pub fn objective_kernel(
    gamma: &[f64],
    k: &DMatrix<f64>,
    y: &[i8],
    c: f64,
    loss: &WaveParams,
) -> Result<f64> {
    ensure_dims(k.nrows(), gamma.len())?;
    ensure_dims(k.nrows(), y.len())?;
    let g = DVector::from_column_slice(gamma);
    let kg = k * &g;
    let risk: f64 = kg
        .iter()
        .zip(y)
        .map(|(f, &yi)| loss.loss(1.0 - f64::from(yi) * f))
        .sum();
    Ok(0.5 * g.dot(&kg) + c * risk)
}

/// `Kγ - C Σᵢ yᵢ Kᵢ L'(ξᵢ)` with `ξᵢ = 1 - yᵢ (Kγ)ᵢ`; `K` must be symmetric.
pub fn gradient_kernel(
    gamma: &[f64],
    k: &DMatrix<f64>,
    y: &[i8],
    c: f64,
    loss: &WaveParams,
) -> Result<Vec<f64>> {
    ensure_dims(k.nrows(), gamma.len())?;
    ensure_dims(k.nrows(), y.len())?;
    let mut out = vec![0.0; gamma.len()];
    let mut kg = vec![0.0; gamma.len()];
    kernel_gradient_into(gamma, k, y, c, loss, &mut kg, &mut out);
    Ok(out)
}

fn kernel_gradient_into(
    gamma: &[f64],
    k: &DMatrix<f64>,
    y: &[i8],
    c: f64,
    loss: &WaveParams,
    kg: &mut [f64],
    g: &mut [f64],
) {
    let n = gamma.len();
    for (i, kgi) in kg.iter_mut().enumerate() {
        *kgi = k.column(i).iter().zip(gamma).map(|(a, b)| a * b).sum();
    }
    g.copy_from_slice(kg);
    for i in 0..n {
        let yi = f64::from(y[i]);
        let d = loss.derivative(1.0 - yi * kg[i]);
        if d != 0.0 {
            let s = c * yi * d;
            for (gj, kij) in g.iter_mut().zip(k.column(i).iter()) {
                *gj -= s * kij;
            }
        }
    }
}

/// Trains a kernel Wave-SVM. `min(k, l)` support samples are drawn once and
/// the coefficients on them are optimised with full-batch Adam.
pub fn train_kernel(
    data: &Dataset,
    config: &AdamConfig,
    kernel: &KernelSpec,
) -> Result<KernelModel> {
    config.validate()?;
    kernel.validate()?;
    if data.is_empty() {
        return Err(Error::Usage("cannot train on an empty dataset".into()));
    }
    let l = data.len();
    let k = config.batch_size.min(l);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..l).collect();
    draw_batch(&mut order, k, &mut rng);
    let idx = &order[..k];
    let support = data.features().select_rows(idx);
    let labels: Vec<i8> = idx.iter().map(|&i| data.labels()[i]).collect();
    let gram = gram_symmetric(kernel, &support);

    let mut state = AdamState::new(k, config.init);
    let mut grad = vec![0.0; k];
    let mut kg = vec![0.0; k];
    let mut iterations = 0;
    for _ in 0..config.max_iter {
        kernel_gradient_into(
            &state.params,
            &gram,
            &labels,
            config.c,
            &config.loss,
            &mut kg,
            &mut grad,
        );
        let change = state.step(&grad, config);
        iterations += 1;
        if !change.is_finite() || state.params.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "Adam diverged after {iterations} iterations"
            )));
        }
        if change < config.eta {
            break;
        }
    }
    Ok(KernelModel {
        kernel: *kernel,
        params: ModelParams::from_adam(config, kernel.sigma()),
        gamma: state.params,
        support,
        support_labels: labels,
        seed: config.seed,
        iterations_run: iterations,
    })
}

/// `sign(Σⱼ γⱼ k(sⱼ, x))`, with a zero score mapped to `+1`.
pub fn predict_kernel(model: &KernelModel, x: &Features) -> Result<Vec<i8>> {
    Ok(model
        .decision_function(x)?
        .into_iter()
        .map(sign_label)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(support: Vec<Vec<f64>>, gamma: Vec<f64>) -> KernelModel {
        let n = support.len();
        KernelModel {
            kernel: KernelSpec::Gaussian { sigma: 1.0 },
            params: ModelParams::from_adam(&AdamConfig::default(), Some(1.0)),
            gamma,
            support: Features::from_rows(support).unwrap(),
            support_labels: vec![1; n],
            seed: 0,
            iterations_run: 0,
        }
    }

    #[test]
    fn zero_gamma_predicts_positive() {
        let m = model(vec![vec![0.0, 0.0], vec![1.0, 1.0]], vec![0.0, 0.0]);
        let x = Features::from_rows(vec![vec![3.0, -1.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(predict_kernel(&m, &x).unwrap(), vec![1, 1]);
    }

    #[test]
    fn single_support_sign() {
        let m = model(vec![vec![0.0]], vec![-0.5]);
        let x = Features::from_rows(vec![vec![0.2]]).unwrap();
        assert_eq!(predict_kernel(&m, &x).unwrap(), vec![-1]);
        let wrong = Features::from_rows(vec![vec![0.2, 0.1]]).unwrap();
        assert!(predict_kernel(&m, &wrong).is_err());
    }

    #[test]
    fn single_class_data_predicts_that_class() {
        for y in [1i8, -1] {
            let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 10.0, 0.3]).collect();
            let d = Dataset::new(Features::from_rows(rows).unwrap(), vec![y; 20]).unwrap();
            let cfg = AdamConfig {
                alpha: 1e-2,
                ..AdamConfig::default()
            };
            let m = train_kernel(&d, &cfg, &KernelSpec::Gaussian { sigma: 1.0 }).unwrap();
            assert!(predict_kernel(&m, d.features())
                .unwrap()
                .iter()
                .all(|&p| p == y));
        }
    }

    #[test]
    fn support_clamped_to_data_size() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let d = Dataset::new(Features::from_rows(rows).unwrap(), vec![1, -1, 1, -1, 1]).unwrap();
        let m = train_kernel(
            &d,
            &AdamConfig::default(),
            &KernelSpec::Gaussian { sigma: 1.0 },
        )
        .unwrap();
        assert_eq!(m.gamma.len(), 5);
        assert_eq!(m.support.n_rows(), 5);
    }
}
