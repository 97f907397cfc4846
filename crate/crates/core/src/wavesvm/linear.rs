use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AdamConfig, AdamState, ModelParams};
use crate::data::{Dataset, Features};
use crate::error::{ensure_dims, Error, Result};
use crate::kernels::KernelSpec;
use crate::losses::WaveParams;

/// Linear Wave-SVM. `weights` is `[w; b]`, the bias folded in last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kernel: KernelSpec,
    pub params: ModelParams,
    pub weights: Vec<f64>,
    pub seed: u64,
    pub iterations_run: usize,
}

impl LinearModel {
    pub fn n_features(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn decision_function(&self, x: &Features) -> Result<Vec<f64>> {
        ensure_dims(self.n_features(), x.n_cols())?;
        Ok(x.rows().map(|r| affine(&self.weights, r)).collect())
    }
}

#[inline]
pub(crate) fn affine(w: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    w[..n].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + w[n]
}

/// `½‖w‖² + C Σ L(1 - yᵢ wᵀxᵢ)` over the whole dataset, bias included in
/// the norm.
pub fn objective_linear(w: &[f64], data: &Dataset, c: f64, loss: &WaveParams) -> Result<f64> {
    ensure_dims(data.n_features() + 1, w.len())?;
    let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let risk: f64 = data
        .features()
        .rows()
        .zip(data.labels())
        .map(|(x, &y)| loss.loss(1.0 - f64::from(y) * affine(w, x)))
        .sum();
    Ok(reg + c * risk)
}

/// Gradient of [`objective_linear`] over `batch`:
/// `w - C Σ yᵢ xᵢ L'(ξᵢ)` with `ξᵢ = 1 - yᵢ wᵀxᵢ`.
pub fn gradient_linear(w: &[f64], batch: &Dataset, c: f64, loss: &WaveParams) -> Result<Vec<f64>> {
    ensure_dims(batch.n_features() + 1, w.len())?;
    if batch.is_empty() {
        return Err(Error::Usage("gradient needs a nonempty batch".into()));
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("weights must be finite".into()));
    }
    let all: Vec<usize> = (0..batch.len()).collect();
    let mut g = vec![0.0; w.len()];
    accumulate_gradient(w, batch.features(), batch.labels(), &all, c, loss, &mut g);
    Ok(g)
}

fn accumulate_gradient(
    w: &[f64],
    x: &Features,
    y: &[i8],
    batch: &[usize],
    c: f64,
    loss: &WaveParams,
    g: &mut [f64],
) {
    let n = x.n_cols();
    g.copy_from_slice(w);
    for &i in batch {
        let xi = x.row(i);
        let yi = f64::from(y[i]);
        let d = loss.derivative(1.0 - yi * affine(w, xi));
        if d != 0.0 {
            let s = c * yi * d;
            for (gj, xj) in g[..n].iter_mut().zip(xi) {
                *gj -= s * xj;
            }
            g[n] -= s;
        }
    }
}

/// Trains a linear Wave-SVM with Adam on uniformly drawn mini-batches.
pub fn train_linear(data: &Dataset, config: &AdamConfig) -> Result<LinearModel> {
    Ok(train_linear_traced(data, config, |_, _| {})?.0)
}

/// Like [`train_linear`], calling `observe(t, params)` after every step and
/// also returning the final optimizer state.
pub fn train_linear_traced(
    data: &Dataset,
    config: &AdamConfig,
    mut observe: impl FnMut(u64, &[f64]),
) -> Result<(LinearModel, AdamState)> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::Usage("cannot train on an empty dataset".into()));
    }
    let l = data.len();
    let k = config.batch_size.min(l);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..l).collect();
    let mut state = AdamState::new(data.n_features() + 1, config.init);
    let mut grad = vec![0.0; state.params.len()];
    let mut iterations = 0;
    for _ in 0..config.max_iter {
        draw_batch(&mut order, k, &mut rng);
        accumulate_gradient(
            &state.params,
            data.features(),
            data.labels(),
            &order[..k],
            config.c,
            &config.loss,
            &mut grad,
        );
        let change = state.step(&grad, config);
        iterations += 1;
        observe(state.t, &state.params);
        if !change.is_finite() || state.params.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "Adam diverged after {iterations} iterations"
            )));
        }
        if change < config.eta {
            break;
        }
    }
    let model = LinearModel {
        kernel: KernelSpec::Linear,
        params: ModelParams::from_adam(config, None),
        weights: state.params.clone(),
        seed: config.seed,
        iterations_run: iterations,
    };
    Ok((model, state))
}

/// Partial Fisher-Yates: moves a uniform random `k`-subset to the front.
pub(crate) fn draw_batch(order: &mut [usize], k: usize, rng: &mut impl Rng) {
    let l = order.len();
    for i in 0..k {
        let j = rng.random_range(i..l);
        order.swap(i, j);
    }
}

/// `sign(wᵀx + b)`, with a zero score mapped to `+1`.
pub fn predict_linear(model: &LinearModel, x: &Features) -> Result<Vec<i8>> {
    Ok(model
        .decision_function(x)?
        .into_iter()
        .map(sign_label)
        .collect())
}

#[inline]
pub(crate) fn sign_label(score: f64) -> i8 {
    if score >= 0.0 {
        1
    } else {
        -1
    }
}
