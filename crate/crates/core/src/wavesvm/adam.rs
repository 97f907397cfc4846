use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};
use crate::losses::WaveParams;

/// Hyperparameters of Adam-trained Wave-SVM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamConfig {
    pub c: f64,
    pub loss: WaveParams,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub batch_size: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Starting value for every entry of the parameters and both moments.
    pub init: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            c: 1.0,
            loss: WaveParams {
                a: 1.0,
                lambda: 1.0,
            },
            alpha: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            eta: 1e-5,
            batch_size: 32,
            max_iter: 1000,
            seed: 0,
            init: 0.01,
        }
    }
}

impl AdamConfig {
    pub fn new(c: f64, loss: WaveParams) -> Self {
        AdamConfig {
            c,
            loss,
            ..AdamConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.loss.validate()?;
        let checks = [
            (self.c > 0.0 && self.c.is_finite(), "C must be positive"),
            (
                self.alpha > 0.0 && self.alpha.is_finite(),
                "alpha must be positive",
            ),
            (
                self.beta1 > 0.0 && self.beta1 < 1.0,
                "beta1 must be in (0, 1)",
            ),
            (
                self.beta2 > 0.0 && self.beta2 < 1.0,
                "beta2 must be in (0, 1)",
            ),
            (self.epsilon > 0.0, "epsilon must be positive"),
            (self.eta > 0.0, "eta must be positive"),
            (self.batch_size >= 1, "batch size must be at least 1"),
            (self.max_iter >= 1, "max_iter must be at least 1"),
            (self.init.is_finite(), "init must be finite"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::InvalidParameter((*msg).to_string())),
            None => Ok(()),
        }
    }
}

/// Parameters and moment estimates carried between Adam steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub params: Vec<f64>,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    /// Every entry of `params`, `m` and `v` set to `init`, with `t = 1`.
    pub fn new(dim: usize, init: f64) -> Self {
        AdamState {
            params: vec![init; dim],
            m: vec![init; dim],
            v: vec![init; dim],
            t: 1,
        }
    }

    /// Applies one step in place and returns the max-norm of the parameter
    /// change.
    pub fn step(&mut self, grad: &[f64], config: &AdamConfig) -> f64 {
        let (b1, b2) = (config.beta1, config.beta2);
        let t = i32::try_from(self.t).unwrap_or(i32::MAX);
        let c1 = 1.0 - b1.powi(t);
        let c2 = 1.0 - b2.powi(t);
        let mut change: f64 = 0.0;
        for (((p, m), v), &g) in self
            .params
            .iter_mut()
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
            .zip(grad)
        {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            let delta = config.alpha * m_hat / (v_hat.sqrt() + config.epsilon);
            *p -= delta;
            change = change.max(delta.abs());
        }
        self.t += 1;
        change
    }
}

/// One Adam step as a pure function.
pub fn adam_update(state: &AdamState, grad: &[f64], config: &AdamConfig) -> Result<AdamState> {
    ensure_dims(state.params.len(), grad.len())?;
    ensure_dims(state.params.len(), state.m.len())?;
    ensure_dims(state.params.len(), state.v.len())?;
    if state.t < 1 {
        return Err(Error::InvalidParameter(
            "Adam step counter starts at 1".into(),
        ));
    }
    let mut next = state.clone();
    next.step(grad, config);
    Ok(next)
}
