//! Wave-SVM trained with Adam, in linear and kernel form.
//!
//! The linear model draws a fresh mini-batch of `k` samples, without
//! replacement, at every iteration. The kernel model fixes `k` support
//! samples once, since the coefficient vector is indexed by them, and then
//! runs full-batch Adam on those coefficients. Both stop when the largest
//! per-coordinate parameter change drops below `eta` or after `max_iter`
//! steps.

mod adam;
mod kernel;
mod linear;

pub use adam::{adam_update, AdamConfig, AdamState};
pub use kernel::{gradient_kernel, objective_kernel, predict_kernel, train_kernel, KernelModel};
pub use linear::{
    gradient_linear, objective_linear, predict_linear, train_linear, train_linear_traced,
    LinearModel,
};

use serde::{Deserialize, Serialize};

/// Hyperparameters recorded alongside a trained Wave-SVM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub lambda: f64,
    pub c: f64,
    pub sigma: Option<f64>,
    pub alpha: f64,
    pub batch_size: usize,
    pub max_iter: usize,
}

impl ModelParams {
    pub(crate) fn from_adam(config: &AdamConfig, sigma: Option<f64>) -> Self {
        ModelParams {
            a: config.loss.a,
            lambda: config.loss.lambda,
            c: config.c,
            sigma,
            alpha: config.alpha,
            batch_size: config.batch_size,
            max_iter: config.max_iter,
        }
    }
}
