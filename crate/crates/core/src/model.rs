//! The four model families behind one interface.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Features};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::losses::WaveParams;
use crate::wavesvm::{
    predict_kernel, predict_linear, train_kernel, train_linear, AdamConfig, KernelModel,
    LinearModel,
};
use crate::wavetsvm::{predict_twin, train_twin_kernel, train_twin_linear, TwinConfig, TwinModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelFamily {
    WaveSvmLinear,
    WaveSvmKernel,
    WaveTsvmLinear,
    WaveTsvmKernel,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 4] = [
        ModelFamily::WaveSvmLinear,
        ModelFamily::WaveSvmKernel,
        ModelFamily::WaveTsvmLinear,
        ModelFamily::WaveTsvmKernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::WaveSvmLinear => "wave-svm-linear",
            ModelFamily::WaveSvmKernel => "wave-svm-kernel",
            ModelFamily::WaveTsvmLinear => "wave-tsvm-linear",
            ModelFamily::WaveTsvmKernel => "wave-tsvm-kernel",
        }
    }

    pub fn is_twin(self) -> bool {
        matches!(
            self,
            ModelFamily::WaveTsvmLinear | ModelFamily::WaveTsvmKernel
        )
    }

    pub fn is_kernel(self) -> bool {
        matches!(
            self,
            ModelFamily::WaveSvmKernel | ModelFamily::WaveTsvmKernel
        )
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelFamily::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown model family '{s}'")))
    }
}

/// One point of a hyperparameter search. Unused entries stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HyperParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    pub lambda: f64,
    pub a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

/// Settings that stay fixed while hyperparameters vary.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainSettings {
    pub adam: AdamConfig,
    pub twin: TwinConfig,
}

impl TrainSettings {
    pub fn adam_config(&self, hp: &HyperParams, seed: u64) -> AdamConfig {
        AdamConfig {
            c: hp.c.unwrap_or(self.adam.c),
            loss: WaveParams {
                a: hp.a,
                lambda: hp.lambda,
            },
            alpha: hp.alpha.unwrap_or(self.adam.alpha),
            seed,
            ..self.adam
        }
    }

    /// `C₁ = C₃` and `C₂ = C₄` when taken from the hyperparameters.
    pub fn twin_config(&self, hp: &HyperParams, kernel: Option<KernelSpec>) -> TwinConfig {
        let c1 = hp.c1.unwrap_or(self.twin.c1);
        let c2 = hp.c2.unwrap_or(self.twin.c2);
        TwinConfig {
            c1,
            c2,
            c3: hp.c1.unwrap_or(self.twin.c3),
            c4: hp.c2.unwrap_or(self.twin.c4),
            loss: WaveParams {
                a: hp.a,
                lambda: hp.lambda,
            },
            kernel,
            ..self.twin
        }
    }
}

/// A trained model of any family, serialized with a `type` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SavedModel {
    WaveSvmLinear(LinearModel),
    WaveSvmKernel(KernelModel),
    WaveTsvmLinear(TwinModel),
    WaveTsvmKernel(TwinModel),
}

impl SavedModel {
    pub fn family(&self) -> ModelFamily {
        match self {
            SavedModel::WaveSvmLinear(_) => ModelFamily::WaveSvmLinear,
            SavedModel::WaveSvmKernel(_) => ModelFamily::WaveSvmKernel,
            SavedModel::WaveTsvmLinear(_) => ModelFamily::WaveTsvmLinear,
            SavedModel::WaveTsvmKernel(_) => ModelFamily::WaveTsvmKernel,
        }
    }

    pub fn predict(&self, x: &Features) -> Result<Vec<i8>> {
        match self {
            SavedModel::WaveSvmLinear(m) => predict_linear(m, x),
            SavedModel::WaveSvmKernel(m) => predict_kernel(m, x),
            SavedModel::WaveTsvmLinear(m) | SavedModel::WaveTsvmKernel(m) => predict_twin(m, x),
        }
    }

    /// Non-fatal notes about how training ended.
    pub fn warnings(&self) -> Vec<String> {
        let twin = match self {
            SavedModel::WaveTsvmLinear(m) | SavedModel::WaveTsvmKernel(m) => m,
            _ => return Vec::new(),
        };
        [
            ("positive", &twin.positive_status),
            ("negative", &twin.negative_status),
        ]
        .into_iter()
        .filter(|(_, s)| !s.converged)
        .map(|(name, s)| {
            let why = if s.oscillating {
                "entered a two-cycle"
            } else {
                "hit the iteration limit"
            };
            format!(
                "{name} plane did not converge: {why} after {} iterations (last change {:.3e})",
                s.iterations, s.final_change
            )
        })
        .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Trains one model. `seed` drives mini-batch and support-set sampling.
pub fn fit(
    family: ModelFamily,
    data: &Dataset,
    hp: &HyperParams,
    settings: &TrainSettings,
    seed: u64,
) -> Result<SavedModel> {
    let kernel = match (family.is_kernel(), hp.sigma) {
        (false, _) => None,
        (true, Some(sigma)) => Some(KernelSpec::gaussian(sigma)?),
        (true, None) => {
            return Err(Error::Usage(format!("{family} needs a kernel width sigma")));
        }
    };
    Ok(match family {
        ModelFamily::WaveSvmLinear => {
            SavedModel::WaveSvmLinear(train_linear(data, &settings.adam_config(hp, seed))?)
        }
        ModelFamily::WaveSvmKernel => SavedModel::WaveSvmKernel(train_kernel(
            data,
            &settings.adam_config(hp, seed),
            &kernel.unwrap_or(KernelSpec::Linear),
        )?),
        ModelFamily::WaveTsvmLinear => {
            SavedModel::WaveTsvmLinear(train_twin_linear(data, &settings.twin_config(hp, None))?)
        }
        ModelFamily::WaveTsvmKernel => {
            SavedModel::WaveTsvmKernel(train_twin_kernel(data, &settings.twin_config(hp, kernel))?)
        }
    })
}
