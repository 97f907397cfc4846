use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// How the noise level `r` is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// A fraction `r` of all feature cells, chosen without replacement, gets
    /// `N(0, σ_j)` noise where `σ_j` is the sample standard deviation of the
    /// cell's column.
    #[default]
    CellFraction,
    /// Every cell gets `N(0, r·σ_j)` noise.
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub level: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: NoiseMode,
}

impl NoiseConfig {
    pub fn new(level: f64, seed: u64) -> Self {
        NoiseConfig {
            level,
            seed,
            mode: NoiseMode::CellFraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.level > 0.0 && self.level <= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "noise level must be in (0, 1], got {}",
                self.level
            )))
        }
    }

    /// Number of cells perturbed in cell-fraction mode, `⌈r·cells⌉`.
    /// Products that land within rounding error of an integer are not bumped
    /// up to the next one.
    pub fn cell_count(&self, cells: usize) -> usize {
        let raw = self.level * cells as f64;
        let nearest = raw.round();
        let count = if (raw - nearest).abs() <= 1e-9 * raw.max(1.0) {
            nearest
        } else {
            raw.ceil()
        };
        (count as usize).min(cells)
    }
}

/// Adds zero-mean Gaussian noise to the features. Labels are untouched and
/// columns with zero variance are left exactly as they were.
pub fn inject_gaussian_noise(data: &Dataset, config: &NoiseConfig) -> Result<Dataset> {
    config.validate()?;
    let x = data.features();
    let (l, n) = (x.n_rows(), x.n_cols());
    let sigmas: Vec<f64> = (0..n).map(|j| sample_std(x.column(j))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = x.clone();
    match config.mode {
        NoiseMode::CellFraction => {
            let total = l * n;
            let count = config.cell_count(total);
            for cell in rand::seq::index::sample(&mut rng, total, count) {
                let (i, j) = (cell / n, cell % n);
                if sigmas[j] > 0.0 {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    out.set(i, j, x.get(i, j) + sigmas[j] * z);
                }
            }
        }
        NoiseMode::Amplitude => {
            for i in 0..l {
                for (j, &s) in sigmas.iter().enumerate() {
                    if s > 0.0 {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        out.set(i, j, x.get(i, j) + config.level * s * z);
                    }
                }
            }
        }
    }
    Ok(data.replace_features(out))
}

fn sample_std(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count();
    if n < 2 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}
