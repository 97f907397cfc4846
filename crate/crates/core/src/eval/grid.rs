use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::accuracy;
use crate::data::{
    inject_gaussian_noise, minmax_fit_apply, stratified_kfold, Dataset, NoiseConfig,
};
use crate::error::{Error, Result};
use crate::model::{fit, HyperParams, ModelFamily, TrainSettings};

/// Ordered value lists for every tunable hyperparameter. Lists that a
/// family does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Wave-SVM trade-off `C`.
    pub c: Vec<f64>,
    /// Twin `C₁ = C₃`.
    pub c1: Vec<f64>,
    /// Twin `C₂ = C₄`.
    pub c2: Vec<f64>,
    pub lambda: Vec<f64>,
    pub a: Vec<f64>,
    pub alpha: Vec<f64>,
    pub sigma: Vec<f64>,
}

/// Partial grid as read from a file; missing lists keep their defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridOverride {
    c: Option<Vec<f64>>,
    c1: Option<Vec<f64>>,
    c2: Option<Vec<f64>>,
    lambda: Option<Vec<f64>>,
    a: Option<Vec<f64>>,
    alpha: Option<Vec<f64>>,
    sigma: Option<Vec<f64>>,
}

fn powers_of_ten(exps: impl Iterator<Item = i32>) -> Vec<f64> {
    exps.map(|i| format!("1e{i}").parse().expect("literal power of ten"))
        .collect()
}

fn tenths(from: i32, to: i32, step: i32) -> Vec<f64> {
    (from..=to)
        .step_by(step as usize)
        .map(|i| f64::from(i) / 10.0)
        .collect()
}

impl GridSpec {
    /// Default search ranges for a family.
    pub fn default_for(family: ModelFamily) -> Self {
        if family.is_twin() {
            let sparse = powers_of_ten((-6..=6).step_by(2));
            GridSpec {
                c: Vec::new(),
                c1: sparse.clone(),
                c2: sparse.clone(),
                lambda: vec![1.0],
                a: tenths(-20, 20, 5),
                alpha: Vec::new(),
                sigma: if family.is_kernel() {
                    sparse
                } else {
                    Vec::new()
                },
            }
        } else {
            GridSpec {
                c: powers_of_ten(-6..=6),
                c1: Vec::new(),
                c2: Vec::new(),
                lambda: tenths(1, 19, 2),
                a: tenths(-20, 50, 1),
                alpha: vec![1e-4, 1e-3, 1e-2],
                sigma: if family.is_kernel() {
                    powers_of_ten(-6..=6)
                } else {
                    Vec::new()
                },
            }
        }
    }

    /// Applies a JSON object of value lists on top of the family defaults.
    /// Any malformed content is a usage error.
    pub fn from_json_override(family: ModelFamily, text: &str) -> Result<Self> {
        let o: GridOverride = serde_json::from_str(text)
            .map_err(|e| Error::Usage(format!("malformed grid file: {e}")))?;
        let mut g = GridSpec::default_for(family);
        let fields = [
            (&mut g.c, o.c),
            (&mut g.c1, o.c1),
            (&mut g.c2, o.c2),
            (&mut g.lambda, o.lambda),
            (&mut g.a, o.a),
            (&mut g.alpha, o.alpha),
            (&mut g.sigma, o.sigma),
        ];
        for (slot, value) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
        g.validate(family)?;
        Ok(g)
    }

    pub fn validate(&self, family: ModelFamily) -> Result<()> {
        let mut needed: Vec<(&str, &Vec<f64>)> = vec![("lambda", &self.lambda), ("a", &self.a)];
        if family.is_twin() {
            needed.push(("c1", &self.c1));
            needed.push(("c2", &self.c2));
        } else {
            needed.push(("c", &self.c));
            needed.push(("alpha", &self.alpha));
        }
        if family.is_kernel() {
            needed.push(("sigma", &self.sigma));
        }
        for (name, values) in needed {
            if values.is_empty() {
                return Err(Error::Usage(format!("grid list '{name}' is empty")));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Usage(format!(
                    "grid list '{name}' has a non-finite value"
                )));
            }
        }
        Ok(())
    }

    /// Every tuple in grid order. The first list named varies slowest:
    /// `C, σ, λ, a, α` for Wave-SVM and `C₁, C₂, σ, λ, a` for Wave-TSVM.
    pub fn tuples(&self, family: ModelFamily) -> Vec<HyperParams> {
        let opt = |v: &[f64]| -> Vec<Option<f64>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().copied().map(Some).collect()
            }
        };
        let sigmas = if family.is_kernel() {
            opt(&self.sigma)
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        if family.is_twin() {
            for &c1 in &opt(&self.c1) {
                for &c2 in &opt(&self.c2) {
                    for &sigma in &sigmas {
                        for &lambda in &self.lambda {
                            for &a in &self.a {
                                out.push(HyperParams {
                                    c1,
                                    c2,
                                    sigma,
                                    lambda,
                                    a,
                                    ..HyperParams::default()
                                });
                            }
                        }
                    }
                }
            }
        } else {
            for &c in &opt(&self.c) {
                for &sigma in &sigmas {
                    for &lambda in &self.lambda {
                        for &a in &self.a {
                            for &alpha in &opt(&self.alpha) {
                                out.push(HyperParams {
                                    c,
                                    sigma,
                                    lambda,
                                    a,
                                    alpha,
                                    ..HyperParams::default()
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// How a tuple's fold accuracies are reduced to one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldScore {
    /// Highest held-out fold accuracy.
    #[default]
    Best,
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOptions {
    pub folds: usize,
    pub seed: u64,
    pub score: FoldScore,
    /// Worker threads; `0` or `1` runs sequentially.
    pub jobs: usize,
    pub settings: TrainSettings,
    /// Corrupts the training part of every fold when set. The seed is
    /// combined with the fold index.
    pub noise: Option<NoiseConfig>,
}

impl Default for CvOptions {
    fn default() -> Self {
        CvOptions {
            folds: 4,
            seed: 0,
            score: FoldScore::Best,
            jobs: 1,
            settings: TrainSettings::default(),
            noise: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub index: usize,
    pub params: HyperParams,
    pub fold_accuracies: Vec<f64>,
    pub score: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub family: ModelFamily,
    pub folds: usize,
    pub seed: u64,
    pub score: FoldScore,
    pub n_samples: usize,
    pub n_features: usize,
    pub n_cells: usize,
    pub n_failed: usize,
    pub best_index: Option<usize>,
    pub best_params: Option<HyperParams>,
    pub best_score: Option<f64>,
    pub cells: Vec<CellResult>,
    /// Summed training wall-clock time. Not serialized, so reports stay
    /// byte-identical between runs.
    #[serde(skip)]
    pub training_time: Duration,
}

impl CvReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per cell: tuple values, per-fold accuracies, score, error.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
        let mut header: Vec<String> = ["index", "c", "c1", "c2", "sigma", "lambda", "a", "alpha"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend((0..self.folds).map(|f| format!("fold{f}")));
        header.push("score".into());
        header.push("error".into());
        w.write_record(&header).map_err(map)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for cell in &self.cells {
            let p = &cell.params;
            let mut rec = vec![
                cell.index.to_string(),
                opt(p.c),
                opt(p.c1),
                opt(p.c2),
                opt(p.sigma),
                p.lambda.to_string(),
                p.a.to_string(),
                opt(p.alpha),
            ];
            for f in 0..self.folds {
                rec.push(opt(cell.fold_accuracies.get(f).copied()));
            }
            rec.push(opt(cell.score));
            rec.push(cell.error.clone().unwrap_or_default());
            w.write_record(&rec).map_err(map)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// SplitMix64 finaliser, used to derive independent per-cell seeds.
pub(crate) fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct PreparedFold {
    train: Dataset,
    test: Dataset,
}

fn prepare_folds(data: &Dataset, options: &CvOptions) -> Result<Vec<PreparedFold>> {
    let splits = stratified_kfold(data, options.folds, options.seed)?;
    splits
        .iter()
        .enumerate()
        .map(|(f, split)| {
            let (train, rest, _) =
                minmax_fit_apply(&data.subset(&split.train), &[&data.subset(&split.test)])?;
            let train = match &options.noise {
                Some(cfg) => inject_gaussian_noise(
                    &train,
                    &NoiseConfig {
                        seed: mix_seed(cfg.seed, f as u64),
                        ..*cfg
                    },
                )?,
                None => train,
            };
            let test = rest.into_iter().next().expect("one held-out set");
            Ok(PreparedFold { train, test })
        })
        .collect()
}

fn run_cell(
    family: ModelFamily,
    index: usize,
    params: HyperParams,
    folds: &[PreparedFold],
    options: &CvOptions,
) -> (CellResult, Duration) {
    let seed = mix_seed(options.seed, index as u64);
    let mut accs = Vec::with_capacity(folds.len());
    let mut spent = Duration::ZERO;
    let mut error = None;
    for fold in folds {
        let start = Instant::now();
        let trained = fit(family, &fold.train, &params, &options.settings, seed);
        spent += start.elapsed();
        let acc = trained.and_then(|m| {
            let pred = m.predict(fold.test.features())?;
            accuracy(&pred, fold.test.labels())
        });
        match acc {
            Ok(a) => accs.push(a),
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
    }
    let score = match (&error, options.score) {
        (Some(_), _) => None,
        (None, FoldScore::Best) => accs.iter().copied().reduce(f64::max),
        (None, FoldScore::Mean) => Some(accs.iter().sum::<f64>() / accs.len() as f64),
    };
    (
        CellResult {
            index,
            params,
            fold_accuracies: accs,
            score,
            error,
        },
        spent,
    )
}

/// Stratified k-fold grid search. Each fold is min-max scaled with
/// statistics from its own training part. Training failures are recorded
/// in the failing cell and the sweep continues. The winner is the highest
/// score, earliest in grid order on ties.
pub fn grid_search_cv(
    data: &Dataset,
    family: ModelFamily,
    grid: &GridSpec,
    options: &CvOptions,
) -> Result<CvReport> {
    grid.validate(family)?;
    if options.folds < 2 {
        return Err(Error::Usage(format!(
            "need at least 2 folds, got {}",
            options.folds
        )));
    }
    let folds = prepare_folds(data, options)?;
    let tuples = grid.tuples(family);
    let work = |(i, p): (usize, HyperParams)| run_cell(family, i, p, &folds, options);
    let results: Vec<(CellResult, Duration)> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {} workers: {e}", options.jobs)))?;
        pool.install(|| tuples.into_par_iter().enumerate().map(work).collect())
    } else {
        tuples.into_iter().enumerate().map(work).collect()
    };

    let training_time = results.iter().map(|(_, d)| *d).sum();
    let cells: Vec<CellResult> = results.into_iter().map(|(c, _)| c).collect();
    let mut best: Option<&CellResult> = None;
    for cell in &cells {
        if let Some(s) = cell.score {
            if best.and_then(|b| b.score).is_none_or(|bs| s > bs) {
                best = Some(cell);
            }
        }
    }
    Ok(CvReport {
        family,
        folds: options.folds,
        seed: options.seed,
        score: options.score,
        n_samples: data.len(),
        n_features: data.n_features(),
        n_cells: cells.len(),
        n_failed: cells.iter().filter(|c| c.error.is_some()).count(),
        best_index: best.map(|b| b.index),
        best_params: best.map(|b| b.params),
        best_score: best.and_then(|b| b.score),
        training_time,
        cells,
    })
}
