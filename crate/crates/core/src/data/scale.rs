use serde::{Deserialize, Serialize};

use super::{Dataset, Features};
use crate::error::{ensure_dims, Error, Result};

/// Per-feature `[0, 1]` scaling fitted on one dataset and reusable on others.
///
/// Columns that are constant in the fitting data map to 0. Data transformed
/// with a scaler fitted elsewhere is not clipped, so held-out values may fall
/// outside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Data(
                "cannot fit a scaler on an empty dataset".into(),
            ));
        }
        let x = train.features();
        let (mins, maxs) = (0..x.n_cols())
            .map(|j| {
                x.column(j)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v), hi.max(v))
                    })
            })
            .unzip();
        Ok(MinMaxScaler { mins, maxs })
    }

    pub fn transform_features(&self, x: &Features) -> Result<Features> {
        ensure_dims(self.mins.len(), x.n_cols())?;
        let mut out = x.clone();
        for i in 0..x.n_rows() {
            for j in 0..x.n_cols() {
                let range = self.maxs[j] - self.mins[j];
                let v = if range > 0.0 {
                    (x.get(i, j) - self.mins[j]) / range
                } else {
                    0.0
                };
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn transform(&self, data: &Dataset) -> Result<Dataset> {
        Ok(data.replace_features(self.transform_features(data.features())?))
    }
}

/// Fits on `train`, then scales `train` and each of `others` with the same
/// per-feature minima and maxima.
pub fn minmax_fit_apply(
    train: &Dataset,
    others: &[&Dataset],
) -> Result<(Dataset, Vec<Dataset>, MinMaxScaler)> {
    let scaler = MinMaxScaler::fit(train)?;
    let train_scaled = scaler.transform(train)?;
    let rest = others
        .iter()
        .map(|d| scaler.transform(d))
        .collect::<Result<Vec<_>>>()?;
    Ok((train_scaled, rest, scaler))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: Vec<Vec<f64>>) -> Dataset {
        let n = rows.len();
        Dataset::new(Features::from_rows(rows).unwrap(), vec![1; n]).unwrap()
    }

    #[test]
    fn scales_train_column() {
        let train = ds(vec![vec![0.0, 3.0], vec![5.0, 3.0], vec![10.0, 3.0]]);
        let test = ds(vec![vec![12.0, 7.0]]);
        let (t, rest, _) = minmax_fit_apply(&train, &[&test]).unwrap();
        let col0: Vec<f64> = t.features().column(0).collect();
        assert_eq!(col0, vec![0.0, 0.5, 1.0]);
        let col1: Vec<f64> = t.features().column(1).collect();
        assert_eq!(col1, vec![0.0, 0.0, 0.0]);
        assert!((rest[0].features().get(0, 0) - 1.2).abs() < 1e-15);
        assert_eq!(rest[0].features().get(0, 1), 0.0);
    }

    #[test]
    fn empty_train_is_an_error() {
        let empty = Dataset::new(Features::new(0, 2, vec![]).unwrap(), vec![]).unwrap();
        assert!(MinMaxScaler::fit(&empty).is_err());
    }
}
