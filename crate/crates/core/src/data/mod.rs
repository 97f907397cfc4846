//! Datasets and the preprocessing used by the evaluation protocol.

mod folds;
mod noise;
mod reader;
mod scale;
mod synth;

pub use folds::{stratified_kfold, FoldSplit};
pub use noise::{inject_gaussian_noise, NoiseConfig, NoiseMode};
pub use reader::{load_csv, CsvOptions, LabelColumn};
pub use scale::{minmax_fit_apply, MinMaxScaler};
pub use synth::{synth_gaussians, synth_xor};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};

/// Dense row-major sample matrix. Serialized as `{"n_cols": n, "rows": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RowsForm", try_from = "RowsForm")]
pub struct Features {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Features {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        ensure_dims(n_rows * n_cols, data.len())?;
        Ok(Features {
            n_rows,
            n_cols,
            data,
        })
    }

    /// Builds a matrix from equal-length rows. An empty list gives a 0×0
    /// matrix.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            ensure_dims(n_cols, row.len())?;
            data.extend(row);
        }
        Ok(Features {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn select_rows(&self, idx: &[usize]) -> Features {
        let mut data = Vec::with_capacity(idx.len() * self.n_cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Features {
            n_rows: idx.len(),
            n_cols: self.n_cols,
            data,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn column(&self, j: usize) -> impl Iterator<Item = f64> + Clone + '_ {
        (0..self.n_rows).map(move |i| self.get(i, j))
    }
}

#[derive(Serialize, Deserialize)]
struct RowsForm {
    n_cols: usize,
    rows: Vec<Vec<f64>>,
}

impl From<Features> for RowsForm {
    fn from(f: Features) -> Self {
        RowsForm {
            n_cols: f.n_cols,
            rows: f.to_rows(),
        }
    }
}

impl TryFrom<RowsForm> for Features {
    type Error = Error;

    fn try_from(form: RowsForm) -> Result<Self> {
        let n_rows = form.rows.len();
        let mut data = Vec::with_capacity(n_rows * form.n_cols);
        for row in form.rows {
            ensure_dims(form.n_cols, row.len())?;
            data.extend(row);
        }
        Features::new(n_rows, form.n_cols, data)
    }
}

/// Binary classification data: features plus labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Features,
    labels: Vec<i8>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(features: Features, labels: Vec<i8>) -> Result<Self> {
        ensure_dims(features.n_rows(), labels.len())?;
        if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
            return Err(Error::Data(format!("labels must be -1 or +1, found {bad}")));
        }
        if let Some(pos) = features.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite feature value at row {}, column {}",
                pos / features.n_cols.max(1),
                pos % features.n_cols.max(1)
            )));
        }
        Ok(Dataset {
            features,
            labels,
            feature_names: None,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        ensure_dims(self.features.n_cols(), names.len())?;
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    pub fn count_positive(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    pub fn count_negative(&self) -> usize {
        self.len() - self.count_positive()
    }

    pub fn has_both_classes(&self) -> bool {
        let p = self.count_positive();
        p > 0 && p < self.len()
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub(crate) fn replace_features(&self, features: Features) -> Dataset {
        debug_assert_eq!(features.n_rows(), self.len());
        Dataset {
            features,
            labels: self.labels.clone(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Writes the dataset as CSV with a header; the label column is last and
    /// named `label`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
        let mut header: Vec<String> = match &self.feature_names {
            Some(names) => names.clone(),
            None => (0..self.n_features()).map(|j| format!("x{j}")).collect(),
        };
        header.push("label".into());
        w.write_record(&header).map_err(map)?;
        for (row, y) in self.features.rows().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(y.to_string());
            w.write_record(&rec).map_err(map)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
