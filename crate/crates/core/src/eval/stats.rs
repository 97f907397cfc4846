use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracies of `p` models on `D` datasets. A cell may be missing when a
/// model produced no result on that dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    datasets: Vec<String>,
    models: Vec<String>,
    accuracies: Vec<Vec<Option<f64>>>,
}

impl RankTable {
    pub fn new(
        datasets: Vec<String>,
        models: Vec<String>,
        accuracies: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        if datasets.len() != accuracies.len() {
            return Err(Error::Data(format!(
                "{} dataset names for {} rows",
                datasets.len(),
                accuracies.len()
            )));
        }
        if datasets.len() < 2 || models.len() < 2 {
            return Err(Error::Data(
                "rank table needs at least 2 datasets and 2 models".into(),
            ));
        }
        for (name, row) in datasets.iter().zip(&accuracies) {
            if row.len() != models.len() {
                return Err(Error::Data(format!(
                    "row '{name}' has {} entries, expected {}",
                    row.len(),
                    models.len()
                )));
            }
            if let Some(v) = row.iter().flatten().find(|v| !(0.0..=100.0).contains(*v)) {
                return Err(Error::Data(format!(
                    "accuracy {v} in row '{name}' is outside [0, 100]"
                )));
            }
            if row.iter().all(Option::is_none) {
                return Err(Error::Data(format!("row '{name}' has no values")));
            }
        }
        Ok(RankTable {
            datasets,
            models,
            accuracies,
        })
    }

    /// Complete table without missing cells.
    pub fn from_complete(
        datasets: Vec<String>,
        models: Vec<String>,
        accuracies: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let acc = accuracies
            .into_iter()
            .map(|r| r.into_iter().map(Some).collect())
            .collect();
        RankTable::new(datasets, models, acc)
    }

    /// Reads `dataset,<model>,<model>,...` with one row per dataset. Empty
    /// cells and `*` mark missing results. Rows of the wrong width are a
    /// data error.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Data(format!("cannot read table header: {e}")))?
            .clone();
        let models: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut datasets = Vec::new();
        let mut rows = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let line = k + 2;
            let rec = rec.map_err(|e| Error::Parse {
                row: line,
                column: 0,
                message: e.to_string(),
            })?;
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    row: line,
                    column: rec.len(),
                    message: format!(
                        "table is not rectangular: expected {} fields, found {}",
                        header.len(),
                        rec.len()
                    ),
                });
            }
            datasets.push(rec[0].to_string());
            let mut row = Vec::with_capacity(models.len());
            for (j, cell) in rec.iter().enumerate().skip(1) {
                if cell.is_empty() || cell == "*" {
                    row.push(None);
                    continue;
                }
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    row: line,
                    column: j + 1,
                    message: format!("'{cell}' is not a number"),
                })?;
                row.push(Some(v));
            }
            rows.push(row);
        }
        RankTable::new(datasets, models, rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        RankTable::from_csv_reader(file)
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn accuracies(&self) -> &[Vec<Option<f64>>] {
        &self.accuracies
    }

    pub fn n_datasets(&self) -> usize {
        self.datasets.len()
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn model_index(&self, name: &str) -> Result<usize> {
        self.models
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| Error::Usage(format!("model '{name}' is not in the table")))
    }

    /// Per-dataset ranks, best accuracy first, ties sharing the average of
    /// their positions. Missing cells are left out of the ranking and stay
    /// `None`.
    pub fn dataset_ranks(&self) -> Vec<Vec<Option<f64>>> {
        self.accuracies.iter().map(|row| rank_row(row)).collect()
    }
}

fn rank_row(row: &[Option<f64>]) -> Vec<Option<f64>> {
    let mut present: Vec<(usize, f64)> = row
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    present.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut out = vec![None; row.len()];
    let mut i = 0;
    while i < present.len() {
        let mut j = i;
        while j + 1 < present.len() && present[j + 1].1 == present[i].1 {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for item in &present[i..=j] {
            out[item.0] = Some(avg);
        }
        i = j + 1;
    }
    out
}

/// Mean rank of each model over the datasets where it has a result.
/// `decimals` rounds the means, for matching figures reported at a fixed
/// precision.
pub fn mean_ranks(table: &RankTable, decimals: Option<u32>) -> Vec<f64> {
    let ranks = table.dataset_ranks();
    (0..table.n_models())
        .map(|m| {
            let (sum, count) = ranks
                .iter()
                .filter_map(|r| r[m])
                .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
            let mean = sum / count as f64;
            match decimals {
                Some(d) => {
                    let scale = 10f64.powi(d as i32);
                    (mean * scale).round() / scale
                }
                None => mean,
            }
        })
        .collect()
}

/// Friedman `χ²_F` and the Iman-Davenport `F_F` from mean ranks.
pub fn friedman_test(ranks: &[f64], n_datasets: usize) -> Result<(f64, f64)> {
    let p = ranks.len();
    if p < 2 || n_datasets < 2 {
        return Err(Error::InvalidParameter(
            "Friedman test needs at least 2 models and 2 datasets".into(),
        ));
    }
    let (pf, d) = (p as f64, n_datasets as f64);
    let sum_sq: f64 = ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * d / (pf * (pf + 1.0)) * (sum_sq - pf * (pf + 1.0).powi(2) / 4.0);
    let denom = d * (pf - 1.0) - chi2;
    if denom <= 0.0 {
        return Err(Error::Numeric(format!(
            "degenerate Friedman statistic: D(p-1) - χ² = {denom}"
        )));
    }
    Ok((chi2, (d - 1.0) * chi2 / denom))
}

/// Nemenyi critical difference `q_α √(p(p+1)/(6D))`.
pub fn nemenyi_cd(q_alpha: f64, n_datasets: usize, n_models: usize) -> Result<f64> {
    if !(q_alpha > 0.0) || n_datasets == 0 || n_models == 0 {
        return Err(Error::InvalidParameter(
            "critical difference needs positive q, D and p".into(),
        ));
    }
    let (p, d) = (n_models as f64, n_datasets as f64);
    Ok(q_alpha * (p * (p + 1.0) / (6.0 * d)).sqrt())
}

/// `D/2 + 1.96 √D / 2`.
pub fn sign_test_threshold(n_datasets: usize) -> f64 {
    let d = n_datasets as f64;
    d / 2.0 + 1.96 * d.sqrt() / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinTieLoss {
    pub model: String,
    pub opponent: String,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
    pub threshold: f64,
    /// Wins plus half the ties, rounded up.
    pub score: usize,
    pub significant: bool,
}

/// Dataset-by-dataset comparison of `model` against `opponent`. A missing
/// result loses to a present one; two missing results tie.
pub fn win_tie_loss(table: &RankTable, model: &str, opponent: &str) -> Result<WinTieLoss> {
    let a = table.model_index(model)?;
    let b = table.model_index(opponent)?;
    let (mut wins, mut ties, mut losses) = (0usize, 0usize, 0usize);
    for row in table.accuracies() {
        match (row[a], row[b]) {
            (Some(x), Some(y)) if x > y => wins += 1,
            (Some(x), Some(y)) if x < y => losses += 1,
            (Some(_), None) => wins += 1,
            (None, Some(_)) => losses += 1,
            _ => ties += 1,
        }
    }
    let threshold = sign_test_threshold(table.n_datasets());
    let score = wins + ties.div_ceil(2);
    Ok(WinTieLoss {
        model: model.to_string(),
        opponent: opponent.to_string(),
        wins,
        ties,
        losses,
        threshold,
        score,
        significant: score as f64 >= threshold,
    })
}

/// Everything the statistics command reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub models: Vec<String>,
    pub n_datasets: usize,
    pub rank_decimals: Option<u32>,
    pub mean_ranks: Vec<f64>,
    pub chi2_f: f64,
    pub f_f: f64,
    pub q_alpha: Option<f64>,
    pub critical_difference: Option<f64>,
    pub notes: Vec<String>,
    pub sign_test_threshold: f64,
    /// Every ordered pair of distinct models.
    pub win_tie_loss: Vec<WinTieLoss>,
}

impl StatReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// Long format, `statistic,model,opponent,value`; cells that do not
    /// apply to a statistic are left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
        w.write_record(["statistic", "model", "opponent", "value"])
            .map_err(map)?;
        for (m, r) in self.models.iter().zip(&self.mean_ranks) {
            w.write_record(["mean_rank", m, "", &r.to_string()])
                .map_err(map)?;
        }
        let mut scalars = vec![
            ("chi2_f", self.chi2_f),
            ("f_f", self.f_f),
            ("sign_test_threshold", self.sign_test_threshold),
        ];
        if let Some(cd) = self.critical_difference {
            scalars.push(("critical_difference", cd));
        }
        for (name, v) in scalars {
            w.write_record([name, "", "", &v.to_string()])
                .map_err(map)?;
        }
        for p in &self.win_tie_loss {
            let rows = [
                ("wins", p.wins.to_string()),
                ("ties", p.ties.to_string()),
                ("losses", p.losses.to_string()),
                ("significant", u8::from(p.significant).to_string()),
            ];
            for (name, v) in rows {
                w.write_record([name, &p.model, &p.opponent, &v])
                    .map_err(map)?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

pub fn stat_report(
    table: &RankTable,
    q_alpha: Option<f64>,
    rank_decimals: Option<u32>,
) -> Result<StatReport> {
    let ranks = mean_ranks(table, rank_decimals);
    let (chi2, ff) = friedman_test(&ranks, table.n_datasets())?;
    let mut notes = Vec::new();
    let cd = match q_alpha {
        Some(q) => Some(nemenyi_cd(q, table.n_datasets(), table.n_models())?),
        None => {
            notes.push("critical difference omitted: no q_alpha given".to_string());
            None
        }
    };
    let missing = table
        .accuracies()
        .iter()
        .flatten()
        .filter(|v| v.is_none())
        .count();
    if missing > 0 {
        notes.push(format!(
            "{missing} missing cells: ranked among available models only, counted as losses in pairwise comparisons"
        ));
    }
    let mut pairs = Vec::new();
    for a in table.models() {
        for b in table.models() {
            if a != b {
                pairs.push(win_tie_loss(table, a, b)?);
            }
        }
    }
    Ok(StatReport {
        models: table.models().to_vec(),
        n_datasets: table.n_datasets(),
        rank_decimals,
        mean_ranks: ranks,
        chi2_f: chi2,
        f_f: ff,
        q_alpha,
        critical_difference: cd,
        notes,
        sign_test_threshold: sign_test_threshold(table.n_datasets()),
        win_tie_loss: pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Vec<f64>>) -> RankTable {
        let d = rows.len();
        let p = rows[0].len();
        RankTable::from_complete(
            (0..d).map(|i| format!("d{i}")).collect(),
            (0..p).map(|i| format!("m{i}")).collect(),
            rows,
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            rank_row(&[Some(90.0), Some(80.0), Some(70.0)]),
            vec![Some(1.0), Some(2.0), Some(3.0)]
        );
        assert_eq!(
            rank_row(&[Some(90.0), Some(90.0), Some(70.0)]),
            vec![Some(1.5), Some(1.5), Some(3.0)]
        );
        assert_eq!(
            rank_row(&[Some(50.0), None, Some(70.0)]),
            vec![Some(2.0), None, Some(1.0)]
        );
    }

    #[test]
    fn friedman_examples() {
        let (chi, ff) = friedman_test(&[3.37, 2.85, 4.16, 2.53, 1.8], 42).unwrap();
        assert!((chi - 23.95).abs() < 0.02, "{chi}");
        assert!((ff - 6.82).abs() < 0.02, "{ff}");
        let (chi, ff) = friedman_test(&[2.78, 3.55, 3.75, 2.92, 2.0], 32).unwrap();
        assert!((chi - 24.58).abs() < 0.02, "{chi}");
        assert!((ff - 7.36).abs() < 0.02, "{ff}");
        let (chi, ff) = friedman_test(&[2.0; 3], 10).unwrap();
        assert_eq!((chi, ff), (0.0, 0.0));
    }

    #[test]
    fn degenerate_friedman_is_error() {
        // Perfectly consistent ordering: χ² = D(p-1) and F_F is undefined.
        assert!(matches!(
            friedman_test(&[1.0, 2.0], 5),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn nemenyi_examples() {
        assert!((nemenyi_cd(2.459, 42, 5).unwrap() - 0.848).abs() < 0.01);
        assert!((nemenyi_cd(2.459, 32, 5).unwrap() - 0.972).abs() < 0.01);
        let mut prev = f64::INFINITY;
        for d in [2, 10, 100, 10_000, 1_000_000] {
            let cd = nemenyi_cd(2.459, d, 5).unwrap();
            assert!(cd < prev);
            prev = cd;
        }
        assert!(prev < 0.01);
    }

    #[test]
    fn thresholds() {
        assert!((sign_test_threshold(42) - 27.35).abs() < 0.01);
        assert!((sign_test_threshold(32) - 21.54).abs() < 0.01);
    }

    #[test]
    fn identical_columns_tie_everywhere() {
        let t = table(vec![vec![80.0, 80.0], vec![70.0, 70.0], vec![60.0, 60.0]]);
        let w = win_tie_loss(&t, "m0", "m1").unwrap();
        assert_eq!((w.wins, w.ties, w.losses), (0, 3, 0));
        assert_eq!(w.score, 2);
    }

    #[test]
    fn all_equal_two_by_two() {
        let t = table(vec![vec![50.0, 50.0], vec![50.0, 50.0]]);
        let r = stat_report(&t, None, None).unwrap();
        assert_eq!(r.chi2_f, 0.0);
        assert!(r.critical_difference.is_none());
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn csv_parsing() {
        let text = "dataset,A,B,C\nx,90,80,*\ny,70,,75\n";
        let t = RankTable::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(t.accuracies()[0], vec![Some(90.0), Some(80.0), None]);
        assert_eq!(t.accuracies()[1], vec![Some(70.0), None, Some(75.0)]);
        let ragged = "dataset,A,B\nx,90,80\ny,70\n";
        let err = RankTable::from_csv_reader(ragged.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }));
        let out_of_range = "dataset,A,B\nx,190,80\ny,70,1\n";
        assert!(RankTable::from_csv_reader(out_of_range.as_bytes()).is_err());
    }

    #[test]
    fn rounding_option() {
        let t = table(vec![
            vec![3.0, 2.0, 1.0],
            vec![1.0, 3.0, 2.0],
            vec![2.0, 1.0, 3.0],
        ]);
        assert_eq!(mean_ranks(&t, None), vec![2.0, 2.0, 2.0]);
        let t = table(vec![
            vec![3.0, 2.0, 1.0],
            vec![3.0, 1.0, 2.0],
            vec![2.0, 3.0, 1.0],
        ]);
        let raw = mean_ranks(&t, None);
        assert!((raw[0] - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(mean_ranks(&t, Some(2))[0], 1.33);
    }
}
