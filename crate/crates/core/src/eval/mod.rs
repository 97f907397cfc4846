//! Accuracy, cross-validated grid search and rank statistics.

mod grid;
mod stats;

pub use grid::{grid_search_cv, CellResult, CvOptions, CvReport, FoldScore, GridSpec};
pub use stats::{
    friedman_test, mean_ranks, nemenyi_cd, sign_test_threshold, stat_report, win_tie_loss,
    RankTable, StatReport, WinTieLoss,
};

use crate::error::{ensure_dims, Error, Result};

/// Percentage of matching labels.
pub fn accuracy(pred: &[i8], truth: &[i8]) -> Result<f64> {
    ensure_dims(truth.len(), pred.len())?;
    if truth.is_empty() {
        return Err(Error::Usage("accuracy of an empty prediction set".into()));
    }
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(100.0 * hits as f64 / truth.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[1, -1, 1], &[1, -1, 1]).unwrap(), 100.0);
        assert_eq!(accuracy(&[1, -1], &[-1, 1]).unwrap(), 0.0);
        // TP=3, TN=2, FP=1, FN=2.
        let truth = [1, 1, 1, -1, -1, -1, 1, 1];
        let pred = [1, 1, 1, -1, -1, 1, -1, -1];
        assert_eq!(accuracy(&pred, &truth).unwrap(), 62.5);
        assert!(matches!(accuracy(&[], &[]), Err(Error::Usage(_))));
        assert!(accuracy(&[1], &[1, 1]).is_err());
    }
}
