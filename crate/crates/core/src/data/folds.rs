use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// Train/test row indices for one fold, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold split.
///
/// Each class present in the data is shuffled with the seeded generator and
/// dealt round-robin over the folds, so per-fold class counts differ by at
/// most one. The second class starts dealing where the first stopped, which
/// keeps total fold sizes balanced as well.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<Vec<FoldSplit>> {
    if k < 2 {
        return Err(Error::Usage(format!("k-fold needs k >= 2, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; data.len()];
    let mut offset = 0;
    for class in [1i8, -1] {
        let mut idx: Vec<usize> = (0..data.len())
            .filter(|&i| data.labels()[i] == class)
            .collect();
        if idx.is_empty() {
            continue;
        }
        if idx.len() < k {
            return Err(Error::Usage(format!(
                "class {class:+} has {} samples, fewer than k = {k}",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for (pos, &i) in idx.iter().enumerate() {
            fold_of[i] = (offset + pos) % k;
        }
        offset = (offset + idx.len()) % k;
    }
    let splits = (0..k)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..data.len()).partition(|&i| fold_of[i] == f);
            FoldSplit { train, test }
        })
        .collect();
    Ok(splits)
}
