use std::collections::BTreeSet;
use std::io::Write;

use proptest::prelude::*;
use wavecls::data::{
    inject_gaussian_noise, load_csv, minmax_fit_apply, stratified_kfold, CsvOptions, Dataset,
    Features, LabelColumn, MinMaxScaler, NoiseConfig, NoiseMode,
};
use wavecls::{Error, ErrorClass};

fn labelled() -> impl Strategy<Value = Dataset> {
    (4..60usize, 1..5usize).prop_flat_map(|(l, n)| {
        (
            prop::collection::vec(-100.0..100.0f64, l * n),
            prop::collection::vec(any::<bool>(), l),
        )
            .prop_map(move |(x, y)| {
                let labels = y.into_iter().map(|p| if p { 1 } else { -1 }).collect();
                Dataset::new(Features::new(l, n, x).unwrap(), labels).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn folds_partition_the_rows(data in labelled(), k in 2..5usize, seed in any::<u64>()) {
        let smallest = data.count_positive().min(data.count_negative());
        prop_assume!(smallest == 0 || smallest >= k);
        prop_assume!(data.count_positive().max(data.count_negative()) >= k);
        let folds = stratified_kfold(&data, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut seen = BTreeSet::new();
        for f in &folds {
            let train: BTreeSet<usize> = f.train.iter().copied().collect();
            let test: BTreeSet<usize> = f.test.iter().copied().collect();
            prop_assert_eq!(train.len(), f.train.len());
            prop_assert!(train.is_disjoint(&test));
            prop_assert_eq!(train.len() + test.len(), data.len());
            for &i in &f.test {
                prop_assert!(seen.insert(i), "row {} in two test folds", i);
            }
        }
        prop_assert_eq!(seen.len(), data.len());
    }

    #[test]
    fn folds_are_stratified(data in labelled(), seed in any::<u64>()) {
        let (pos, neg) = (data.count_positive(), data.count_negative());
        prop_assume!(pos >= 4 && neg >= 4);
        for f in stratified_kfold(&data, 4, seed).unwrap() {
            let p = f.test.iter().filter(|&&i| data.labels()[i] == 1).count();
            prop_assert!(p == pos / 4 || p == pos.div_ceil(4));
        }
    }

    #[test]
    fn scaled_training_data_lies_in_unit_box(data in labelled(), holdout in labelled()) {
        prop_assume!(holdout.n_features() == data.n_features());
        let (train, _, _) = minmax_fit_apply(&data, &[&holdout]).unwrap();
        for v in train.features().as_slice() {
            prop_assert!((0.0..=1.0).contains(v), "{}", v);
        }
    }

    #[test]
    fn noise_touches_the_expected_cell_count(
        data in labelled(),
        level in 0.01..1.0f64,
        seed in any::<u64>(),
    ) {
        let cfg = NoiseConfig { level, seed, mode: NoiseMode::CellFraction };
        let noisy = inject_gaussian_noise(&data, &cfg).unwrap();
        let x = data.features();
        let changed = x
            .as_slice()
            .iter()
            .zip(noisy.features().as_slice())
            .filter(|(a, b)| a != b)
            .count();
        // Cells that land in constant columns are drawn but stay as they are,
        // so the count is bounded by the draw size and by the non-constant
        // cells; with continuous inputs every column varies.
        let cells = x.n_rows() * x.n_cols();
        let constant_cols = (0..x.n_cols())
            .filter(|&j| (0..x.n_rows()).all(|i| x.get(i, j) == x.get(0, j)))
            .count();
        let expected = cfg.cell_count(cells);
        prop_assert!(changed <= expected);
        if constant_cols == 0 {
            prop_assert_eq!(changed, expected);
        }
        prop_assert_eq!(noisy.labels(), data.labels());
    }

    #[test]
    fn noise_is_seeded(data in labelled(), seed in any::<u64>()) {
        let cfg = NoiseConfig::new(0.3, seed);
        prop_assert_eq!(
            inject_gaussian_noise(&data, &cfg).unwrap(),
            inject_gaussian_noise(&data, &cfg).unwrap()
        );
    }

    #[test]
    fn csv_round_trip(data in labelled()) {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        data.write_csv(&mut file).unwrap();
        file.flush().unwrap();
        let back = load_csv(file.path(), &LabelColumn::parse("label"), "1", &CsvOptions::default()).unwrap();
        prop_assert_eq!(back.labels(), data.labels());
        prop_assert_eq!(back.features(), data.features());
    }
}

#[test]
fn noise_count_excludes_constant_columns() {
    // Column 1 is constant; every cell is drawn at level 1.
    let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 3.0]).collect();
    let data = Dataset::new(
        Features::from_rows(rows).unwrap(),
        vec![1, -1, 1, -1, 1, -1, 1, -1, 1, -1],
    )
    .unwrap();
    let noisy = inject_gaussian_noise(&data, &NoiseConfig::new(1.0, 5)).unwrap();
    let changed: Vec<(usize, usize)> = (0..10)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .filter(|&(i, j)| noisy.features().get(i, j) != data.features().get(i, j))
        .collect();
    assert_eq!(changed.len(), 10);
    assert!(changed.iter().all(|&(_, j)| j == 0));
}

#[test]
fn scaler_uses_training_statistics_only() {
    let train = Dataset::new(
        Features::from_rows(vec![vec![0.0], vec![10.0]]).unwrap(),
        vec![1, -1],
    )
    .unwrap();
    let test = Dataset::new(
        Features::from_rows(vec![vec![20.0], vec![-5.0]]).unwrap(),
        vec![1, -1],
    )
    .unwrap();
    let scaler = MinMaxScaler::fit(&train).unwrap();
    let t = scaler.transform(&test).unwrap();
    assert_eq!(t.features().as_slice(), &[2.0, -0.5]);
}

#[test]
fn loader_reports_position_of_bad_cell() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "a,b,y\n1,2,1\n3,oops,0").unwrap();
    let err = load_csv(
        file.path(),
        &LabelColumn::parse("y"),
        "1",
        &CsvOptions::default(),
    )
    .unwrap_err();
    assert!(
        matches!(
            err,
            Error::Parse {
                row: 3,
                column: 2,
                ..
            }
        ),
        "{err}"
    );
    assert_eq!(err.class(), ErrorClass::Data);
}

#[test]
fn loader_maps_labels_by_value() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "cls,x\nyes,1\nno,2\nmaybe,3").unwrap();
    let d = load_csv(
        file.path(),
        &LabelColumn::Index(0),
        "yes",
        &CsvOptions::default(),
    )
    .unwrap();
    assert_eq!(d.labels(), &[1, -1, -1]);
    assert_eq!(d.features().as_slice(), &[1.0, 2.0, 3.0]);
}
