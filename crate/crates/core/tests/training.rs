use nalgebra::{DMatrix, DVector};
use wavecls::data::{minmax_fit_apply, synth_gaussians, synth_xor, Dataset, Features};
use wavecls::eval::{accuracy, grid_search_cv, CvOptions, GridSpec};
use wavecls::kernels::{gram_matrix, KernelSpec};
use wavecls::losses::{grad_wave, WaveParams};
use wavecls::model::ModelFamily;
use wavecls::wavesvm::{
    objective_linear, predict_linear, train_kernel, train_linear, train_linear_traced, AdamConfig,
};
use wavecls::wavetsvm::{train_twin_kernel, train_twin_linear, TwinConfig, TwinModel};

fn adam(c: f64, a: f64, lambda: f64) -> AdamConfig {
    AdamConfig::new(c, WaveParams { a, lambda })
}

fn descent_fraction(data: &Dataset, base: AdamConfig) -> (usize, usize) {
    let (mut down, mut steps) = (0, 0);
    for seed in 0..40 {
        let cfg = AdamConfig { seed, ..base };
        let mut checkpoints = Vec::new();
        train_linear_traced(data, &cfg, |t, w| {
            if (t - 1) % 50 == 0 {
                checkpoints.push(objective_linear(w, data, cfg.c, &cfg.loss).unwrap());
            }
        })
        .unwrap();
        steps += checkpoints.windows(2).count();
        down += checkpoints.windows(2).filter(|w| w[1] <= w[0]).count();
    }
    (down, steps)
}

#[test]
fn objective_mostly_decreases_at_checkpoints() {
    let data = synth_gaussians(100, 10.0, 2, 1).unwrap();
    let small_step = AdamConfig {
        alpha: 1e-4,
        ..adam(1.0, 1.0, 1.0)
    };
    let full_batch = AdamConfig {
        batch_size: data.len(),
        ..adam(1.0, 1.0, 1.0)
    };
    for base in [small_step, full_batch] {
        let (down, steps) = descent_fraction(&data, base);
        assert!(steps > 0);
        assert!(down * 10 >= steps * 9, "{down}/{steps} non-increasing");
    }
}

#[test]
fn training_terminates_across_loss_shapes() {
    let data = synth_gaussians(50, 3.0, 3, 2).unwrap();
    for lambda in [0.1, 1.0, 2.0] {
        for a in [-2.0, 0.0, 5.0] {
            let cfg = AdamConfig {
                max_iter: 500,
                ..adam(1.0, a, lambda)
            };
            let m = train_linear(&data, &cfg).unwrap();
            assert!(m.iterations_run <= 500);
            assert!(
                m.weights.iter().all(|w| w.is_finite()),
                "a={a} lambda={lambda}"
            );
            let k = train_kernel(&data, &cfg, &KernelSpec::gaussian(1.0).unwrap()).unwrap();
            assert!(k.gamma.iter().all(|g| g.is_finite()));
        }
    }
}

#[test]
fn seeded_training_is_byte_identical() {
    let data = synth_xor(40, 9).unwrap();
    let cfg = AdamConfig {
        seed: 77,
        ..adam(10.0, 1.0, 1.0)
    };
    let json = |v: &dyn erased::Json| v.to_json();
    let a = train_linear(&data, &cfg).unwrap();
    let b = train_linear(&data, &cfg).unwrap();
    assert_eq!(json(&a), json(&b));
    let kernel = KernelSpec::gaussian(1.0).unwrap();
    let a = train_kernel(&data, &cfg, &kernel).unwrap();
    let b = train_kernel(&data, &cfg, &kernel).unwrap();
    assert_eq!(json(&a), json(&b));
    let other = train_kernel(&data, &AdamConfig { seed: 78, ..cfg }, &kernel).unwrap();
    assert_ne!(json(&a), json(&other));
}

mod erased {
    pub trait Json {
        fn to_json(&self) -> String;
    }
    impl<T: serde::Serialize> Json for T {
        fn to_json(&self) -> String {
            serde_json::to_string(self).unwrap()
        }
    }
}

#[test]
fn grid_search_does_not_depend_on_worker_count() {
    let data = synth_gaussians(30, 3.0, 2, 4).unwrap();
    let grid = GridSpec {
        c: vec![0.1, 1.0, 10.0],
        lambda: vec![0.5, 1.0],
        a: vec![-1.0, 1.0],
        alpha: vec![1e-3, 1e-2],
        ..GridSpec::default_for(ModelFamily::WaveSvmLinear)
    };
    let run = |jobs| {
        let opts = CvOptions {
            seed: 5,
            jobs,
            ..CvOptions::default()
        };
        let mut out = Vec::new();
        grid_search_cv(&data, ModelFamily::WaveSvmLinear, &grid, &opts)
            .unwrap()
            .write_json(&mut out)
            .unwrap();
        out
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(3));
}

fn augmented(rows: &[&[f64]]) -> DMatrix<f64> {
    let n = rows[0].len();
    DMatrix::from_fn(
        n + 1,
        rows.len(),
        |i, j| if i < n { rows[j][i] } else { 1.0 },
    )
}

fn class_rows(data: &Dataset, label: i8) -> Vec<&[f64]> {
    (0..data.len())
        .filter(|&i| data.labels()[i] == label)
        .map(|i| data.features().row(i))
        .collect()
}

fn s_of(margins: &DVector<f64>, loss: &WaveParams) -> DVector<f64> {
    margins.map(|m| grad_wave(loss, m).unwrap())
}

/// One step of each plane's fixed-point map, computed with dense inverses.
fn linear_step(data: &Dataset, cfg: &TwinConfig, m: &TwinModel) -> (f64, f64) {
    let g = augmented(&class_rows(data, 1));
    let h = augmented(&class_rows(data, -1));
    let dim = g.nrows();
    let w1 = DVector::from_vec(m.positive_plane.clone());
    let w2 = DVector::from_vec(m.negative_plane.clone());
    let a1 = (&g * g.transpose() + DMatrix::identity(dim, dim) * cfg.c1)
        .try_inverse()
        .unwrap();
    let a2 = (&h * h.transpose() + DMatrix::identity(dim, dim) * cfg.c3)
        .try_inverse()
        .unwrap();
    let m1 = h.tr_mul(&w1).add_scalar(1.0);
    let m2 = g.tr_mul(&w2).map(|v| 1.0 - v);
    let next1 = -(a1 * (&h * s_of(&m1, &cfg.loss))) * cfg.c2;
    let next2 = (a2 * (&g * s_of(&m2, &cfg.loss))) * cfg.c4;
    ((next1 - w1).amax(), (next2 - w2).amax())
}

#[test]
fn converged_linear_planes_are_fixed_points() {
    let data = synth_gaussians(40, 4.0, 3, 8).unwrap();
    let (data, _, _) = minmax_fit_apply(&data, &[]).unwrap();
    for (c1, c2, a) in [
        (1.0, 1e-3, 1.0),
        (0.1, 1e-2, 0.0),
        (10.0, 0.1, -1.0),
        (1.0, 1e-4, 0.0),
    ] {
        let cfg = TwinConfig {
            eta: 1e-9,
            max_iter: 500,
            ..TwinConfig::symmetric(c1, c2, WaveParams { a, lambda: 1.0 })
        };
        let m = train_twin_linear(&data, &cfg).unwrap();
        assert!(m.converged(), "c1={c1} c2={c2} a={a}");
        let (d1, d2) = linear_step(&data, &cfg, &m);
        assert!(d1 < 10.0 * cfg.eta && d2 < 10.0 * cfg.eta, "{d1} {d2}");
    }
}

#[test]
fn converged_kernel_planes_are_fixed_points() {
    let data = synth_xor(15, 3).unwrap();
    let kernel = KernelSpec::gaussian(1.0).unwrap();
    let cfg = TwinConfig {
        eta: 1e-9,
        max_iter: 500,
        ..TwinConfig::symmetric(
            1.0,
            1e-4,
            WaveParams {
                a: 1.0,
                lambda: 1.0,
            },
        )
        .with_kernel(kernel)
    };
    let m = train_twin_kernel(&data, &cfg).unwrap();
    assert!(m.converged());
    let x = m.training_rows.clone().unwrap();
    let l = x.n_rows();
    let l_pos = data.count_positive();
    let cols = |range: std::ops::Range<usize>| {
        let part = x.select_rows(&range.collect::<Vec<_>>());
        let k = gram_matrix(&kernel, &x, &part).unwrap();
        DMatrix::from_fn(
            l + 1,
            part.n_rows(),
            |i, j| if i < l { k[(i, j)] } else { 1.0 },
        )
    };
    let mp = cols(0..l_pos);
    let mn = cols(l_pos..l);
    let dim = l + 1;
    let v1 = DVector::from_vec(m.positive_plane.clone());
    let v2 = DVector::from_vec(m.negative_plane.clone());
    let a1 = (&mp * mp.transpose() + DMatrix::identity(dim, dim) * cfg.c1)
        .try_inverse()
        .unwrap();
    let a2 = (&mn * mn.transpose() + DMatrix::identity(dim, dim) * cfg.c3)
        .try_inverse()
        .unwrap();
    let next1 = -(a1 * (&mn * s_of(&mn.tr_mul(&v1).add_scalar(1.0), &cfg.loss))) * cfg.c2;
    let next2 = (a2 * (&mp * s_of(&mp.tr_mul(&v2).map(|v| 1.0 - v), &cfg.loss))) * cfg.c4;
    assert!((next1 - v1).amax() < 10.0 * cfg.eta);
    assert!((next2 - v2).amax() < 10.0 * cfg.eta);
}

#[test]
fn mirrored_classes_give_reflected_planes() {
    let pos = [[1.0, 2.0], [2.0, 0.5], [1.5, 1.5], [0.5, 1.0], [2.5, 2.0]];
    let rows: Vec<Vec<f64>> = pos
        .iter()
        .map(|r| r.to_vec())
        .chain(pos.iter().map(|r| vec![-r[0], -r[1]]))
        .collect();
    let labels = [vec![1; 5], vec![-1; 5]].concat();
    let data = Dataset::new(Features::from_rows(rows).unwrap(), labels).unwrap();
    for a in [0.0, 1.5] {
        let cfg = TwinConfig::symmetric(0.7, 0.3, WaveParams { a, lambda: 1.0 });
        let m = train_twin_linear(&data, &cfg).unwrap();
        let (w1, w2) = (&m.positive_plane, &m.negative_plane);
        assert!((w1[0] - w2[0]).abs() <= 1e-12 && (w1[1] - w2[1]).abs() <= 1e-12);
        assert!((w1[2] + w2[2]).abs() <= 1e-12);
    }
}

#[test]
fn linear_wave_svm_separates_two_gaussians() {
    let data = synth_gaussians(100, 10.0, 2, 1).unwrap();
    let m = train_linear(&data, &adam(1.0, 1.0, 1.0)).unwrap();
    let acc = accuracy(&predict_linear(&m, data.features()).unwrap(), data.labels()).unwrap();
    assert_eq!(acc, 100.0);
}
