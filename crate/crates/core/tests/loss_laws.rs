use proptest::prelude::*;
use wavecls::losses::{
    calibration_argmin, eval_loss, grad_wave, CalibrationQuery, LossSpec, WaveParams,
};

/// Wave loss straight from its definition.
fn wave_direct(a: f64, lambda: f64, u: f64) -> f64 {
    let core = lambda * u * u * (a * u).exp();
    (1.0 - 1.0 / (1.0 + core)) / lambda
}

/// `1/λ - L(u)`, accurate where the loss is close to its ceiling.
fn wave_gap(a: f64, lambda: f64, u: f64) -> f64 {
    1.0 / (lambda * (1.0 + lambda * u * u * (a * u).exp()))
}

/// Central difference with a step matched to the local curvature scale.
/// Saturated points difference the gap instead of the loss itself.
fn wave_fd(a: f64, lambda: f64, u: f64) -> f64 {
    let h = 1e-4 * u.abs() / (2.0 + a.abs() * u.abs());
    if wave_direct(a, lambda, u) * lambda > 0.5 {
        -(wave_gap(a, lambda, u + h) - wave_gap(a, lambda, u - h)) / (2.0 * h)
    } else {
        (wave_direct(a, lambda, u + h) - wave_direct(a, lambda, u - h)) / (2.0 * h)
    }
}

fn rel_err(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

fn wave(a: f64, lambda: f64) -> LossSpec {
    LossSpec::Wave(WaveParams { a, lambda })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wave_is_bounded(u in -5.0..5.0f64, a in -3.0..3.0f64, lambda in 0.1..2.0f64) {
        let l = eval_loss(&wave(a, lambda), u).unwrap();
        prop_assert!(l >= 0.0);
        prop_assert!(l < 1.0 / lambda);
    }

    #[test]
    fn wave_never_exceeds_ceiling_far_out(u in -1e6..1e6f64, a in -5.0..5.0f64, lambda in 0.01..10.0f64) {
        let spec = wave(a, lambda);
        let l = eval_loss(&spec, u).unwrap();
        prop_assert!((0.0..=1.0 / lambda).contains(&l));
        prop_assert!(spec.derivative(u).unwrap().is_finite());
    }

    #[test]
    fn wave_matches_definition(u in -5.0..5.0f64, a in -3.0..3.0f64, lambda in 0.1..2.0f64) {
        let l = eval_loss(&wave(a, lambda), u).unwrap();
        prop_assert!((l - wave_direct(a, lambda, u)).abs() <= 1e-12 / lambda);
    }

    #[test]
    fn grad_wave_matches_finite_differences(
        u in -5.0..5.0f64,
        a in -3.0..3.0f64,
        lambda in 0.1..2.0f64,
    ) {
        prop_assume!(u.abs() > 1e-6);
        let g = grad_wave(&WaveParams { a, lambda }, u).unwrap();
        let fd = wave_fd(a, lambda, u);
        prop_assert!(rel_err(g, fd) <= 1e-6, "u={u} a={a} lambda={lambda}: {g} vs {fd}");
    }

    #[test]
    fn one_sided_quotients_agree(u in -10.0..10.0f64, a in -3.0..3.0f64, lambda in 0.1..2.0f64) {
        let spec = wave(a, lambda);
        let h = 1e-7;
        let f0 = eval_loss(&spec, u).unwrap();
        let right = (eval_loss(&spec, u + h).unwrap() - f0) / h;
        let left = (f0 - eval_loss(&spec, u - h).unwrap()) / h;
        prop_assert!((right - left).abs() <= 1e-5, "u={u}: {left} vs {right}");
    }

    #[test]
    fn pinball_zero_is_hinge(u in -5.0..5.0f64) {
        let p = LossSpec::Pinball { tau: 0.0 };
        prop_assert_eq!(eval_loss(&p, u).unwrap(), eval_loss(&LossSpec::Hinge, u).unwrap());
        prop_assert_eq!(p.derivative(u).unwrap(), LossSpec::Hinge.derivative(u).unwrap());
    }

    #[test]
    fn smooth_pinball_one_is_squared_hinge(u in -5.0..5.0f64) {
        let p = LossSpec::SmoothPinball { tau: 1.0 };
        let s = LossSpec::SquaredHinge;
        prop_assert_eq!(eval_loss(&p, u).unwrap(), eval_loss(&s, u).unwrap());
        prop_assert_eq!(p.derivative(u).unwrap(), s.derivative(u).unwrap());
    }

    #[test]
    fn calibration_sign_on_random_p(p in 0.01..0.99f64) {
        prop_assume!((p - 0.5).abs() > 0.02);
        let q = CalibrationQuery::default_grid(p).unwrap();
        let f = calibration_argmin(&wave(1.0, 1.0), &q).unwrap();
        prop_assert_eq!(f > 0.0, p > 0.5);
    }
}

#[test]
fn wave_gap_shrinks_as_a_grows() {
    let us = [-2.0, -1.0, -0.1, 0.1, 1.0, 2.0];
    let steps = [5.0, 10.0, 20.0, 50.0];
    for lambda in [0.5, 1.0, 2.0] {
        let target = LossSpec::ZeroOneLambda { lambda };
        for u in us {
            let gaps: Vec<f64> = steps
                .iter()
                .map(|&a| {
                    (eval_loss(&wave(a, lambda), u).unwrap() - eval_loss(&target, u).unwrap()).abs()
                })
                .collect();
            assert!(
                gaps.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0),
                "lambda={lambda} u={u}: {gaps:?}"
            );
            if u.abs() >= 1.0 || u < 0.0 {
                assert!(gaps[3] < 1e-3, "lambda={lambda} u={u}: {gaps:?}");
            }
            let far = (eval_loss(&wave(400.0, lambda), u).unwrap()
                - eval_loss(&target, u).unwrap())
            .abs();
            assert!(far < 1e-3, "lambda={lambda} u={u}: {far}");
        }
    }
}

#[test]
fn gap_at_small_positive_margin_follows_closed_form() {
    // At u = 0.1 the distance to the step is 1/(λ(1 + λu²e^{au})).
    for (a, lambda) in [(50.0, 1.0), (50.0, 2.0), (20.0, 0.5)] {
        let l = eval_loss(&wave(a, lambda), 0.1).unwrap();
        let gap = 1.0 / lambda - l;
        assert!(rel_err(gap, wave_gap(a, lambda, 0.1)) < 1e-12);
    }
}

#[test]
fn calibration_sign_on_decile_grid() {
    for (a, lambda) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
        for k in 1..=9 {
            if k == 5 {
                continue;
            }
            let p = f64::from(k) / 10.0;
            let q = CalibrationQuery::default_grid(p).unwrap();
            let f = calibration_argmin(&wave(a, lambda), &q).unwrap();
            assert_eq!(
                f.signum(),
                (p - 0.5).signum(),
                "a={a} lambda={lambda} p={p}"
            );
        }
    }
}
