//! Margin-based classification losses.
//!
//! Every loss here is a function of the margin residual `u = 1 - y f(x)`,
//! which is positive for samples inside the margin or misclassified.
//!
//! The wave loss `(1/λ)(1 - 1/(1 + λ u² e^{au}))` is the centre of the crate;
//! the remaining variants are the usual baselines (hinge, pinball, ramp,
//! squared hinge, smooth pinball, LINEX, RoBoSS) kept for comparison curves
//! and calibration checks.
//!
//! The wave term is evaluated through `z = ln(λ u² e^{au})`, so that the loss
//! is `σ(z)/λ` and its derivative is `(a + 2/u) σ(z) (1 - σ(z)) / λ`, where `σ`
//! is the logistic function. Both forms stay finite for any finite `u` and
//! collapse to their analytic limits (`1/λ` and `0`) once `e^{au}` leaves the
//! representable range.
//!
//! The derivative used throughout, including by both solvers, is
//! `u e^{au} (au + 2) / (1 + λ u² e^{au})²`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape `a` and bounding `λ` parameters of the wave loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub a: f64,
    pub lambda: f64,
}

impl WaveParams {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        let params = WaveParams { a, lambda };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wave shape a must be finite, got {}",
                self.a
            )));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wave bound lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Upper bound of the loss, approached as `λ u² e^{au}` grows.
    pub fn ceiling(&self) -> f64 {
        1.0 / self.lambda
    }

    /// `ln(λ u² e^{au})`; `-inf` at `u = 0`.
    #[inline]
    fn log_core(&self, u: f64) -> f64 {
        self.lambda.ln() + 2.0 * u.abs().ln() + self.a * u
    }

    /// Wave loss at a finite margin residual.
    #[inline]
    pub fn loss(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        logistic(self.log_core(u)) / self.lambda
    }

    /// First derivative of the wave loss with respect to `u`.
    #[inline]
    pub fn derivative(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let z = self.log_core(u);
        let d = (self.a + 2.0 / u) * logistic_slope(z) / self.lambda;
        if d.is_finite() {
            d
        } else {
            0.0
        }
    }
}

/// `1 / (1 + e^{-z})` without overflow for either sign of `z`.
#[inline]
fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `σ(z)(1 - σ(z))`, symmetric in `z`.
#[inline]
fn logistic_slope(z: f64) -> f64 {
    let e = (-z.abs()).exp();
    let d = 1.0 + e;
    e / (d * d)
}

/// A margin loss together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossSpec {
    Hinge,
    Pinball { tau: f64 },
    Ramp { theta: f64 },
    SquaredHinge,
    SmoothPinball { tau: f64 },
    Linex { a: f64 },
    Roboss { a: f64, lambda: f64 },
    Wave(WaveParams),
    ZeroOneLambda { lambda: f64 },
}

impl LossSpec {
    pub fn wave(a: f64, lambda: f64) -> Result<Self> {
        Ok(LossSpec::Wave(WaveParams::new(a, lambda)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            LossSpec::Hinge => "hinge",
            LossSpec::Pinball { .. } => "pinball",
            LossSpec::Ramp { .. } => "ramp",
            LossSpec::SquaredHinge => "squared-hinge",
            LossSpec::SmoothPinball { .. } => "smooth-pinball",
            LossSpec::Linex { .. } => "linex",
            LossSpec::Roboss { .. } => "roboss",
            LossSpec::Wave(_) => "wave",
            LossSpec::ZeroOneLambda { .. } => "zero-one-lambda",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            LossSpec::Hinge | LossSpec::SquaredHinge => Ok(()),
            LossSpec::Pinball { tau } | LossSpec::SmoothPinball { tau } => {
                if (0.0..=1.0).contains(&tau) {
                    Ok(())
                } else {
                    bad(format!("tau must lie in [0, 1], got {tau}"))
                }
            }
            LossSpec::Ramp { theta } => {
                if theta >= 1.0 && theta.is_finite() {
                    Ok(())
                } else {
                    bad(format!("ramp theta must be >= 1, got {theta}"))
                }
            }
            LossSpec::Linex { a } => {
                if a != 0.0 && a.is_finite() {
                    Ok(())
                } else {
                    bad(format!("linex a must be finite and non-zero, got {a}"))
                }
            }
            LossSpec::Roboss { a, lambda } => {
                if a > 0.0 && lambda > 0.0 && a.is_finite() && lambda.is_finite() {
                    Ok(())
                } else {
                    bad(format!(
                        "roboss needs a > 0 and lambda > 0, got a={a}, lambda={lambda}"
                    ))
                }
            }
            LossSpec::Wave(p) => p.validate(),
            LossSpec::ZeroOneLambda { lambda } => {
                if lambda > 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    bad(format!("lambda must be positive, got {lambda}"))
                }
            }
        }
    }

    /// Loss value at margin residual `u`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        check_finite(u)?;
        // `+ 0.0` folds negative zero into positive zero.
        let v = match *self {
            LossSpec::Hinge => u.max(0.0),
            LossSpec::Pinball { tau } => {
                if u > 0.0 {
                    u
                } else {
                    -tau * u
                }
            }
            LossSpec::Ramp { theta } => {
                if u >= theta {
                    theta
                } else if u > 0.0 {
                    u
                } else {
                    0.0
                }
            }
            LossSpec::SquaredHinge => {
                if u > 0.0 {
                    u * u
                } else {
                    0.0
                }
            }
            LossSpec::SmoothPinball { tau } => {
                let s = if u > 0.0 { tau * u } else { (1.0 - tau) * u };
                s * s
            }
            LossSpec::Linex { a } => {
                let au = a * u;
                // e^{au} - au - 1 grows without bound; overflow lands on +inf.
                au.exp_m1() - au
            }
            LossSpec::Roboss { a, lambda } => {
                if u > 0.0 {
                    let au = a * u;
                    let tail = (au + 1.0) * (-au).exp();
                    if tail.is_finite() {
                        lambda * (1.0 - tail)
                    } else {
                        lambda
                    }
                } else {
                    0.0
                }
            }
            LossSpec::Wave(p) => p.loss(u),
            LossSpec::ZeroOneLambda { lambda } => {
                if u > 0.0 {
                    1.0 / lambda
                } else {
                    0.0
                }
            }
        };
        Ok(v + 0.0)
    }

    /// First derivative in `u`. At kinks the left-hand (`u <= 0` branch)
    /// value is returned.
    pub fn derivative(&self, u: f64) -> Result<f64> {
        check_finite(u)?;
        let d = match *self {
            LossSpec::Hinge => {
                if u > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LossSpec::Pinball { tau } => {
                if u > 0.0 {
                    1.0
                } else {
                    -tau
                }
            }
            LossSpec::Ramp { theta } => {
                if u > 0.0 && u < theta {
                    1.0
                } else {
                    0.0
                }
            }
            LossSpec::SquaredHinge => {
                if u > 0.0 {
                    2.0 * u
                } else {
                    0.0
                }
            }
            LossSpec::SmoothPinball { tau } => {
                let c = if u > 0.0 { tau } else { 1.0 - tau };
                2.0 * c * c * u
            }
            LossSpec::Linex { a } => a * (a * u).exp_m1(),
            LossSpec::Roboss { a, lambda } => {
                if u > 0.0 {
                    let au = a * u;
                    let d = lambda * a * au * (-au).exp();
                    if d.is_finite() {
                        d
                    } else {
                        0.0
                    }
                } else {
                    0.0
                }
            }
            LossSpec::Wave(p) => p.derivative(u),
            LossSpec::ZeroOneLambda { .. } => 0.0,
        };
        Ok(d + 0.0)
    }
}

fn check_finite(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "margin residual must be finite, got {u}"
        )))
    }
}

pub fn eval_loss(spec: &LossSpec, u: f64) -> Result<f64> {
    spec.eval(u)
}

/// Closed-form derivative of the wave loss.
pub fn grad_wave(params: &WaveParams, u: f64) -> Result<f64> {
    check_finite(u)?;
    Ok(params.derivative(u))
}

/// Expected loss of score `f` when `P(y = 1 | x) = p`:
/// `L(1 - f) p + L(1 + f) (1 - p)`.
pub fn conditional_risk(spec: &LossSpec, f: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    Ok(spec.eval(1.0 - f)? * p + spec.eval(1.0 + f)? * (1.0 - p))
}

/// A conditional probability together with the candidate scores to scan.
#[derive(Debug, Clone)]
pub struct CalibrationQuery {
    p: f64,
    grid: Vec<f64>,
}

impl CalibrationQuery {
    pub fn new(p: f64, grid: Vec<f64>) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || p == 0.5 {
            return Err(Error::InvalidParameter(format!(
                "calibration needs p in (0, 1) \\ {{1/2}}, got {p}"
            )));
        }
        if grid.is_empty() {
            return Err(Error::Usage("calibration grid is empty".into()));
        }
        if grid.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        if !(grid[0] < 0.0 && grid[grid.len() - 1] > 0.0) {
            return Err(Error::InvalidParameter(
                "grid must contain both negative and positive scores".into(),
            ));
        }
        Ok(CalibrationQuery { p, grid })
    }

    /// Grid `lo, lo + step, ..., hi` built from integer offsets so the
    /// points do not drift.
    pub fn uniform(p: f64, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "bad grid range [{lo}, {hi}] with step {step}"
            )));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        let grid = (0..=n).map(|i| lo + i as f64 * step).collect();
        Self::new(p, grid)
    }

    /// `[-3, 3]` in steps of `0.01`.
    pub fn default_grid(p: f64) -> Result<Self> {
        let grid = (-300..=300).map(|i| i as f64 / 100.0).collect();
        Self::new(p, grid)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// Grid point minimising the conditional risk.
///
/// Exact ties go to the smaller `|f|`, then to the negative score.
pub fn calibration_argmin(spec: &LossSpec, query: &CalibrationQuery) -> Result<f64> {
    let mut best: Option<(f64, f64)> = None;
    for &f in &query.grid {
        let r = conditional_risk(spec, f, query.p)?;
        let better = match best {
            None => true,
            Some((bf, br)) => {
                r < br || (r == br && (f.abs() < bf.abs() || (f.abs() == bf.abs() && f < bf)))
            }
        };
        if better {
            best = Some((f, r));
        }
    }
    best.map(|(f, _)| f)
        .ok_or_else(|| Error::Usage("calibration grid is empty".into()))
}

/// Writes `u,loss[,grad]` rows for `points` evenly spaced residuals in
/// `[lo, hi]`, header first.
pub fn write_loss_curve<W: Write>(
    spec: &LossSpec,
    lo: f64,
    hi: f64,
    points: usize,
    with_grad: bool,
    mut out: W,
) -> Result<()> {
    spec.validate()?;
    if points < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "loss curve needs lo < hi and at least two points, got [{lo}, {hi}] x {points}"
        )));
    }
    let io = |e| Error::io("<loss curve>", e);
    if with_grad {
        writeln!(out, "u,loss,grad").map_err(io)?;
    } else {
        writeln!(out, "u,loss").map_err(io)?;
    }
    let span = hi - lo;
    let last = (points - 1) as f64;
    for i in 0..points {
        let u = lo + span * (i as f64) / last + 0.0;
        let loss = spec.eval(u)?;
        if with_grad {
            writeln!(out, "{u},{loss},{}", spec.derivative(u)?).map_err(io)?;
        } else {
            writeln!(out, "{u},{loss}").map_err(io)?;
        }
    }
    Ok(())
}
