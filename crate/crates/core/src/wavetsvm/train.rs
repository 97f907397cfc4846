use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::smw::{condition_report, SmwSolver};
use super::{s_vector_into, PlaneStatus, TwinConfig, TwinModel, TwinParams};
use crate::data::{Dataset, Features};
use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, KernelSpec};
use crate::losses::WaveParams;

/// Solver for `(PPᵀ + cI) w = r`, either a direct factorisation of the
/// square matrix or the SMW form when `P` is tall.
enum PlaneSolver {
    Dense(Cholesky<f64, Dyn>),
    Smw(SmwSolver),
}

impl PlaneSolver {
    fn dense(p: &DMatrix<f64>, c: f64) -> Result<Self> {
        let mut a = p * p.transpose();
        for i in 0..a.nrows() {
            a[(i, i)] += c;
        }
        let chol = Cholesky::new(a.clone()).ok_or_else(|| {
            Error::Numeric(format!(
                "plane system is not positive definite; {}",
                condition_report(&a)
            ))
        })?;
        Ok(PlaneSolver::Dense(chol))
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        match self {
            PlaneSolver::Dense(chol) => chol.solve(rhs),
            PlaneSolver::Smw(smw) => smw.apply(rhs),
        }
    }
}

/// One plane's fixed-point problem. For the plane hugging the positive
/// class `sign = +1`, the margins are `1 + Oᵀw` and the update is
/// `w ← -S⁻¹(penalty · O s)`; for the negative plane `sign = -1`, margins are
/// `1 - Oᵀw` and the update is `w ← S⁻¹(penalty · O s)`. `O` holds the
/// opposite class as columns.
struct PlaneProblem<'a> {
    solver: PlaneSolver,
    opposite: &'a DMatrix<f64>,
    penalty: f64,
    sign: f64,
    loss: WaveParams,
}

impl PlaneProblem<'_> {
    fn step(&self, w: &DVector<f64>, margins: &mut [f64], s: &mut [f64]) -> DVector<f64> {
        let proj = self.opposite.tr_mul(w);
        for (m, p) in margins.iter_mut().zip(proj.iter()) {
            *m = 1.0 + self.sign * p;
        }
        s_vector_into(margins, &self.loss, s);
        let rhs = self.opposite * DVector::from_column_slice(s) * self.penalty;
        let sol = self.solver.solve(&rhs);
        sol * -self.sign
    }

    fn run(&self, eta: f64, max_iter: usize) -> Result<(Vec<f64>, PlaneStatus)> {
        let dim = self.opposite.nrows();
        let n_opp = self.opposite.ncols();
        let mut margins = vec![0.0; n_opp];
        let mut s = vec![0.0; n_opp];
        let mut w = DVector::zeros(dim);
        let mut before: Option<DVector<f64>> = None;
        let mut status = PlaneStatus::default();
        for it in 1..=max_iter {
            let next = self.step(&w, &mut margins, &mut s);
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numeric(format!(
                    "plane iterate became non-finite at iteration {it}"
                )));
            }
            let change = (&next - &w).amax();
            let two_back = before.as_ref().map(|b| (&next - b).amax());
            status.iterations = it;
            status.final_change = change;
            before = Some(std::mem::replace(&mut w, next));
            if change < eta {
                status.converged = true;
                break;
            }
            if two_back.is_some_and(|d| d < eta) {
                status.oscillating = true;
                break;
            }
        }
        Ok((w.iter().copied().collect(), status))
    }
}

fn check_classes(data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Usage("cannot train on an empty dataset".into()));
    }
    if !data.has_both_classes() {
        return Err(Error::Data(
            "twin models need samples from both classes".into(),
        ));
    }
    Ok(())
}

/// Splits rows by class and returns `[X₊; X₋]` together with `l₊`.
fn ordered_rows(data: &Dataset) -> (Features, usize) {
    let pos: Vec<usize> = (0..data.len()).filter(|&i| data.labels()[i] == 1).collect();
    let neg = (0..data.len()).filter(|&i| data.labels()[i] == -1);
    let idx: Vec<usize> = pos.iter().copied().chain(neg).collect();
    (data.features().select_rows(&idx), pos.len())
}

/// Columns `[xᵢ; 1]` for rows `range` of `x`.
fn augmented_columns(x: &Features, range: std::ops::Range<usize>) -> DMatrix<f64> {
    let n = x.n_cols();
    let mut out = DMatrix::zeros(n + 1, range.len());
    for (c, i) in range.enumerate() {
        for (j, &v) in x.row(i).iter().enumerate() {
            out[(j, c)] = v;
        }
        out[(n, c)] = 1.0;
    }
    out
}

/// Linear Wave-TSVM: two nonparallel planes fitted by fixed-point
/// iteration from zero, each system factored once.
pub fn train_twin_linear(data: &Dataset, config: &TwinConfig) -> Result<TwinModel> {
    config.validate()?;
    check_classes(data)?;
    let (x, l_pos) = ordered_rows(data);
    let g = augmented_columns(&x, 0..l_pos);
    let h = augmented_columns(&x, l_pos..x.n_rows());

    let plane1 = PlaneProblem {
        solver: PlaneSolver::dense(&g, config.c1)?,
        opposite: &h,
        penalty: config.c2,
        sign: 1.0,
        loss: config.loss,
    };
    let (w1, st1) = plane1.run(config.eta, config.max_iter)?;
    let plane2 = PlaneProblem {
        solver: PlaneSolver::dense(&h, config.c3)?,
        opposite: &g,
        penalty: config.c4,
        sign: -1.0,
        loss: config.loss,
    };
    let (w2, st2) = plane2.run(config.eta, config.max_iter)?;

    let norms = [norm_without_bias(&w1), norm_without_bias(&w2)];
    Ok(TwinModel {
        kernel: KernelSpec::Linear,
        params: TwinParams::from_config(config, None),
        positive_plane: w1,
        negative_plane: w2,
        training_rows: None,
        plane_norms: norms,
        positive_status: st1,
        negative_status: st2,
    })
}

fn norm_without_bias(w: &[f64]) -> f64 {
    w[..w.len() - 1].iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `[K(X_part, X)ᵀ; eᵀ]`: one column per sample of the part, `l + 1` rows.
fn kernel_columns(kernel: &KernelSpec, part: &Features, all: &Features) -> Result<DMatrix<f64>> {
    let k = gram_matrix(kernel, all, part)?;
    let mut out = DMatrix::zeros(all.n_rows() + 1, part.n_rows());
    out.view_mut((0, 0), (all.n_rows(), part.n_rows()))
        .copy_from(&k);
    out.row_mut(all.n_rows()).fill(1.0);
    Ok(out)
}

/// Kernel Wave-TSVM. The `(l+1) × (l+1)` plane systems are never formed;
/// their inverses act through SMW with inner systems of size `l₊` and `l₋`.
pub fn train_twin_kernel(data: &Dataset, config: &TwinConfig) -> Result<TwinModel> {
    config.validate()?;
    let kernel = config
        .kernel
        .ok_or_else(|| Error::Usage("kernel twin model needs a kernel".into()))?;
    check_classes(data)?;
    let (x, l_pos) = ordered_rows(data);
    let l = x.n_rows();
    let pos = x.select_rows(&(0..l_pos).collect::<Vec<_>>());
    let neg = x.select_rows(&(l_pos..l).collect::<Vec<_>>());
    let m = kernel_columns(&kernel, &pos, &x)?;
    let n = kernel_columns(&kernel, &neg, &x)?;

    let plane1 = PlaneProblem {
        solver: PlaneSolver::Smw(SmwSolver::new(m.clone(), config.c1)?),
        opposite: &n,
        penalty: config.c2,
        sign: 1.0,
        loss: config.loss,
    };
    let (v1, st1) = plane1.run(config.eta, config.max_iter)?;
    let plane2 = PlaneProblem {
        solver: PlaneSolver::Smw(SmwSolver::new(n.clone(), config.c3)?),
        opposite: &m,
        penalty: config.c4,
        sign: -1.0,
        loss: config.loss,
    };
    let (v2, st2) = plane2.run(config.eta, config.max_iter)?;

    let mut full = DMatrix::zeros(l, l);
    full.columns_mut(0, l_pos).copy_from(&m.rows(0, l));
    full.columns_mut(l_pos, l - l_pos).copy_from(&n.rows(0, l));
    let norms = [quad_norm(&full, &v1), quad_norm(&full, &v2)];
    Ok(TwinModel {
        kernel,
        params: TwinParams::from_config(config, kernel.sigma()),
        positive_plane: v1,
        negative_plane: v2,
        training_rows: Some(x),
        plane_norms: norms,
        positive_status: st1,
        negative_status: st2,
    })
}

/// `√(vᵀKv)` over the non-bias part of `v`, radicand floored at `1e-12`.
/// An all-zero coefficient part gives 0 so prediction can flag it.
fn quad_norm(k: &DMatrix<f64>, v: &[f64]) -> f64 {
    let l = k.nrows();
    let coef = DVector::from_column_slice(&v[..l]);
    if coef.iter().all(|&c| c == 0.0) {
        return 0.0;
    }
    coef.dot(&(k * &coef)).max(1e-12).sqrt()
}
