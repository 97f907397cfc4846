//! Four-fold grid search for the linear Wave-SVM over a small grid.
//!
//! cargo run --release --example grid_search

use wavecls::data::synth_gaussians;
use wavecls::eval::{grid_search_cv, CvOptions, GridSpec};
use wavecls::model::ModelFamily;

fn main() -> wavecls::Result<()> {
    let data = synth_gaussians(60, 2.5, 3, 7)?;
    let family = ModelFamily::WaveSvmLinear;
    let grid = GridSpec {
        c: vec![0.01, 1.0, 100.0],
        lambda: vec![0.5, 1.0],
        a: vec![-1.0, 1.0],
        alpha: vec![1e-3, 1e-2],
        ..GridSpec::default_for(family)
    };
    let report = grid_search_cv(&data, family, &grid, &CvOptions::default())?;
    for cell in &report.cells {
        let p = cell.params;
        println!(
            "C={:<6} lambda={:<4} a={:<3} alpha={:<6} -> {:.2}%",
            p.c.unwrap_or_default(),
            p.lambda,
            p.a,
            p.alpha.unwrap_or_default(),
            cell.score.unwrap_or(f64::NAN)
        );
    }
    println!("best {:?} at {:?}", report.best_score, report.best_params);
    Ok(())
}
