//! Cross-validated accuracy as Gaussian noise is added to training folds.
//!
//! cargo run --release --example noise_robustness

use wavecls::data::{synth_gaussians, NoiseConfig};
use wavecls::eval::{grid_search_cv, CvOptions, GridSpec};
use wavecls::model::ModelFamily;

fn main() -> wavecls::Result<()> {
    let data = synth_gaussians(80, 3.0, 2, 3)?;
    let family = ModelFamily::WaveSvmLinear;
    let grid = GridSpec {
        c: vec![0.1, 10.0],
        lambda: vec![1.0],
        a: vec![-1.0, 1.0],
        alpha: vec![1e-2],
        ..GridSpec::default_for(family)
    };
    for level in [0.0, 0.1, 0.2, 0.3] {
        let options = CvOptions {
            noise: (level > 0.0).then(|| NoiseConfig::new(level, 42)),
            ..CvOptions::default()
        };
        let report = grid_search_cv(&data, family, &grid, &options)?;
        println!(
            "noise {level:.2}: best accuracy {:.2}%",
            report.best_score.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
