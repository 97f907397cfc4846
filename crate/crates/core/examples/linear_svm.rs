//! Trains a linear Wave-SVM on two separated Gaussians.
//!
//! cargo run --example linear_svm

use wavecls::data::synth_gaussians;
use wavecls::eval::accuracy;
use wavecls::losses::WaveParams;
use wavecls::wavesvm::{predict_linear, train_linear, AdamConfig};

fn main() -> wavecls::Result<()> {
    let data = synth_gaussians(100, 10.0, 2, 1)?;
    let cfg = AdamConfig::new(1.0, WaveParams::new(1.0, 1.0)?);
    let model = train_linear(&data, &cfg)?;
    let acc = accuracy(&predict_linear(&model, data.features())?, data.labels())?;
    println!("weights {:?}", model.weights);
    println!("{} iterations", model.iterations_run);
    println!("training accuracy {acc:.2}%");
    Ok(())
}
