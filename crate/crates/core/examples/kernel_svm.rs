//! Fits a Gaussian-kernel Wave-SVM to the XOR set.
//!
//! cargo run --release --example kernel_svm

use wavecls::data::synth_xor;
use wavecls::eval::accuracy;
use wavecls::kernels::KernelSpec;
use wavecls::losses::WaveParams;
use wavecls::wavesvm::{predict_kernel, train_kernel, AdamConfig};

fn main() -> wavecls::Result<()> {
    let data = synth_xor(200, 5)?;
    let cfg = AdamConfig {
        batch_size: 128,
        ..AdamConfig::new(100.0, WaveParams::new(1.0, 1.0)?)
    };
    let model = train_kernel(&data, &cfg, &KernelSpec::gaussian(1.0)?)?;
    let acc = accuracy(&predict_kernel(&model, data.features())?, data.labels())?;
    println!(
        "{} support samples, training accuracy {acc:.2}%",
        model.gamma.len()
    );
    Ok(())
}
