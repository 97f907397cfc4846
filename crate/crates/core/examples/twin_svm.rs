//! Linear and kernel Wave-TSVM on the XOR set. The linear planes cannot
//! separate XOR; the kernel planes can.
//!
//! cargo run --release --example twin_svm

use wavecls::data::synth_xor;
use wavecls::eval::accuracy;
use wavecls::kernels::KernelSpec;
use wavecls::losses::WaveParams;
use wavecls::wavetsvm::{predict_twin, train_twin_kernel, train_twin_linear, TwinConfig};

fn main() -> wavecls::Result<()> {
    let data = synth_xor(200, 5)?;
    let base = TwinConfig::symmetric(1.0, 1e-4, WaveParams::new(1.0, 1.0)?);
    let runs = [
        ("linear", train_twin_linear(&data, &base)?),
        (
            "gaussian",
            train_twin_kernel(&data, &base.with_kernel(KernelSpec::gaussian(1.0)?))?,
        ),
    ];
    for (name, model) in runs {
        let acc = accuracy(&predict_twin(&model, data.features())?, data.labels())?;
        println!(
            "{name:>8}: accuracy {acc:.2}%, planes {:?} / {:?}",
            model.positive_status, model.negative_status
        );
    }
    Ok(())
}
