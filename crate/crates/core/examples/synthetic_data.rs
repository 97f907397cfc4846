//! Writes the two-Gaussian and XOR toy sets as CSV.
//!
//! cargo run --example synthetic_data -- [out_dir]

use std::fs::File;
use std::path::PathBuf;

use wavecls::data::{synth_gaussians, synth_xor};

fn main() -> wavecls::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let sets = [
        ("gaussians300.csv", synth_gaussians(150, 10.0, 2, 11)?),
        ("xor800.csv", synth_xor(200, 5)?),
    ];
    for (name, data) in sets {
        let path = dir.join(name);
        let file = File::create(&path).expect("output directory is writable");
        data.write_csv(file)?;
        println!(
            "{}: {} samples, {} positive",
            path.display(),
            data.len(),
            data.count_positive()
        );
    }
    Ok(())
}
