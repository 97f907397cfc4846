//! Minimises the conditional wave risk for several class probabilities
//! and shows that the sign of the minimiser follows p - 1/2.
//!
//! cargo run --example calibration

use wavecls::losses::{calibration_argmin, CalibrationQuery, LossSpec};

fn main() -> wavecls::Result<()> {
    let spec = LossSpec::wave(1.0, 1.0)?;
    for p in [0.1, 0.3, 0.45, 0.55, 0.7, 0.9] {
        let f = calibration_argmin(&spec, &CalibrationQuery::default_grid(p)?)?;
        println!("p = {p:.2}  argmin f* = {f:+.2}");
    }
    Ok(())
}
