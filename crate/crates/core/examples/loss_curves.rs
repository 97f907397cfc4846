//! Prints the wave loss next to hinge and pinball on a few residuals.
//!
//! cargo run --example loss_curves

use wavecls::losses::{eval_loss, LossSpec};

fn main() -> wavecls::Result<()> {
    let losses = [
        ("hinge", LossSpec::Hinge),
        ("pinball(0.5)", LossSpec::Pinball { tau: 0.5 }),
        ("wave(a=1.5,l=1)", LossSpec::wave(1.5, 1.0)?),
        ("wave(a=-1,l=0.5)", LossSpec::wave(-1.0, 0.5)?),
    ];
    print!("{:>6}", "u");
    for (name, _) in &losses {
        print!("{name:>18}");
    }
    println!();
    for i in -4..=4 {
        let u = f64::from(i) * 0.75;
        print!("{u:>6.2}");
        for (_, spec) in &losses {
            print!("{:>18.4}", eval_loss(spec, u)?);
        }
        println!();
    }
    Ok(())
}
