//! Friedman test, Nemenyi critical difference and pairwise win-tie-loss
//! counts for an accuracy table.
//!
//! cargo run --example rank_stats -- [table.csv]

use wavecls::eval::{stat_report, RankTable};

fn main() -> wavecls::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/fixtures/tsvm_kernel_accuracy.csv"
        )
        .into()
    });
    let table = RankTable::from_csv_path(&path)?;
    let report = stat_report(&table, Some(2.459), Some(2))?;
    for (m, r) in report.models.iter().zip(&report.mean_ranks) {
        println!("{m:>12} mean rank {r:.2}");
    }
    println!("chi2_F = {:.3}, F_F = {:.3}", report.chi2_f, report.f_f);
    if let Some(cd) = report.critical_difference {
        println!("critical difference {cd:.3}");
    }
    for w in report.win_tie_loss.iter().filter(|w| w.significant) {
        println!(
            "{} beats {} ({}-{}-{})",
            w.model, w.opponent, w.wins, w.ties, w.losses
        );
    }
    Ok(())
}
