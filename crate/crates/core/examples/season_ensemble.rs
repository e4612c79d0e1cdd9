//! Simulate many seasons from a rate table and summarize title, top-four
//! and relegation chances plus the 40-point rule.
//!
//!     cargo run --release --example season_ensemble -- 5000

use epl_poisson::ingest::{teams, TARGET_SEASON};
use epl_poisson::metrics::{forty_point_rule, ProbabilityReport, SAFETY_POINTS};
use epl_poisson::simulate::{run_ensemble, League};
use epl_poisson::synthetic::SyntheticLeague;

fn main() -> anyhow::Result<()> {
    let sims: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(2000);
    let league = SyntheticLeague::new(30, 3);
    let history = league.history(TARGET_SEASON);
    let roster = teams(
        &history
            .iter()
            .filter(|m| m.season == TARGET_SEASON)
            .cloned()
            .collect::<Vec<_>>(),
    );
    let rates = league.rate_table(&roster)?;

    // one season in full
    let table = League::new(&rates)?.season_table(42, 0);
    println!("simulated table, seed 42:");
    for row in &table {
        println!(
            "  {:>2}. {:<8} {:>3} pts  gd {:>+4}",
            row.rank, row.team, row.points, row.gd
        );
    }

    let summary = run_ensemble(&rates, sims, 42)?;
    let report = ProbabilityReport::new(&summary, None)?;
    println!("\n{sims} seasons:\n{}", report.render());
    let forty = forty_point_rule(&summary);
    println!(
        "relegated on {SAFETY_POINTS}+ points in {} of {sims} seasons ({} teams)",
        forty.seasons_violating, forty.teams_violating
    );
    Ok(())
}
