//! Chi-square goodness of fit of a goals-per-match sample to a Poisson law.
//!
//!     cargo run --example goal_counts
//!     cargo run --example goal_counts -- <data-dir> "Man United"

use epl_poisson::dist::{poisson_pmf, PoissonParam};
use epl_poisson::gof::{
    chi_square_gof, expected_bins, DescriptiveStats, GoalBinning, ProbRounding, GOAL_BIN_LABELS,
};
use epl_poisson::ingest::{goals_scored_by, Manifest};
use epl_poisson::synthetic::SyntheticLeague;

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (team, goals) = match args.as_slice() {
        [dir, team] => {
            let matches = Manifest::load_dir(dir.as_ref())?.load_matches()?;
            (team.clone(), goals_scored_by(&matches, team)?)
        }
        _ => {
            let league = SyntheticLeague::new(30, 7);
            let matches = league.history(epl_poisson::ingest::TARGET_SEASON);
            let team = "Club 03".to_string();
            (team.clone(), goals_scored_by(&matches, &team)?)
        }
    };

    let sample: Vec<f64> = goals.iter().map(|&g| f64::from(g)).collect();
    let stats = DescriptiveStats::of(&sample)?;
    println!(
        "{team}: {} matches, mean {:.3}, sd {:.3}",
        stats.n, stats.mean, stats.sd
    );

    let lambda = PoissonParam::new(stats.mean)?;
    let binning = GoalBinning::fit(&goals, lambda, ProbRounding::Decimals(3))?;
    for i in 0..5 {
        println!(
            "  {:>2} goals  p={:.3}  observed {:>4}  expected {:>6.1}",
            binning.labels[i], binning.probs[i], binning.observed[i], binning.expected[i]
        );
    }
    let test = binning.chi_square()?;
    println!(
        "  chi-square {:.4}, df {}, p {:.4}",
        test.statistic, test.df_or_n, test.p_value
    );

    // The same test by hand on a fixed table of counts.
    let observed = [158.0, 286.0, 282.0, 178.0, 134.0];
    let lambda = PoissonParam::new(1.916)?;
    let (probs, expected) = expected_bins(lambda, 1038, ProbRounding::Decimals(3))?;
    let r = chi_square_gof(&observed, &expected)?;
    println!(
        "\nfixed table, lambda 1.916: P(X=0) = {:.3}, P({}) = {:.3}, chi-square {:.4}, p {:.4}",
        poisson_pmf(0, lambda),
        GOAL_BIN_LABELS[4],
        probs[4],
        r.statistic,
        r.p_value
    );
    Ok(())
}
