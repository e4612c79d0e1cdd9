//! Fit home and away scoring rates with a Poisson GLM on a synthetic league
//! whose true rates are known, for each training subset.

use epl_poisson::ingest::{teams, Subset, TARGET_SEASON};
use epl_poisson::regression::{build_design, extract_rates, fit_poisson_glm, Venue};
use epl_poisson::synthetic::SyntheticLeague;

fn main() -> anyhow::Result<()> {
    let league = SyntheticLeague::new(30, 11);
    let history = league.history(TARGET_SEASON);
    let roster = teams(
        &history
            .iter()
            .filter(|m| m.season == TARGET_SEASON)
            .cloned()
            .collect::<Vec<_>>(),
    );

    for subset in Subset::ALL {
        let training = subset.select(&history)?;
        let home = fit_poisson_glm(&build_design(&training, Venue::Home)?)?;
        let away = fit_poisson_glm(&build_design(&training, Venue::Away)?)?;
        println!(
            "{:>8}: {} rows, home fit {} iterations (deviance {:.1}), away fit {} iterations",
            subset.label(),
            training.len(),
            home.iterations,
            home.deviance,
            away.iterations
        );
        let rates = extract_rates(&home, &away, &roster)?;
        let mut abs_err = 0.0;
        for (team, r) in rates.iter() {
            let truth = league.true_rates(team).expect("synthetic club");
            abs_err += (r.lambda_home - truth.lambda_home).abs()
                + (r.lambda_away - truth.lambda_away).abs();
        }
        println!(
            "          mean absolute rate error {:.3}",
            abs_err / (2 * rates.len()) as f64
        );
        if subset == Subset::All {
            for (team, r) in rates.iter().take(5) {
                let t = league.true_rates(team).unwrap();
                println!(
                    "          {team}: home {:.3} (true {:.3}), away {:.3} (true {:.3})",
                    r.lambda_home, t.lambda_home, r.lambda_away, t.lambda_away
                );
            }
        }
    }
    Ok(())
}
