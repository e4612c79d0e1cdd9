//! Kolmogorov-Smirnov checks of goal timing: gaps between goals against an
//! exponential, normalized goal minutes against a uniform.
//!
//!     cargo run --example goal_timing
//!     cargo run --example goal_timing -- goal_times.csv

use epl_poisson::cli::verify_times;
use epl_poisson::synthetic::{goal_log, write_goal_log};

fn main() -> anyhow::Result<()> {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => {
            // one season of a side scoring 1.7 a game
            let mut buf = Vec::new();
            write_goal_log(&goal_log(1.7, 2024), &mut buf)?;
            buf
        }
    };
    let report = verify_times(&bytes)?;
    print!("{}", report.render());

    println!("\nfirst points of the gap CDF (x, empirical, exponential):");
    let c = &report.gap_curve;
    for i in 0..c.x.len().min(8) {
        println!(
            "  {:>5.0}  {:.3}  {:.3}",
            c.x[i], c.empirical[i], c.model[i]
        );
    }
    Ok(())
}
