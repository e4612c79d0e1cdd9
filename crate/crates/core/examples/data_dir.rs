//! Load a season directory through its manifest, inspect the training
//! subsets and season weights, and run the full simulate command on it.
//! A synthetic directory is generated first when no argument is given or
//! the given directory has no manifest yet.
//!
//!     cargo run --release --example data_dir -- [data-dir]

use std::path::PathBuf;

use epl_poisson::cli::{cmd_simulate, RunConfig};
use epl_poisson::ingest::{weight_schedule, Manifest, Subset};
use epl_poisson::synthetic::write_demo_data;

fn main() -> anyhow::Result<()> {
    let scratch = tempfile::tempdir()?;
    let dir = match std::env::args().nth(1) {
        Some(d) => {
            let d = PathBuf::from(d);
            if !d.join(Manifest::FILE_NAME).exists() {
                write_demo_data(&d, 1)?;
                println!("wrote synthetic seasons to {}", d.display());
            }
            d
        }
        None => {
            let d = scratch.path().join("data");
            write_demo_data(&d, 1)?;
            d
        }
    };

    let manifest = Manifest::load_dir(&dir)?;
    let matches = manifest.load_matches()?;
    println!(
        "{} seasons, {} matches, checksum {}",
        manifest.entries.len(),
        matches.len(),
        &manifest.checksum()?[..16]
    );

    for subset in Subset::ALL {
        let rows = subset.select(&matches)?;
        let weight: u64 = rows.iter().map(|r| u64::from(r.weight)).sum();
        println!(
            "  subset {:>8}: {} matches, total weight {weight}",
            subset.label(),
            rows.len()
        );
    }
    let late: Vec<String> = weight_schedule()
        .into_iter()
        .filter(|(_, w)| *w > 1)
        .map(|(s, w)| format!("{s}x{w}"))
        .collect();
    println!("  up-weighted seasons: {}", late.join(" "));

    let out = scratch.path().join("out");
    let config = RunConfig {
        data_dir: dir,
        subset: Subset::Weighted,
        sims: 1000,
        seed: 7,
        output: Some(out.clone()),
        ..RunConfig::default()
    };
    let result = cmd_simulate(&config)?;
    println!();
    print!("{}", result.probabilities.render());
    for path in &result.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
