use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use epl_poisson::cli::{
    cmd_rates, cmd_simulate, cmd_verify_poisson, cmd_verify_times, OutputFormat, RunConfig,
};
use epl_poisson::gof::ProbRounding;
use epl_poisson::ingest::Subset;

#[derive(Parser)]
#[command(
    name = "eplsim",
    version,
    about = "Poisson checks and season simulations for league football"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Directory with manifest.csv and the season files it lists
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Write reports and run_meta.json here
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Chi-square test of one team's goals per match against a Poisson fit
    VerifyPoisson {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        team: String,
        /// Use unrounded bin probabilities instead of three decimals
        #[arg(long)]
        exact_probs: bool,
    },
    /// KS tests of goal gaps (exponential) and goal minutes (uniform)
    VerifyTimes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        goal_times: PathBuf,
    },
    /// Fit home and away rates for the target-season roster
    Rates {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        subset: Subset,
    },
    /// Monte Carlo ensemble of the target season
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        subset: Subset,
        #[arg(long, default_value_t = 10_000)]
        sims: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Skip fitting and use this rate table (.csv or .json)
        #[arg(long)]
        rates_file: Option<PathBuf>,
        /// Also write every simulated final table
        #[arg(long)]
        audit_tables: bool,
    },
}

fn config(common: Common) -> RunConfig {
    RunConfig {
        data_dir: common.data_dir,
        output: common.output,
        format: common.format,
        ..RunConfig::default()
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::VerifyPoisson {
            common,
            team,
            exact_probs,
        } => {
            let rounding = if exact_probs {
                ProbRounding::Exact
            } else {
                ProbRounding::Decimals(3)
            };
            print!(
                "{}",
                cmd_verify_poisson(&config(common), &team, rounding)?.render()
            );
        }
        Command::VerifyTimes { common, goal_times } => {
            print!(
                "{}",
                cmd_verify_times(&config(common), &goal_times)?.render()
            );
        }
        Command::Rates { common, subset } => {
            let cfg = RunConfig {
                subset,
                ..config(common)
            };
            let fitted = cmd_rates(&cfg)?;
            println!("{:<24} {:>10} {:>10}", "team", "home", "away");
            for (team, r) in fitted.rates.iter() {
                println!("{team:<24} {:>10.4} {:>10.4}", r.lambda_home, r.lambda_away);
            }
        }
        Command::Simulate {
            common,
            subset,
            sims,
            seed,
            threads,
            rates_file,
            audit_tables,
        } => {
            let cfg = RunConfig {
                subset,
                sims,
                seed,
                threads,
                rates_file,
                audit_tables,
                ..config(common)
            };
            let out = cmd_simulate(&cfg)?;
            print!("{}", out.probabilities.render());
            println!(
                "relegated on {}+ points: {} seasons, {} teams",
                epl_poisson::metrics::SAFETY_POINTS,
                out.forty_point.seasons_violating,
                out.forty_point.teams_violating
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
