//! The four commands behind the `eplsim` binary, callable in-process.
//!
//! Every command is a pure function of its config and input files. Reports
//! go to an output directory together with a `run_meta.json` record of the
//! seed, subset, simulation count and input checksums; all files of a run
//! are staged and renamed into place only after every stage succeeded.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::dist::{exponential_cdf, uniform_cdf, ExponentialParam, PoissonParam, UniformInterval};
use crate::gof::{empirical_cdf, ks_test, DescriptiveStats, GoalBinning, GofResult, ProbRounding};
use crate::ingest::{
    goals_scored_by, normalize_minutes, parse_goal_times, teams, Manifest, MatchRecord, Subset,
    TARGET_SEASON,
};
use crate::metrics::{forty_point_json, forty_point_rule, FortyPointReport, ProbabilityReport};
use crate::regression::{build_design, extract_rates, fit_poisson_glm, GlmFit, RateTable, Venue};
use crate::simulate::{run_ensemble_with, write_season_tables, EnsembleOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => bail!("unknown format {s:?} (expected csv or json)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Directory holding `manifest.csv` and the season files it lists.
    pub data_dir: PathBuf,
    pub subset: Subset,
    pub sims: u64,
    pub seed: u64,
    /// Output directory; nothing is written when `None`.
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Simulation worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Precomputed rate table (CSV or JSON by extension) instead of fitting.
    pub rates_file: Option<PathBuf>,
    /// Also write every simulated table to `season_tables.csv`.
    pub audit_tables: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data_dir: PathBuf::from("data"),
            subset: Subset::All,
            sims: 10_000,
            seed: 0,
            output: None,
            format: OutputFormat::Csv,
            threads: None,
            rates_file: None,
            audit_tables: false,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.sims == 0 {
            bail!("--sims must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Serialize)]
struct RunMeta<'a> {
    command: &'a str,
    crate_version: &'a str,
    subset: Option<&'a str>,
    sims: Option<u64>,
    seed: Option<u64>,
    data_checksum: Option<String>,
    rates_checksum: Option<String>,
    team: Option<&'a str>,
}

/// Files of one run, written together or not at all.
#[derive(Default)]
struct Staged {
    files: Vec<(String, Vec<u8>)>,
}

impl Staged {
    fn add(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.to_owned(), bytes.into()));
    }

    fn commit(self, dir: Option<&Path>) -> Result<Vec<PathBuf>> {
        let Some(dir) = dir else {
            return Ok(Vec::new());
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = Vec::new();
        for (name, bytes) in &self.files {
            let path = dir.join(format!(".{name}.partial"));
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            tmp.push((path, dir.join(name)));
        }
        let mut written = Vec::new();
        for (from, to) in tmp {
            fs::rename(&from, &to)
                .with_context(|| format!("moving {} into place", to.display()))?;
            written.push(to);
        }
        Ok(written)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

fn load_data(dir: &Path) -> Result<(Manifest, Vec<MatchRecord>)> {
    let manifest = Manifest::load_dir(dir)
        .with_context(|| format!("reading manifest in {}", dir.display()))?;
    let matches = manifest.load_matches()?;
    Ok((manifest, matches))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyPoissonReport {
    pub team: String,
    pub stats: DescriptiveStats,
    pub binning: GoalBinning,
    pub chi_square: GofResult,
    pub prob_rounding: ProbRounding,
}

impl VerifyPoissonReport {
    pub fn render(&self) -> String {
        let s = &self.stats;
        let b = &self.binning;
        let mut out = format!(
            "{} goals per match\n  min {}  Q1 {}  median {}  Q3 {}  max {}  mean {:.6}  sd {:.6}  n {}\n\n",
            self.team, s.min, s.q1, s.median, s.q3, s.max, s.mean, s.sd, s.n
        );
        out.push_str("goals  prob   observed  expected\n");
        for i in 0..5 {
            out.push_str(&format!(
                "{:<5}  {:.3}  {:>8}  {:>8.0}\n",
                b.labels[i], b.probs[i], b.observed[i], b.expected[i]
            ));
        }
        out.push_str(&format!(
            "\nchi-square {:.4} on {} df, p = {:.4}\n",
            self.chi_square.statistic, self.chi_square.df_or_n, self.chi_square.p_value
        ));
        out
    }
}

/// Does one team's goals-per-match follow a Poisson law? Uses every season
/// in the data directory.
pub fn cmd_verify_poisson(
    config: &RunConfig,
    team: &str,
    rounding: ProbRounding,
) -> Result<VerifyPoissonReport> {
    let (manifest, matches) = load_data(&config.data_dir).context("ingest")?;
    let goals = goals_scored_by(&matches, team).context("ingest")?;
    let as_f64: Vec<f64> = goals.iter().map(|&g| f64::from(g)).collect();
    let stats = DescriptiveStats::of(&as_f64)?;
    let lambda = PoissonParam::new(stats.mean).context("verify")?;
    let binning = GoalBinning::fit(&goals, lambda, rounding)?;
    let chi_square = binning.chi_square().context("verify")?;
    let report = VerifyPoissonReport {
        team: team.to_owned(),
        stats,
        binning,
        chi_square,
        prob_rounding: rounding,
    };

    let mut staged = Staged::default();
    staged.add(
        "verify_poisson.json",
        serde_json::to_string_pretty(&report)?,
    );
    staged.add(
        "run_meta.json",
        serde_json::to_string_pretty(&RunMeta {
            command: "verify-poisson",
            crate_version: env!("CARGO_PKG_VERSION"),
            subset: None,
            sims: None,
            seed: None,
            data_checksum: Some(manifest.checksum()?),
            rates_checksum: None,
            team: Some(team),
        })?,
    );
    staged.commit(config.output.as_deref()).context("write")?;
    Ok(report)
}

/// Model and empirical CDF evaluated at each distinct sample value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfCurve {
    pub x: Vec<f64>,
    pub empirical: Vec<f64>,
    pub model: Vec<f64>,
}

impl CdfCurve {
    fn build(sample: &[f64], model: impl Fn(f64) -> f64) -> crate::error::Result<Self> {
        let steps = empirical_cdf(sample)?.steps();
        Ok(CdfCurve {
            x: steps.iter().map(|s| s.0).collect(),
            empirical: steps.iter().map(|s| s.1).collect(),
            model: steps.iter().map(|s| model(s.0)).collect(),
        })
    }

    fn two_column(x: &[f64], y: &[f64]) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "cdf"])?;
        for (a, b) in x.iter().zip(y) {
            w.write_record([a.to_string(), b.to_string()])?;
        }
        Ok(w.into_inner()?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyTimesReport {
    pub goals: usize,
    /// Mean gap in minutes, the fitted exponential mean.
    pub beta: f64,
    pub gaps_vs_exponential: GofResult,
    pub minutes_vs_uniform: GofResult,
    pub gap_curve: CdfCurve,
    pub minute_curve: CdfCurve,
}

impl VerifyTimesReport {
    pub fn render(&self) -> String {
        format!(
            "{} goals, mean gap {:.3} min\n\
             time between goals vs exponential: D = {:.4}, p = {:.4}\n\
             normalized goal minutes vs uniform: D = {:.4}, p = {:.4}\n",
            self.goals,
            self.beta,
            self.gaps_vs_exponential.statistic,
            self.gaps_vs_exponential.p_value,
            self.minutes_vs_uniform.statistic,
            self.minutes_vs_uniform.p_value
        )
    }
}

/// KS tests of a goal-time log: gaps against an exponential with the sample
/// mean, normalized minutes against the standard uniform.
pub fn verify_times(text: &[u8]) -> crate::error::Result<VerifyTimesReport> {
    let records = parse_goal_times(text)?;
    let gaps: Vec<f64> = records.iter().map(|r| r.gap).collect();
    let beta = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let expo = ExponentialParam::from_mean(beta)?;
    let expo_cdf = |x: f64| exponential_cdf(x.max(0.0), expo).unwrap_or(0.0);
    let minutes: Vec<f64> = normalize_minutes(&records)?
        .iter()
        .map(|m| m.fraction())
        .collect();
    let unit = UniformInterval::unit();
    let unif_cdf = |x: f64| uniform_cdf(x, unit);
    Ok(VerifyTimesReport {
        goals: records.len(),
        beta,
        gaps_vs_exponential: ks_test(&gaps, expo_cdf)?,
        minutes_vs_uniform: ks_test(&minutes, unif_cdf)?,
        gap_curve: CdfCurve::build(&gaps, expo_cdf)?,
        minute_curve: CdfCurve::build(&minutes, unif_cdf)?,
    })
}

pub fn cmd_verify_times(config: &RunConfig, goal_times_file: &Path) -> Result<VerifyTimesReport> {
    let bytes = fs::read(goal_times_file)
        .with_context(|| format!("ingest: reading {}", goal_times_file.display()))?;
    let report = verify_times(&bytes).context("ingest")?;

    let mut staged = Staged::default();
    staged.add("verify_times.json", serde_json::to_string_pretty(&report)?);
    let g = &report.gap_curve;
    let m = &report.minute_curve;
    staged.add(
        "gaps_empirical.csv",
        CdfCurve::two_column(&g.x, &g.empirical)?,
    );
    staged.add(
        "gaps_exponential.csv",
        CdfCurve::two_column(&g.x, &g.model)?,
    );
    staged.add(
        "minutes_empirical.csv",
        CdfCurve::two_column(&m.x, &m.empirical)?,
    );
    staged.add("minutes_uniform.csv", CdfCurve::two_column(&m.x, &m.model)?);
    staged.add(
        "run_meta.json",
        serde_json::to_string_pretty(&RunMeta {
            command: "verify-times",
            crate_version: env!("CARGO_PKG_VERSION"),
            subset: None,
            sims: None,
            seed: None,
            data_checksum: Some(sha256_hex(&bytes)),
            rates_checksum: None,
            team: None,
        })?,
    );
    staged.commit(config.output.as_deref()).context("write")?;
    Ok(report)
}

/// Home and away fits for a subset plus the target-season roster.
#[derive(Debug, Clone)]
pub struct FittedRates {
    pub home: GlmFit,
    pub away: GlmFit,
    pub rates: RateTable,
}

/// Fit both venue models on `subset` and extract rates for the teams that
/// appear in the target season.
pub fn fit_rates(matches: &[MatchRecord], subset: Subset) -> Result<FittedRates> {
    let roster: Vec<String> = teams(
        &matches
            .iter()
            .filter(|m| m.season == TARGET_SEASON)
            .cloned()
            .collect::<Vec<_>>(),
    );
    if roster.is_empty() {
        bail!("no {TARGET_SEASON} fixtures in the data; the roster comes from that season's file");
    }
    let training = subset.select(matches)?;
    let home = fit_poisson_glm(&build_design(&training, Venue::Home)?)?;
    let away = fit_poisson_glm(&build_design(&training, Venue::Away)?)?;
    let rates = extract_rates(&home, &away, &roster)?;
    Ok(FittedRates { home, away, rates })
}

fn rate_bytes(rates: &RateTable, format: OutputFormat) -> Result<(String, Vec<u8>)> {
    Ok(match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            rates.write_csv(&mut buf)?;
            ("rates.csv".into(), buf)
        }
        OutputFormat::Json => ("rates.json".into(), rates.to_json()?.into_bytes()),
    })
}

pub fn load_rates_file(path: &Path) -> Result<RateTable> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let table = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        RateTable::from_json(std::str::from_utf8(&bytes)?)?
    } else {
        RateTable::read_csv(&bytes[..])?
    };
    Ok(table)
}

pub fn cmd_rates(config: &RunConfig) -> Result<FittedRates> {
    let (manifest, matches) = load_data(&config.data_dir).context("ingest")?;
    let fitted = fit_rates(&matches, config.subset).context("fit")?;
    let mut staged = Staged::default();
    let (name, bytes) = rate_bytes(&fitted.rates, config.format)?;
    staged.add(&name, bytes);
    staged.add(
        "run_meta.json",
        serde_json::to_string_pretty(&RunMeta {
            command: "rates",
            crate_version: env!("CARGO_PKG_VERSION"),
            subset: Some(config.subset.label()),
            sims: None,
            seed: None,
            data_checksum: Some(manifest.checksum()?),
            rates_checksum: None,
            team: None,
        })?,
    );
    staged.commit(config.output.as_deref()).context("write")?;
    Ok(fitted)
}

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub rates: RateTable,
    pub probabilities: ProbabilityReport,
    pub forty_point: FortyPointReport,
    pub written: Vec<PathBuf>,
}

pub fn cmd_simulate(config: &RunConfig) -> Result<SimulateOutcome> {
    config.validate()?;
    let (rates, data_checksum, rates_checksum) = match &config.rates_file {
        Some(path) => {
            let rates = load_rates_file(path).context("ingest")?;
            let sum = sha256_hex(&fs::read(path)?);
            (rates, None, Some(sum))
        }
        None => {
            let (manifest, matches) = load_data(&config.data_dir).context("ingest")?;
            let fitted = fit_rates(&matches, config.subset).context("fit")?;
            (fitted.rates, Some(manifest.checksum()?), None)
        }
    };
    let opts = EnsembleOptions {
        threads: config.threads,
    };
    let summary = run_ensemble_with(&rates, config.sims, config.seed, opts).context("simulate")?;
    let probabilities = ProbabilityReport::new(&summary, Some(config.subset)).context("metrics")?;
    let forty_point = forty_point_rule(&summary);

    let mut staged = Staged::default();
    match config.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            probabilities.write_csv(&mut buf)?;
            staged.add("probabilities.csv", buf);
        }
        OutputFormat::Json => staged.add("probabilities.json", probabilities.to_json()?),
    }
    staged.add(
        "forty_point.json",
        forty_point_json(config.subset, forty_point)?,
    );
    if config.audit_tables {
        let mut buf = Vec::new();
        write_season_tables(&rates, config.sims, config.seed, &mut buf).context("simulate")?;
        staged.add("season_tables.csv", buf);
    }
    staged.add(
        "run_meta.json",
        serde_json::to_string_pretty(&RunMeta {
            command: "simulate",
            crate_version: env!("CARGO_PKG_VERSION"),
            subset: Some(config.subset.label()),
            sims: Some(config.sims),
            seed: Some(config.seed),
            data_checksum,
            rates_checksum,
            team: None,
        })?,
    );
    let written = staged.commit(config.output.as_deref()).context("write")?;
    Ok(SimulateOutcome {
        rates,
        probabilities,
        forty_point,
        written,
    })
}
