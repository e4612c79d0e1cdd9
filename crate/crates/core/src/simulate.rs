//! Double round-robin season simulation and Monte Carlo ensembles.
//!
//! Every match draws home goals then away goals from independent Poisson
//! distributions with the home side's home rate and the away side's away
//! rate. Simulation `k` of an ensemble draws from ChaCha8 seeded with the
//! master seed and switched to stream `k`, so each season's random numbers
//! depend only on `(master_seed, k)` and never on scheduling.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{sample_poisson, PoissonParam};
use crate::error::{Error, Result};
use crate::regression::RateTable;

pub const LEAGUE_SIZE: usize = 20;
pub const RELEGATION_SLOTS: usize = 3;
pub const WIN_POINTS: u32 = 3;
pub const DRAW_POINTS: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fixture {
    pub home: String,
    pub away: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub fixture: Fixture,
    pub home_goals: u32,
    pub away_goals: u32,
    pub home_points: u32,
    pub away_points: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandingRow {
    pub rank: usize,
    pub team: String,
    pub played: u32,
    pub points: u32,
    pub gd: i32,
    pub gf: u32,
}

/// Every ordered pair of distinct teams once, sorted by home then away.
pub fn double_round_robin(teams: &[String]) -> Result<Vec<Fixture>> {
    let mut sorted = teams.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Argument("duplicate team in fixture list".into()));
    }
    if sorted.len() < 2 {
        return Err(Error::Argument("a league needs at least two teams".into()));
    }
    let mut out = Vec::with_capacity(sorted.len() * (sorted.len() - 1));
    for h in &sorted {
        for a in &sorted {
            if h != a {
                out.push(Fixture {
                    home: h.clone(),
                    away: a.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// The 380-match schedule for a 20-team league.
pub fn generate_fixtures(teams: &[String]) -> Result<Vec<Fixture>> {
    if teams.len() != LEAGUE_SIZE {
        return Err(Error::Argument(format!(
            "expected {LEAGUE_SIZE} teams, got {}",
            teams.len()
        )));
    }
    double_round_robin(teams)
}

/// Points for (home, away): 3 for a win, 1 each for a draw.
pub fn score_points(home_goals: u32, away_goals: u32) -> (u32, u32) {
    match home_goals.cmp(&away_goals) {
        Ordering::Greater => (WIN_POINTS, 0),
        Ordering::Equal => (DRAW_POINTS, DRAW_POINTS),
        Ordering::Less => (0, WIN_POINTS),
    }
}

pub fn simulate_match<R: Rng + ?Sized>(
    fx: &Fixture,
    rates: &RateTable,
    rng: &mut R,
) -> Result<MatchResult> {
    let missing = |t: &str| Error::UnknownTeam {
        name: t.to_owned(),
        suggestions: Vec::new(),
    };
    let home = rates.get(&fx.home).ok_or_else(|| missing(&fx.home))?;
    let away = rates.get(&fx.away).ok_or_else(|| missing(&fx.away))?;
    let home_goals = sample_poisson(PoissonParam::new(home.lambda_home)?, rng);
    let away_goals = sample_poisson(PoissonParam::new(away.lambda_away)?, rng);
    let (home_points, away_points) = score_points(home_goals, away_goals);
    Ok(MatchResult {
        fixture: fx.clone(),
        home_goals,
        away_goals,
        home_points,
        away_points,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    played: u32,
    points: u32,
    gf: u32,
    ga: u32,
}

impl Tally {
    fn gd(&self) -> i32 {
        self.gf as i32 - self.ga as i32
    }
}

/// Points desc, goal difference desc, goals scored desc, name asc.
fn standings_order(a: (&str, &Tally), b: (&str, &Tally)) -> Ordering {
    b.1.points
        .cmp(&a.1.points)
        .then_with(|| b.1.gd().cmp(&a.1.gd()))
        .then_with(|| b.1.gf.cmp(&a.1.gf))
        .then_with(|| a.0.cmp(b.0))
}

/// Final table from a complete double round robin.
pub fn compute_table(results: &[MatchResult]) -> Result<Vec<StandingRow>> {
    let mut tallies: BTreeMap<&str, Tally> = BTreeMap::new();
    for r in results {
        let h = tallies.entry(r.fixture.home.as_str()).or_default();
        h.played += 1;
        h.points += r.home_points;
        h.gf += r.home_goals;
        h.ga += r.away_goals;
        let a = tallies.entry(r.fixture.away.as_str()).or_default();
        a.played += 1;
        a.points += r.away_points;
        a.gf += r.away_goals;
        a.ga += r.home_goals;
    }
    if tallies.len() < 2 {
        return Err(Error::IncompleteSeason("fewer than two teams".into()));
    }
    let games = 2 * (tallies.len() as u32 - 1);
    if let Some((t, x)) = tallies.iter().find(|(_, x)| x.played != games) {
        return Err(Error::IncompleteSeason(format!(
            "{t} played {} of {games} matches",
            x.played
        )));
    }
    let mut rows: Vec<(&str, Tally)> = tallies.into_iter().collect();
    rows.sort_by(|a, b| standings_order((a.0, &a.1), (b.0, &b.1)));
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, (team, t))| StandingRow {
            rank: i + 1,
            team: team.to_owned(),
            played: t.played,
            points: t.points,
            gd: t.gd(),
            gf: t.gf,
        })
        .collect())
}

/// The per-season random stream used by ensembles.
pub fn season_rng(master_seed: u64, sim_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(sim_index);
    rng
}

/// Rates and schedule resolved to indices for the hot loop.
#[derive(Debug, Clone)]
pub struct League {
    teams: Vec<String>,
    home: Vec<PoissonParam>,
    away: Vec<PoissonParam>,
    fixtures: Vec<(usize, usize)>,
}

impl League {
    pub fn new(rates: &RateTable) -> Result<Self> {
        let teams: Vec<String> = rates.teams().map(str::to_owned).collect();
        let fixtures = generate_fixtures(&teams)?;
        let index: HashMap<&str, usize> = teams
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect();
        let mut home = Vec::with_capacity(teams.len());
        let mut away = Vec::with_capacity(teams.len());
        for (_, r) in rates.iter() {
            home.push(PoissonParam::new(r.lambda_home)?);
            away.push(PoissonParam::new(r.lambda_away)?);
        }
        let fixtures = fixtures
            .iter()
            .map(|f| (index[f.home.as_str()], index[f.away.as_str()]))
            .collect();
        Ok(League {
            teams,
            home,
            away,
            fixtures,
        })
    }

    pub fn teams(&self) -> &[String] {
        &self.teams
    }

    pub fn fixtures(&self) -> Vec<Fixture> {
        self.fixtures
            .iter()
            .map(|&(h, a)| Fixture {
                home: self.teams[h].clone(),
                away: self.teams[a].clone(),
            })
            .collect()
    }

    /// Play one season on `rng`, returning all match results in fixture order.
    pub fn play<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<MatchResult> {
        self.fixtures
            .iter()
            .map(|&(h, a)| {
                let hg = sample_poisson(self.home[h], rng);
                let ag = sample_poisson(self.away[a], rng);
                let (hp, ap) = score_points(hg, ag);
                MatchResult {
                    fixture: Fixture {
                        home: self.teams[h].clone(),
                        away: self.teams[a].clone(),
                    },
                    home_goals: hg,
                    away_goals: ag,
                    home_points: hp,
                    away_points: ap,
                }
            })
            .collect()
    }

    /// Season `sim_index` of an ensemble with `master_seed`, as a table.
    pub fn season_table(&self, master_seed: u64, sim_index: u64) -> Vec<StandingRow> {
        let results = self.play(&mut season_rng(master_seed, sim_index));
        compute_table(&results).expect("a generated schedule is always complete")
    }

    fn digest(&self, master_seed: u64, sim_index: u64) -> SeasonDigest {
        let mut rng = season_rng(master_seed, sim_index);
        let n = self.teams.len();
        let mut tally = vec![Tally::default(); n];
        for &(h, a) in &self.fixtures {
            let hg = sample_poisson(self.home[h], &mut rng);
            let ag = sample_poisson(self.away[a], &mut rng);
            let (hp, ap) = score_points(hg, ag);
            tally[h].played += 1;
            tally[h].points += hp;
            tally[h].gf += hg;
            tally[h].ga += ag;
            tally[a].played += 1;
            tally[a].points += ap;
            tally[a].gf += ag;
            tally[a].ga += hg;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| {
            standings_order((&self.teams[x], &tally[x]), (&self.teams[y], &tally[y]))
        });
        let mut rank = vec![0u8; n];
        for (pos, &t) in order.iter().enumerate() {
            rank[t] = (pos + 1) as u8;
        }
        let relegated = order[n - RELEGATION_SLOTS..]
            .iter()
            .map(|&t| RelegatedTeam {
                team: t,
                points: tally[t].points,
                rank: rank[t] as usize,
            })
            .collect();
        SeasonDigest {
            points: tally.iter().map(|t| t.points).collect(),
            rank,
            total_points: tally.iter().map(|t| t.points).sum(),
            gd_sum: tally.iter().map(|t| i64::from(t.gd())).sum(),
            goals: tally.iter().map(|t| u64::from(t.gf)).sum(),
            relegated,
            survival_points: tally[order[n - RELEGATION_SLOTS - 1]].points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelegatedTeam {
    /// Index into [`EnsembleSummary::teams`].
    pub team: usize,
    pub points: u32,
    pub rank: usize,
}

/// Per-season record kept by the ensemble.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeasonDigest {
    #[serde(skip)]
    points: Vec<u32>,
    #[serde(skip)]
    rank: Vec<u8>,
    pub total_points: u32,
    pub gd_sum: i64,
    pub goals: u64,
    pub relegated: Vec<RelegatedTeam>,
    /// Points of the lowest team to stay up (17th of 20).
    pub survival_points: u32,
}

/// Aggregated outcome of `n_sims` simulated seasons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub n_sims: u64,
    pub master_seed: u64,
    pub teams: Vec<String>,
    /// `rank_counts[team][r]`: seasons the team finished at rank `r + 1`.
    pub rank_counts: Vec<Vec<u64>>,
    /// `points_histogram[team][p]`: seasons the team finished on `p` points.
    pub points_histogram: Vec<Vec<u64>>,
    pub seasons: Vec<SeasonDigest>,
}

impl EnsembleSummary {
    pub fn team_index(&self, team: &str) -> Option<usize> {
        self.teams.iter().position(|t| t == team)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnsembleOptions {
    /// Worker threads; `None` uses every core. Never changes the output.
    pub threads: Option<usize>,
}

pub fn run_ensemble(rates: &RateTable, n_sims: u64, master_seed: u64) -> Result<EnsembleSummary> {
    run_ensemble_with(rates, n_sims, master_seed, EnsembleOptions::default())
}

pub fn run_ensemble_with(
    rates: &RateTable,
    n_sims: u64,
    master_seed: u64,
    opts: EnsembleOptions,
) -> Result<EnsembleSummary> {
    if n_sims == 0 {
        return Err(Error::Argument("need at least one simulation".into()));
    }
    let league = League::new(rates)?;
    let simulate = || -> Vec<SeasonDigest> {
        (0..n_sims)
            .into_par_iter()
            .map(|k| league.digest(master_seed, k))
            .collect()
    };
    let seasons = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Argument(format!("thread pool: {e}")))?
            .install(simulate),
        None => simulate(),
    };

    let n = league.teams.len();
    let max_points = WIN_POINTS as usize * 2 * (n - 1);
    let mut rank_counts = vec![vec![0u64; n]; n];
    let mut points_histogram = vec![vec![0u64; max_points + 1]; n];
    for s in &seasons {
        for t in 0..n {
            rank_counts[t][s.rank[t] as usize - 1] += 1;
            points_histogram[t][s.points[t] as usize] += 1;
        }
    }
    Ok(EnsembleSummary {
        n_sims,
        master_seed,
        teams: league.teams.clone(),
        rank_counts,
        points_histogram,
        seasons,
    })
}

/// Write every simulated table of an ensemble as CSV, one row per team per
/// season, replaying the same streams the ensemble used.
pub fn write_season_tables<W: Write>(
    rates: &RateTable,
    n_sims: u64,
    master_seed: u64,
    sink: W,
) -> Result<()> {
    let league = League::new(rates)?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["sim", "rank", "team", "played", "points", "gd", "gf"])?;
    for k in 0..n_sims {
        for row in league.season_table(master_seed, k) {
            w.write_record([
                k.to_string(),
                row.rank.to_string(),
                row.team,
                row.played.to_string(),
                row.points.to_string(),
                row.gd.to_string(),
                row.gf.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
