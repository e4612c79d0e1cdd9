//! Synthetic league histories and goal-time logs with known generating
//! rates, for demos and tests when real season files are not at hand.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{sample_poisson, PoissonParam};
use crate::error::Result;
use crate::ingest::{
    write_matches, GoalTimeRecord, MatchRecord, SeasonId, FIRST_SEASON, TARGET_SEASON,
};
use crate::regression::{RateTable, TeamRates};
use crate::simulate::{
    compute_table, double_round_robin, score_points, Fixture, MatchResult, LEAGUE_SIZE,
    RELEGATION_SLOTS,
};

/// A pool of clubs with fixed true scoring rates. Each season 20 of them
/// play a double round robin; the bottom three swap with three clubs drawn
/// from outside the league.
#[derive(Debug, Clone)]
pub struct SyntheticLeague {
    pub clubs: Vec<(String, TeamRates)>,
    pub seed: u64,
}

impl SyntheticLeague {
    /// `pool` clubs (at least 23) with rates spread between weak and strong.
    pub fn new(pool: usize, seed: u64) -> Self {
        let pool = pool.max(LEAGUE_SIZE + RELEGATION_SLOTS);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let clubs = (0..pool)
            .map(|i| {
                let strength: f64 = rng.random_range(-0.45..0.45);
                (
                    format!("Club {i:02}"),
                    TeamRates {
                        lambda_home: 1.45 * strength.exp(),
                        lambda_away: 1.1 * strength.exp(),
                    },
                )
            })
            .collect();
        SyntheticLeague { clubs, seed }
    }

    pub fn true_rates(&self, team: &str) -> Option<TeamRates> {
        self.clubs.iter().find(|c| c.0 == team).map(|c| c.1)
    }

    /// Results for every season from `FIRST_SEASON` through `last`.
    pub fn history(&self, last: SeasonId) -> Vec<MatchRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut members: Vec<usize> = (0..LEAGUE_SIZE).collect();
        let mut out = Vec::new();
        for year in FIRST_SEASON.0..=last.0 {
            let names: Vec<String> = members.iter().map(|&i| self.clubs[i].0.clone()).collect();
            let fixtures = double_round_robin(&names).expect("distinct club names");
            let results: Vec<MatchResult> =
                fixtures.iter().map(|f| self.play(f, &mut rng)).collect();
            for r in &results {
                out.push(MatchRecord {
                    season: SeasonId(year),
                    home_team: r.fixture.home.clone(),
                    away_team: r.fixture.away.clone(),
                    home_goals: r.home_goals,
                    away_goals: r.away_goals,
                });
            }
            let table = compute_table(&results).expect("complete season");
            let down: Vec<usize> = table[LEAGUE_SIZE - RELEGATION_SLOTS..]
                .iter()
                .map(|row| self.index(&row.team))
                .collect();
            let mut outside: Vec<usize> = (0..self.clubs.len())
                .filter(|i| !members.contains(i))
                .collect();
            members.retain(|i| !down.contains(i));
            for _ in 0..RELEGATION_SLOTS {
                let pick = rng.random_range(0..outside.len());
                members.push(outside.swap_remove(pick));
            }
            members.sort();
        }
        out
    }

    fn index(&self, team: &str) -> usize {
        self.clubs
            .iter()
            .position(|c| c.0 == team)
            .expect("known club")
    }

    fn play(&self, f: &Fixture, rng: &mut ChaCha8Rng) -> MatchResult {
        let h = self.clubs[self.index(&f.home)].1;
        let a = self.clubs[self.index(&f.away)].1;
        let hg = sample_poisson(PoissonParam::new(h.lambda_home).expect("positive"), rng);
        let ag = sample_poisson(PoissonParam::new(a.lambda_away).expect("positive"), rng);
        let (hp, ap) = score_points(hg, ag);
        MatchResult {
            fixture: f.clone(),
            home_goals: hg,
            away_goals: ag,
            home_points: hp,
            away_points: ap,
        }
    }

    /// True rates of the clubs in `roster`.
    pub fn rate_table(&self, roster: &[String]) -> Result<RateTable> {
        RateTable::from_rates(
            roster
                .iter()
                .filter_map(|t| Some((t.clone(), self.true_rates(t)?))),
        )
    }
}

/// Write one CSV per season plus `manifest.csv` into `dir`.
pub fn write_data_dir(dir: &Path, matches: &[MatchRecord]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut seasons: Vec<SeasonId> = matches.iter().map(|m| m.season).collect();
    seasons.sort();
    seasons.dedup();
    let mut manifest = String::from("season,path\n");
    for s in seasons {
        let name = format!("E0_{}.csv", s.0);
        let rows: Vec<MatchRecord> = matches.iter().filter(|m| m.season == s).cloned().collect();
        write_matches(&rows, std::fs::File::create(dir.join(&name))?)?;
        manifest.push_str(&format!("{},{}\n", s.0, name));
    }
    std::fs::write(dir.join(crate::ingest::Manifest::FILE_NAME), manifest)?;
    Ok(())
}

/// A full synthetic history through the target season, written to `dir`.
pub fn write_demo_data(dir: &Path, seed: u64) -> Result<SyntheticLeague> {
    let league = SyntheticLeague::new(30, seed);
    write_data_dir(dir, &league.history(TARGET_SEASON))?;
    Ok(league)
}

/// One team's season goal log from a homogeneous Poisson process with
/// `goals_per_match` over 38 matches of random stoppage length. Gaps are
/// measured on the season-long playing clock, in whole minutes.
pub fn goal_log(goals_per_match: f64, seed: u64) -> Vec<GoalTimeRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut clock_before = 0u32;
    let mut last_goal_clock = 0u32;
    for week in 1..=38 {
        let h1: u32 = rng.random_range(0..=4);
        let h2: u32 = rng.random_range(2..=7);
        let length = 90 + h1 + h2;
        let per_minute = goals_per_match / f64::from(length);
        let mut t = 0.0;
        let mut minutes = Vec::new();
        loop {
            let u: f64 = rng.random();
            t += -(1.0 - u).ln() / per_minute;
            if t >= f64::from(length) {
                break;
            }
            minutes.push((t.ceil() as u32).clamp(1, length));
        }
        for m in minutes {
            let clock = clock_before + m;
            if !out.is_empty() && clock == last_goal_clock {
                // same-minute goals would give a zero gap
                continue;
            }
            out.push(GoalTimeRecord {
                minute: m,
                matchweek: week,
                stoppage_h1: h1,
                stoppage_h2: h2,
                gap: f64::from(clock - last_goal_clock),
            });
            last_goal_clock = clock;
        }
        clock_before += length;
    }
    out
}

/// Serialize a goal log in the five-column layout `parse_goal_times` reads.
pub fn write_goal_log<W: std::io::Write>(records: &[GoalTimeRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["minute", "matchweek", "stoppage_h1", "stoppage_h2", "gap"])?;
    for r in records {
        w.write_record([
            r.minute.to_string(),
            r.matchweek.to_string(),
            r.stoppage_h1.to_string(),
            r.stoppage_h2.to_string(),
            r.gap.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
