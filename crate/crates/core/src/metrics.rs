//! Title, top-k and relegation probabilities and 40-point-rule tallies from
//! an ensemble. Percentages are kept at full precision; only the text table
//! rounds them.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Subset;
use crate::simulate::{EnsembleSummary, RELEGATION_SLOTS};

/// Points at or above which relegation breaks the folk safety rule.
pub const SAFETY_POINTS: u32 = 40;

fn pct(count: u64, n: u64) -> f64 {
    100.0 * count as f64 / n as f64
}

/// Per-team percentage of seasons finishing in the top `k`.
pub fn top_k_prob(summary: &EnsembleSummary, k: usize) -> Result<Vec<(String, f64)>> {
    let n_teams = summary.teams.len();
    if !(1..=n_teams).contains(&k) {
        return Err(Error::Argument(format!(
            "k must be within 1..={n_teams}, got {k}"
        )));
    }
    Ok(summary
        .teams
        .iter()
        .zip(&summary.rank_counts)
        .map(|(t, counts)| (t.clone(), pct(counts[..k].iter().sum(), summary.n_sims)))
        .collect())
}

pub fn champion_prob(summary: &EnsembleSummary) -> Vec<(String, f64)> {
    top_k_prob(summary, 1).expect("k = 1 is always in range")
}

/// Per-team percentage of seasons in the bottom three.
pub fn relegation_prob(summary: &EnsembleSummary) -> Vec<(String, f64)> {
    let first_down = summary.teams.len().saturating_sub(RELEGATION_SLOTS);
    summary
        .teams
        .iter()
        .zip(&summary.rank_counts)
        .map(|(t, counts)| {
            (
                t.clone(),
                pct(counts[first_down..].iter().sum(), summary.n_sims),
            )
        })
        .collect()
}

pub fn mean_points(summary: &EnsembleSummary) -> Vec<(String, f64)> {
    summary
        .teams
        .iter()
        .zip(&summary.points_histogram)
        .map(|(t, h)| {
            let total: u64 = h.iter().enumerate().map(|(p, c)| p as u64 * c).sum();
            (t.clone(), total as f64 / summary.n_sims as f64)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FortyPointReport {
    /// Simulated seasons with at least one team relegated on 40+ points.
    pub seasons_violating: u64,
    /// Team-seasons relegated on 40+ points.
    pub teams_violating: u64,
}

pub fn forty_point_rule(summary: &EnsembleSummary) -> FortyPointReport {
    let mut report = FortyPointReport::default();
    for s in &summary.seasons {
        let n = s
            .relegated
            .iter()
            .filter(|r| r.points >= SAFETY_POINTS)
            .count() as u64;
        if n > 0 {
            report.seasons_violating += 1;
            report.teams_violating += n;
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamProbabilities {
    pub team: String,
    pub champion_pct: f64,
    pub top4_pct: f64,
    pub relegation_pct: f64,
    pub mean_points: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub subset: Option<Subset>,
    pub n_sims: u64,
    pub teams: Vec<TeamProbabilities>,
    /// Average points of the lowest surviving team.
    pub mean_survival_points: f64,
}

impl ProbabilityReport {
    pub fn new(summary: &EnsembleSummary, subset: Option<Subset>) -> Result<Self> {
        if summary.n_sims == 0 {
            return Err(Error::Argument("empty ensemble".into()));
        }
        let champ = champion_prob(summary);
        let top4 = top_k_prob(summary, 4.min(summary.teams.len()))?;
        let down = relegation_prob(summary);
        let pts = mean_points(summary);
        let teams = (0..summary.teams.len())
            .map(|i| TeamProbabilities {
                team: summary.teams[i].clone(),
                champion_pct: champ[i].1,
                top4_pct: top4[i].1,
                relegation_pct: down[i].1,
                mean_points: pts[i].1,
            })
            .collect();
        let survival: u64 = summary
            .seasons
            .iter()
            .map(|s| u64::from(s.survival_points))
            .sum();
        Ok(ProbabilityReport {
            subset,
            n_sims: summary.n_sims,
            teams,
            mean_survival_points: survival as f64 / summary.n_sims as f64,
        })
    }

    pub fn team(&self, name: &str) -> Option<&TeamProbabilities> {
        self.teams.iter().find(|t| t.team == name)
    }

    /// Columns: team, champion_pct, top4_pct, relegation_pct, mean_points.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        for t in &self.teams {
            w.serialize(t)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text table sorted by title chance, two decimals.
    pub fn render(&self) -> String {
        let mut rows: Vec<&TeamProbabilities> = self.teams.iter().collect();
        rows.sort_by(|a, b| {
            b.champion_pct
                .total_cmp(&a.champion_pct)
                .then(a.relegation_pct.total_cmp(&b.relegation_pct))
                .then_with(|| a.team.cmp(&b.team))
        });
        let width = rows.iter().map(|r| r.team.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>8}  {:>10}  {:>11}",
            "Team", "Champion", "Top 4", "Relegation", "Mean points"
        );
        for r in rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>8.2}  {:>8.2}  {:>10.2}  {:>11.2}",
                r.team, r.champion_pct, r.top4_pct, r.relegation_pct, r.mean_points
            );
        }
        let _ = writeln!(
            out,
            "mean points of the lowest surviving team: {:.2}",
            self.mean_survival_points
        );
        out
    }
}

/// `{"<subset>": {"seasons_violating": .., "teams_violating": ..}}`.
pub fn forty_point_json(subset: Subset, report: FortyPointReport) -> Result<String> {
    let mut map = serde_json::Map::new();
    map.insert(subset.label().to_owned(), serde_json::to_value(report)?);
    Ok(serde_json::to_string_pretty(&serde_json::Value::Object(
        map,
    ))?)
}
