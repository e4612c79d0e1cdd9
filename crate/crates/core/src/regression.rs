//! Per-team Poisson scoring rates from a log-link GLM fitted by iteratively
//! reweighted least squares.
//!
//! The model has one indicator column per team and no intercept, so each
//! coefficient is the log of that team's weighted mean goals at the venue.
//! The IRLS loop does not rely on that: it runs against any design through
//! [`LinearPredictor`], and the indicator design only supplies a cheaper
//! normal-equation solve.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{near_matches, WeightedMatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Venue {
    Home,
    Away,
}

/// Column layout: one indicator per team, in `teams` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignSpec {
    pub venue: Venue,
    pub teams: Vec<String>,
}

/// Indicator design with responses and prior weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub spec: DesignSpec,
    /// Column index of the single 1 in each row.
    pub team_of_row: Vec<usize>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl Design {
    pub fn rows(&self) -> usize {
        self.y.len()
    }
}

/// One observation per match: the home side's goals for [`Venue::Home`],
/// the away side's for [`Venue::Away`].
pub fn build_design(matches: &[WeightedMatch], venue: Venue) -> Result<Design> {
    if matches.is_empty() {
        return Err(Error::Empty("no matches to fit".into()));
    }
    fn pick(m: &WeightedMatch, venue: Venue) -> (&String, u32) {
        match venue {
            Venue::Home => (&m.record.home_team, m.record.home_goals),
            Venue::Away => (&m.record.away_team, m.record.away_goals),
        }
    }
    let mut teams: Vec<String> = matches.iter().map(|m| pick(m, venue).0.clone()).collect();
    teams.sort();
    teams.dedup();
    let index: HashMap<&str, usize> = teams
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();

    let mut team_of_row = Vec::with_capacity(matches.len());
    let mut y = Vec::with_capacity(matches.len());
    let mut w = Vec::with_capacity(matches.len());
    for m in matches {
        let (team, goals) = pick(m, venue);
        team_of_row.push(index[team.as_str()]);
        y.push(f64::from(goals));
        w.push(f64::from(m.weight));
    }
    Ok(Design {
        spec: DesignSpec { venue, teams },
        team_of_row,
        y,
        w,
    })
}

/// What IRLS needs from a design matrix.
pub trait LinearPredictor {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// η = Xβ.
    fn predict(&self, beta: &[f64], eta: &mut [f64]);
    /// Solve (Xᵀ W X) β = Xᵀ W z.
    fn solve_weighted(&self, wt: &[f64], z: &[f64]) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseDesign {
    pub x: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl LinearPredictor for DenseDesign {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn predict(&self, beta: &[f64], eta: &mut [f64]) {
        for (i, e) in eta.iter_mut().enumerate() {
            let row = &self.x[i * self.cols..(i + 1) * self.cols];
            *e = row.iter().zip(beta).map(|(a, b)| a * b).sum();
        }
    }

    fn solve_weighted(&self, wt: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        let k = self.cols;
        let mut a = vec![0.0; k * k];
        let mut rhs = vec![0.0; k];
        for i in 0..self.rows {
            let row = &self.x[i * k..(i + 1) * k];
            for p in 0..k {
                let xp = row[p] * wt[i];
                rhs[p] += xp * z[i];
                for q in 0..=p {
                    a[p * k + q] += xp * row[q];
                }
            }
        }
        ldlt_solve(&mut a, &mut rhs, k)?;
        Ok(rhs)
    }
}

/// In-place LDLᵀ solve of a symmetric positive-definite system whose
/// lower triangle is stored in `a`; the solution replaces `b`.
fn ldlt_solve(a: &mut [f64], b: &mut [f64], k: usize) -> Result<()> {
    let mut d = vec![0.0; k];
    for j in 0..k {
        let mut dj = a[j * k + j];
        for m in 0..j {
            let l = a[j * k + m];
            dj -= l * l * d[m];
        }
        if dj.is_nan() || dj <= 0.0 {
            return Err(Error::Domain(format!(
                "normal equations are singular at column {j}"
            )));
        }
        d[j] = dj;
        for i in j + 1..k {
            let mut v = a[i * k + j];
            for m in 0..j {
                v -= a[i * k + m] * a[j * k + m] * d[m];
            }
            a[i * k + j] = v / dj;
        }
    }
    for i in 0..k {
        for m in 0..i {
            b[i] -= a[i * k + m] * b[m];
        }
    }
    for i in 0..k {
        b[i] /= d[i];
    }
    for i in (0..k).rev() {
        for m in i + 1..k {
            b[i] -= a[m * k + i] * b[m];
        }
    }
    Ok(())
}

/// Indicator design with a diagonal normal-equation solve.
#[derive(Debug, Clone, Copy)]
pub struct IndicatorDesign<'a> {
    pub team_of_row: &'a [usize],
    pub cols: usize,
}

impl LinearPredictor for IndicatorDesign<'_> {
    fn rows(&self) -> usize {
        self.team_of_row.len()
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn predict(&self, beta: &[f64], eta: &mut [f64]) {
        for (e, &t) in eta.iter_mut().zip(self.team_of_row) {
            *e = beta[t];
        }
    }

    fn solve_weighted(&self, wt: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        let mut diag = vec![0.0; self.cols];
        let mut rhs = vec![0.0; self.cols];
        for (i, &t) in self.team_of_row.iter().enumerate() {
            diag[t] += wt[i];
            rhs[t] += wt[i] * z[i];
        }
        for (j, (r, d)) in rhs.iter_mut().zip(&diag).enumerate() {
            if d.is_nan() || *d <= 0.0 {
                return Err(Error::Domain(format!(
                    "normal equations are singular at column {j}"
                )));
            }
            *r /= d;
        }
        Ok(rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IrlsOptions {
    fn default() -> Self {
        IrlsOptions {
            tolerance: 1e-10,
            max_iterations: 50,
        }
    }
}

/// Raw IRLS output on the log scale.
#[derive(Debug, Clone, PartialEq)]
pub struct IrlsOutcome {
    pub beta: Vec<f64>,
    pub deviance: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn poisson_deviance(y: &[f64], mu: &[f64], w: &[f64]) -> f64 {
    let mut dev = 0.0;
    for ((&yi, &mi), &wi) in y.iter().zip(mu).zip(w) {
        let unit = if yi > 0.0 {
            yi * (yi / mi).ln() - (yi - mi)
        } else {
            mi
        };
        dev += 2.0 * wi * unit;
    }
    dev
}

/// Maximize the weighted Poisson log-likelihood with a log link.
///
/// Starts from μ = y + 0.1, then repeats: working response
/// z = η + (y - μ)/μ, working weight wμ, weighted least-squares solve,
/// until the largest coefficient change drops below the tolerance.
pub fn irls_poisson<D: LinearPredictor>(
    design: &D,
    y: &[f64],
    w: &[f64],
    opts: IrlsOptions,
) -> Result<IrlsOutcome> {
    let n = design.rows();
    if y.len() != n || w.len() != n {
        return Err(Error::Argument(
            "response and weight lengths must match the design".into(),
        ));
    }
    let mut mu: Vec<f64> = y.iter().map(|v| v + 0.1).collect();
    let mut eta: Vec<f64> = mu.iter().map(|m| m.ln()).collect();
    let mut z = vec![0.0; n];
    let mut wt = vec![0.0; n];
    let mut beta: Option<Vec<f64>> = None;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iterations {
        for i in 0..n {
            z[i] = eta[i] + (y[i] - mu[i]) / mu[i];
            wt[i] = w[i] * mu[i];
        }
        let next = design.solve_weighted(&wt, &z)?;
        iterations += 1;
        let change = beta.as_ref().map(|b| {
            b.iter()
                .zip(&next)
                .map(|(a, c)| (a - c).abs())
                .fold(0.0, f64::max)
        });
        design.predict(&next, &mut eta);
        for (m, e) in mu.iter_mut().zip(&eta) {
            *m = e.exp();
        }
        beta = Some(next);
        if change.is_some_and(|c| c < opts.tolerance) {
            converged = true;
            break;
        }
    }
    let beta = beta.unwrap_or_else(|| vec![0.0; design.cols()]);
    Ok(IrlsOutcome {
        deviance: poisson_deviance(y, &mu, w),
        beta,
        iterations,
        converged,
    })
}

/// How the normal equations are solved inside IRLS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Diagonal solve exploiting the one-indicator-per-row structure.
    #[default]
    Indicator,
    /// Dense LDLᵀ on the full normal matrix.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlmFit {
    pub venue: Venue,
    pub teams: Vec<String>,
    /// Log-scale rate per team.
    pub coefficients: Vec<f64>,
    pub deviance: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Teams that never scored at this venue; their rate is clamped to
    /// 0.5 / (their weighted row count) instead of zero.
    pub clamped: Vec<String>,
}

impl GlmFit {
    pub fn rate(&self, team: &str) -> Option<f64> {
        let i = self.teams.iter().position(|t| t == team)?;
        Some(self.coefficients[i].exp())
    }
}

pub fn fit_poisson_glm(design: &Design) -> Result<GlmFit> {
    fit_poisson_glm_with(design, Solver::default(), IrlsOptions::default())
}

pub fn fit_poisson_glm_with(design: &Design, solver: Solver, opts: IrlsOptions) -> Result<GlmFit> {
    let k = design.spec.teams.len();
    if design.w.iter().any(|&w| w.is_nan() || w < 1.0) {
        return Err(Error::Argument("prior weights must be at least 1".into()));
    }
    if design.y.iter().any(|y| !y.is_finite() || *y < 0.0) {
        return Err(Error::Argument(
            "responses must be finite non-negative counts".into(),
        ));
    }
    let mut weight = vec![0.0; k];
    let mut total = vec![0.0; k];
    for (i, &t) in design.team_of_row.iter().enumerate() {
        weight[t] += design.w[i];
        total[t] += design.w[i] * design.y[i];
    }
    if let Some(t) = weight.iter().position(|&w| w == 0.0) {
        return Err(Error::NoObservations(design.spec.teams[t].clone()));
    }

    // Zero-scoring teams have an unbounded MLE; fit the rest and clamp them.
    let keep: Vec<usize> = (0..k).filter(|&t| total[t] > 0.0).collect();
    let mut column = vec![usize::MAX; k];
    for (c, &t) in keep.iter().enumerate() {
        column[t] = c;
    }
    let rows: Vec<usize> = (0..design.rows())
        .filter(|&i| column[design.team_of_row[i]] != usize::MAX)
        .collect();
    let team_of_row: Vec<usize> = rows
        .iter()
        .map(|&i| column[design.team_of_row[i]])
        .collect();
    let y: Vec<f64> = rows.iter().map(|&i| design.y[i]).collect();
    let w: Vec<f64> = rows.iter().map(|&i| design.w[i]).collect();

    let outcome = if keep.is_empty() {
        IrlsOutcome {
            beta: Vec::new(),
            deviance: 0.0,
            iterations: 0,
            converged: true,
        }
    } else {
        let ind = IndicatorDesign {
            team_of_row: &team_of_row,
            cols: keep.len(),
        };
        match solver {
            Solver::Indicator => irls_poisson(&ind, &y, &w, opts)?,
            Solver::Dense => {
                let cols = keep.len();
                let mut x = vec![0.0; rows.len() * cols];
                for (i, &t) in team_of_row.iter().enumerate() {
                    x[i * cols + t] = 1.0;
                }
                let dense = DenseDesign {
                    x,
                    rows: rows.len(),
                    cols,
                };
                irls_poisson(&dense, &y, &w, opts)?
            }
        }
    };

    let mut coefficients = vec![0.0; k];
    let mut clamped = Vec::new();
    for t in 0..k {
        coefficients[t] = if column[t] == usize::MAX {
            clamped.push(design.spec.teams[t].clone());
            (0.5 / weight[t]).ln()
        } else {
            outcome.beta[column[t]]
        };
    }
    // clamped teams contribute their (tiny) fitted means to the deviance
    let extra: f64 = (0..k)
        .filter(|&t| column[t] == usize::MAX)
        .map(|t| 2.0 * weight[t] * coefficients[t].exp())
        .sum();

    Ok(GlmFit {
        venue: design.spec.venue,
        teams: design.spec.teams.clone(),
        coefficients,
        deviance: outcome.deviance + extra,
        iterations: outcome.iterations,
        converged: outcome.converged,
        clamped,
    })
}

/// Home and away scoring rates for one team, in goals per match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeamRates {
    pub lambda_home: f64,
    pub lambda_away: f64,
}

/// Per-team scoring rates for the teams in the season being simulated.
///
/// Serialized as CSV with header `team,lambda_home,lambda_away`, or as JSON
/// `{"teams":[{"team":..,"lambda_home":..,"lambda_away":..}]}`. Rates are
/// written in shortest round-trip form, so a written table reloads to the
/// identical values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    rates: BTreeMap<String, TeamRates>,
}

#[derive(Serialize, Deserialize)]
struct RateRow {
    team: String,
    lambda_home: f64,
    lambda_away: f64,
}

#[derive(Serialize, Deserialize)]
struct RateDoc {
    teams: Vec<RateRow>,
}

impl RateTable {
    pub fn from_rates(rows: impl IntoIterator<Item = (String, TeamRates)>) -> Result<Self> {
        let mut rates = BTreeMap::new();
        for (team, r) in rows {
            for v in [r.lambda_home, r.lambda_away] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Domain(format!(
                        "rate for {team} must be positive, got {v}"
                    )));
                }
            }
            if rates.insert(team.clone(), r).is_some() {
                return Err(Error::Argument(format!("team {team} listed twice")));
            }
        }
        Ok(RateTable { rates })
    }

    pub fn get(&self, team: &str) -> Option<TeamRates> {
        self.rates.get(team).copied()
    }

    /// Teams in name order.
    pub fn teams(&self) -> impl Iterator<Item = &str> {
        self.rates.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TeamRates)> {
        self.rates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    fn rows(&self) -> Vec<RateRow> {
        self.iter()
            .map(|(team, r)| RateRow {
                team: team.to_owned(),
                lambda_home: r.lambda_home,
                lambda_away: r.lambda_away,
            })
            .collect()
    }

    fn from_rows(rows: Vec<RateRow>) -> Result<Self> {
        Self::from_rates(rows.into_iter().map(|r| {
            (
                r.team,
                TeamRates {
                    lambda_home: r.lambda_home,
                    lambda_away: r.lambda_away,
                },
            )
        }))
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(source);
        let rows = r.deserialize().collect::<Result<Vec<RateRow>, _>>()?;
        if rows.is_empty() {
            return Err(Error::Empty("rate table has no rows".into()));
        }
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RateDoc {
            teams: self.rows(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RateDoc = serde_json::from_str(text)?;
        Self::from_rows(doc.teams)
    }
}

/// Back-transform both fits to goals per match for every roster team.
pub fn extract_rates(home: &GlmFit, away: &GlmFit, roster: &[String]) -> Result<RateTable> {
    for fit in [home, away] {
        if !fit.converged {
            return Err(Error::NotConverged(format!("{:?} rate model", fit.venue)));
        }
    }
    let lookup = |fit: &GlmFit, team: &str| {
        fit.rate(team).ok_or_else(|| Error::UnknownTeam {
            name: team.to_owned(),
            suggestions: near_matches(team, fit.teams.iter().map(String::as_str)),
        })
    };
    RateTable::from_rates(
        roster
            .iter()
            .map(|team| {
                Ok((
                    team.clone(),
                    TeamRates {
                        lambda_home: lookup(home, team)?,
                        lambda_away: lookup(away, team)?,
                    },
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{MatchRecord, SeasonId};

    fn wm(home: &str, away: &str, hg: u32, ag: u32, weight: u32) -> WeightedMatch {
        WeightedMatch {
            record: MatchRecord {
                season: SeasonId(2017),
                home_team: home.into(),
                away_team: away.into(),
                home_goals: hg,
                away_goals: ag,
            },
            weight,
        }
    }

    #[test]
    fn design_rows_by_venue() {
        let m = [wm("Man United", "Leicester", 2, 1, 1)];
        let h = build_design(&m, Venue::Home).unwrap();
        assert_eq!(h.spec.teams, ["Man United"]);
        assert_eq!((h.y[0], h.w[0]), (2.0, 1.0));
        let a = build_design(&m, Venue::Away).unwrap();
        assert_eq!(a.spec.teams, ["Leicester"]);
        assert_eq!((a.y[0], a.w[0]), (1.0, 1.0));
        assert!(build_design(&[], Venue::Home).is_err());
    }

    fn single_team(y: &[f64], w: &[f64]) -> Design {
        Design {
            spec: DesignSpec {
                venue: Venue::Home,
                teams: vec!["T".into()],
            },
            team_of_row: vec![0; y.len()],
            y: y.to_vec(),
            w: w.to_vec(),
        }
    }

    #[test]
    fn weighted_mean_rates() {
        let f = fit_poisson_glm(&single_team(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0])).unwrap();
        assert!(f.converged);
        assert!((f.rate("T").unwrap() - 2.0).abs() < 1e-12);
        let g = fit_poisson_glm(&single_team(&[0.0, 4.0], &[3.0, 1.0])).unwrap();
        assert!((g.rate("T").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_scoring_team_is_clamped() {
        let d = Design {
            spec: DesignSpec {
                venue: Venue::Away,
                teams: vec!["A".into(), "B".into()],
            },
            team_of_row: vec![0, 0, 1, 1],
            y: vec![0.0, 0.0, 1.0, 2.0],
            w: vec![1.0, 3.0, 1.0, 1.0],
        };
        let f = fit_poisson_glm(&d).unwrap();
        assert_eq!(f.clamped, ["A"]);
        assert!((f.rate("A").unwrap() - 0.125).abs() < 1e-15);
        assert!((f.rate("B").unwrap() - 1.5).abs() < 1e-12);
        assert!(f.converged);
    }

    #[test]
    fn missing_team_and_bad_weights() {
        let mut d = single_team(&[1.0], &[1.0]);
        d.spec.teams.push("Ghost".into());
        assert!(matches!(fit_poisson_glm(&d), Err(Error::NoObservations(t)) if t == "Ghost"));
        assert!(fit_poisson_glm(&single_team(&[1.0], &[0.5])).is_err());
    }

    #[test]
    fn non_convergence_is_flagged() {
        let opts = IrlsOptions {
            max_iterations: 1,
            ..IrlsOptions::default()
        };
        let f = fit_poisson_glm_with(
            &single_team(&[1.0, 5.0], &[1.0, 1.0]),
            Solver::Indicator,
            opts,
        )
        .unwrap();
        assert!(!f.converged);
        assert_eq!(f.iterations, 1);
    }

    #[test]
    fn ldlt_matches_known_solution() {
        // [[4,2],[2,3]] x = [2, 1] -> x = [0.5, 0]
        let mut a = vec![4.0, 0.0, 2.0, 3.0];
        let mut b = vec![2.0, 1.0];
        ldlt_solve(&mut a, &mut b, 2).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-15 && b[1].abs() < 1e-15);
        let mut s = vec![0.0];
        assert!(ldlt_solve(&mut s, &mut [1.0], 1).is_err());
    }

    #[test]
    fn extract_and_roster() {
        let m = [wm("A", "B", 2, 1, 1), wm("B", "A", 0, 3, 1)];
        let h = fit_poisson_glm(&build_design(&m, Venue::Home).unwrap()).unwrap();
        let a = fit_poisson_glm(&build_design(&m, Venue::Away).unwrap()).unwrap();
        let t = extract_rates(&h, &a, &["A".into(), "B".into()]).unwrap();
        let ra = t.get("A").unwrap();
        assert!((ra.lambda_home - 2.0).abs() < 1e-12 && (ra.lambda_away - 3.0).abs() < 1e-12);
        assert!(matches!(
            extract_rates(&h, &a, &["C".into()]),
            Err(Error::UnknownTeam { .. })
        ));
    }

    #[test]
    fn zero_coefficient_is_unit_rate() {
        let f = GlmFit {
            venue: Venue::Home,
            teams: vec!["X".into()],
            coefficients: vec![0.0],
            deviance: 0.0,
            iterations: 1,
            converged: true,
            clamped: vec![],
        };
        assert_eq!(f.rate("X"), Some(1.0));
    }

    #[test]
    fn rate_table_formats_round_trip() {
        let t = RateTable::from_rates([
            (
                "Man City".to_string(),
                TeamRates {
                    lambda_home: 1.832,
                    lambda_away: 1.2,
                },
            ),
            (
                "Huddersfield".to_string(),
                TeamRates {
                    lambda_home: 0.1 + 0.2,
                    lambda_away: 0.632,
                },
            ),
        ])
        .unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("team,lambda_home,lambda_away\n"));
        assert_eq!(RateTable::read_csv(&buf[..]).unwrap(), t);
        assert_eq!(RateTable::from_json(&t.to_json().unwrap()).unwrap(), t);
        assert!(RateTable::from_rates([(
            "X".to_string(),
            TeamRates {
                lambda_home: 0.0,
                lambda_away: 1.0
            }
        )])
        .is_err());
    }
}
