//! Loading historical results and goal-time logs.
//!
//! Match files follow the football-data.co.uk layout: one CSV per season
//! with at least `Div, Date, HomeTeam, AwayTeam, FTHG, FTAG`. The season a
//! row belongs to is always taken from the file it came from (via the
//! manifest), never from `Date`, whose format changes across the decades.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First season of the league's current format.
pub const FIRST_SEASON: SeasonId = SeasonId(1992);
/// Last season used for training.
pub const LAST_TRAINING_SEASON: SeasonId = SeasonId(2017);
/// The season being predicted; never part of a training subset.
pub const TARGET_SEASON: SeasonId = SeasonId(2018);

const REQUIRED_COLUMNS: [&str; 6] = ["Div", "Date", "HomeTeam", "AwayTeam", "FTHG", "FTAG"];

/// A season identified by the calendar year it starts in (1992 is 1992-93).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeasonId(pub u16);

impl SeasonId {
    pub fn start_year(self) -> u16 {
        self.0
    }
}

impl fmt::Display for SeasonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{:02}", self.0, (self.0 + 1) % 100)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub season: SeasonId,
    pub home_team: String,
    pub away_team: String,
    pub home_goals: u32,
    pub away_goals: u32,
}

/// A match carrying an integer duplication multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMatch {
    pub record: MatchRecord,
    pub weight: u32,
}

/// Which seasons feed the rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subset {
    /// Every season before the target season.
    #[serde(rename = "all")]
    All,
    /// 2009-10 through 2017-18.
    #[serde(rename = "2010s")]
    Decade2010s,
    /// Every season, recent ones duplicated per [`weight_schedule`].
    #[serde(rename = "weighted")]
    Weighted,
}

impl Subset {
    pub const ALL: [Subset; 3] = [Subset::All, Subset::Decade2010s, Subset::Weighted];

    pub fn label(self) -> &'static str {
        match self {
            Subset::All => "all",
            Subset::Decade2010s => "2010s",
            Subset::Weighted => "weighted",
        }
    }

    /// Training matches for this subset, with weights applied.
    pub fn select(self, matches: &[MatchRecord]) -> Result<Vec<WeightedMatch>> {
        match self {
            Subset::All => {
                let m = filter_seasons(matches, FIRST_SEASON, LAST_TRAINING_SEASON)?;
                Ok(unit_weights(m))
            }
            Subset::Decade2010s => {
                let m = filter_seasons(matches, SeasonId(2009), LAST_TRAINING_SEASON)?;
                Ok(unit_weights(m))
            }
            Subset::Weighted => {
                let m = filter_seasons(matches, FIRST_SEASON, LAST_TRAINING_SEASON)?;
                apply_weights(&m, &weight_schedule())
            }
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Subset::All),
            "2010s" => Ok(Subset::Decade2010s),
            "weighted" => Ok(Subset::Weighted),
            other => Err(Error::Argument(format!(
                "unknown subset {other:?} (expected all, 2010s or weighted)"
            ))),
        }
    }
}

fn unit_weights(m: Vec<MatchRecord>) -> Vec<WeightedMatch> {
    m.into_iter()
        .map(|record| WeightedMatch { record, weight: 1 })
        .collect()
}

/// Decode bytes as UTF-8, falling back to Latin-1 for older files.
fn decode_text(bytes: &[u8]) -> String {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    match std::str::from_utf8(bytes) {
        Ok(s) => s.to_owned(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}

fn parse_goals(field: &str, column: &str, line: u64) -> Result<u32> {
    field.trim().parse::<u32>().map_err(|_| Error::Row {
        line,
        message: format!("{column} is not a non-negative integer: {field:?}"),
    })
}

/// Parse one season's results file.
pub fn parse_season<R: Read>(season: SeasonId, mut source: R) -> Result<Vec<MatchRecord>> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = decode_text(&bytes);
    if text.trim().is_empty() {
        return Err(Error::Empty(format!("results file for season {season}")));
    }

    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut idx = [0usize; 6];
    for (slot, name) in idx.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))?;
    }
    let [_, _, home_i, away_i, hg_i, ag_i] = idx;

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        // football-data pads some files with rows of bare commas
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |i: usize| row.get(i).unwrap_or("");
        let home_team = field(home_i).trim().to_owned();
        let away_team = field(away_i).trim().to_owned();
        if home_team.is_empty() || away_team.is_empty() {
            return Err(Error::Row {
                line,
                message: "missing team name".into(),
            });
        }
        if home_team == away_team {
            return Err(Error::Row {
                line,
                message: format!("{home_team} cannot play itself"),
            });
        }
        out.push(MatchRecord {
            season,
            home_goals: parse_goals(field(hg_i), "FTHG", line)?,
            away_goals: parse_goals(field(ag_i), "FTAG", line)?,
            home_team,
            away_team,
        });
    }
    if out.is_empty() {
        return Err(Error::Empty(format!("no matches in season {season}")));
    }
    Ok(out)
}

/// Parse several season files, concatenating in the given order.
pub fn parse_matches<I, R>(sources: I) -> Result<Vec<MatchRecord>>
where
    I: IntoIterator<Item = (SeasonId, R)>,
    R: Read,
{
    let mut all = Vec::new();
    for (season, src) in sources {
        all.extend(parse_season(season, src)?);
    }
    Ok(all)
}

/// Write matches in the minimal football-data layout. `Date` is left blank
/// because the season comes from the manifest, not the row.
pub fn write_matches<W: Write>(matches: &[MatchRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(REQUIRED_COLUMNS)?;
    for m in matches {
        w.write_record([
            "E0",
            "",
            m.home_team.as_str(),
            m.away_team.as_str(),
            &m.home_goals.to_string(),
            &m.away_goals.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Records with `lo <= season <= hi`, order preserved.
pub fn filter_seasons(
    matches: &[MatchRecord],
    lo: SeasonId,
    hi: SeasonId,
) -> Result<Vec<MatchRecord>> {
    if lo > hi {
        return Err(Error::Argument(format!("season range {lo}..{hi} is empty")));
    }
    Ok(matches
        .iter()
        .filter(|m| (lo..=hi).contains(&m.season))
        .cloned()
        .collect())
}

/// Duplication weights for the recency-weighted subset: 1 through 2012-13,
/// then 2, 3, 4 for 2013-14..2015-16, and 8 for the last two seasons.
pub fn weight_schedule() -> BTreeMap<SeasonId, u32> {
    let mut s: BTreeMap<SeasonId, u32> =
        (FIRST_SEASON.0..=2012).map(|y| (SeasonId(y), 1)).collect();
    s.insert(SeasonId(2013), 2);
    s.insert(SeasonId(2014), 3);
    s.insert(SeasonId(2015), 4);
    s.insert(SeasonId(2016), 8);
    s.insert(SeasonId(2017), 8);
    s
}

pub fn apply_weights(
    matches: &[MatchRecord],
    schedule: &BTreeMap<SeasonId, u32>,
) -> Result<Vec<WeightedMatch>> {
    matches
        .iter()
        .map(|m| {
            let weight = *schedule
                .get(&m.season)
                .ok_or(Error::MissingSeason(m.season))?;
            if weight == 0 {
                return Err(Error::Argument(format!("season {} has weight 0", m.season)));
            }
            Ok(WeightedMatch {
                record: m.clone(),
                weight,
            })
        })
        .collect()
}

/// Every team that appears in `matches`, sorted.
pub fn teams(matches: &[MatchRecord]) -> Vec<String> {
    let mut t: Vec<String> = matches
        .iter()
        .flat_map(|m| [m.home_team.clone(), m.away_team.clone()])
        .collect();
    t.sort();
    t.dedup();
    t
}

/// Names close to `name`, best first.
pub fn near_matches<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let needle = name.to_lowercase();
    let mut scored: Vec<(f64, &str)> = candidates
        .into_iter()
        .map(|c| (strsim::jaro_winkler(&needle, &c.to_lowercase()), c))
        .filter(|(s, _)| *s >= 0.75)
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored
        .into_iter()
        .take(3)
        .map(|(_, c)| c.to_owned())
        .collect()
}

/// Goals scored by `team` in each of its matches, in input order.
pub fn goals_scored_by(matches: &[MatchRecord], team: &str) -> Result<Vec<u32>> {
    let goals: Vec<u32> = matches
        .iter()
        .filter_map(|m| {
            if m.home_team == team {
                Some(m.home_goals)
            } else if m.away_team == team {
                Some(m.away_goals)
            } else {
                None
            }
        })
        .collect();
    if goals.is_empty() {
        let all = teams(matches);
        return Err(Error::UnknownTeam {
            name: team.to_owned(),
            suggestions: near_matches(team, all.iter().map(String::as_str)),
        });
    }
    Ok(goals)
}

/// Maps seasons to their results files.
///
/// One `start_year,path` line per season; blank lines, `#` comments and a
/// `season,path` header are skipped. Relative paths resolve against the
/// manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<(SeasonId, PathBuf)>,
}

impl Manifest {
    pub const FILE_NAME: &'static str = "manifest.csv";

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        let mut first = true;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (year, path) = line.split_once(',').ok_or_else(|| Error::Row {
                line: i as u64 + 1,
                message: format!("expected `start_year,path`, got {line:?}"),
            })?;
            let year = year.trim();
            if std::mem::take(&mut first) && year.parse::<u16>().is_err() {
                continue;
            }
            let year: u16 = year.parse().map_err(|_| Error::Row {
                line: i as u64 + 1,
                message: format!("bad season year {year:?}"),
            })?;
            entries.push((SeasonId(year), base.join(path.trim())));
        }
        if entries.is_empty() {
            return Err(Error::Empty("manifest lists no seasons".into()));
        }
        let mut seen = entries.iter().map(|e| e.0).collect::<Vec<_>>();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Argument("manifest lists a season twice".into()));
        }
        Ok(Manifest { entries })
    }

    /// Read `<dir>/manifest.csv`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(dir.join(Self::FILE_NAME))?;
        Self::parse(&text, dir)
    }

    pub fn load_matches(&self) -> Result<Vec<MatchRecord>> {
        let mut all = Vec::new();
        for (season, path) in &self.entries {
            let file = std::fs::File::open(path)?;
            all.extend(parse_season(*season, file)?);
        }
        Ok(all)
    }

    /// SHA-256 over the manifest entries and file contents, in manifest order.
    pub fn checksum(&self) -> Result<String> {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for (season, path) in &self.entries {
            h.update(season.0.to_le_bytes());
            h.update(std::fs::read(path)?);
        }
        Ok(hex::encode(h.finalize()))
    }
}

/// One goal from a team's season log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoalTimeRecord {
    /// Stoppage-inclusive match minute.
    pub minute: u32,
    pub matchweek: u32,
    pub stoppage_h1: u32,
    pub stoppage_h2: u32,
    /// Minutes since the previous goal on the season-long playing clock.
    pub gap: f64,
}

impl GoalTimeRecord {
    pub fn match_minutes(&self) -> u32 {
        90 + self.stoppage_h1 + self.stoppage_h2
    }
}

/// A goal minute rescaled by the length of its match.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedGoalTime(f64);

impl NormalizedGoalTime {
    pub fn fraction(self) -> f64 {
        self.0
    }
}

/// Parse a goal-time log: header row, then
/// `minute, matchweek, stoppage_h1, stoppage_h2, gap` per goal.
pub fn parse_goal_times<R: Read>(source: R) -> Result<Vec<GoalTimeRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut out: Vec<GoalTimeRecord> = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(str::is_empty) {
            continue;
        }
        if row.len() != 5 {
            return Err(Error::Row {
                line,
                message: format!("expected 5 columns, found {}", row.len()),
            });
        }
        let int = |i: usize, what: &str| -> Result<u32> {
            row[i].parse::<u32>().map_err(|_| Error::Row {
                line,
                message: format!("{what} is not a non-negative integer: {:?}", &row[i]),
            })
        };
        let rec = GoalTimeRecord {
            minute: int(0, "minute")?,
            matchweek: int(1, "matchweek")?,
            stoppage_h1: int(2, "stoppage_h1")?,
            stoppage_h2: int(3, "stoppage_h2")?,
            gap: row[4].parse::<f64>().map_err(|_| Error::Row {
                line,
                message: format!("gap is not a number: {:?}", &row[4]),
            })?,
        };
        let bad = |message: String| Err(Error::Row { line, message });
        if rec.minute == 0 || rec.minute > rec.match_minutes() {
            return bad(format!(
                "minute {} outside 1..={} for this match",
                rec.minute,
                rec.match_minutes()
            ));
        }
        if !(1..=38).contains(&rec.matchweek) {
            return bad(format!("matchweek {} outside 1..=38", rec.matchweek));
        }
        if !rec.gap.is_finite() || rec.gap < 0.0 {
            return bad(format!("negative gap {}", rec.gap));
        }
        if !out.is_empty() && rec.gap == 0.0 {
            return bad("gap must be positive after the first goal".into());
        }
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::Empty("goal-time log has no rows".into()));
    }
    Ok(out)
}

pub fn normalize_minutes(records: &[GoalTimeRecord]) -> Result<Vec<NormalizedGoalTime>> {
    if records.is_empty() {
        return Err(Error::Empty("no goal times to normalize".into()));
    }
    Ok(records
        .iter()
        .map(|r| NormalizedGoalTime(f64::from(r.minute) / f64::from(r.match_minutes())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n";

    #[test]
    fn maps_fields_and_keeps_manifest_season() {
        let csv = format!("{HEADER}E0,10/08/2018,Man United,Leicester,2,1,H\n");
        let m = parse_season(SeasonId(2017), csv.as_bytes()).unwrap();
        assert_eq!(
            m,
            vec![MatchRecord {
                season: SeasonId(2017),
                home_team: "Man United".into(),
                away_team: "Leicester".into(),
                home_goals: 2,
                away_goals: 1,
            }]
        );
    }

    #[test]
    fn missing_column_is_named() {
        let csv = "Div,Date,HomeTeam,AwayTeam,FTHG\nE0,x,A,B,1\n";
        match parse_season(SeasonId(2000), csv.as_bytes()) {
            Err(Error::MissingColumn(c)) => assert_eq!(c, "FTAG"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_goals_report_line() {
        let csv = format!("{HEADER}E0,d,A,B,1,0,H\nE0,d,C,D,x,0,H\n");
        match parse_season(SeasonId(2000), csv.as_bytes()) {
            Err(Error::Row { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("FTHG"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(matches!(
            parse_season(SeasonId(2000), &b""[..]),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            parse_season(SeasonId(2000), HEADER.as_bytes()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn trims_names_skips_padding_and_reads_latin1() {
        let mut bytes = HEADER.as_bytes().to_vec();
        bytes.extend_from_slice(b"E0,d, Man City ,Leicester ,1,1,D\n,,,,,,\n");
        bytes.extend_from_slice(b"E0,d,M\xfcnchen,Leicester,0,3,A\n");
        let m = parse_season(SeasonId(2001), &bytes[..]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].home_team, "Man City");
        assert_eq!(m[0].away_team, "Leicester");
        assert_eq!(m[1].home_team, "M\u{fc}nchen");
    }

    #[test]
    fn team_cannot_play_itself() {
        let csv = format!("{HEADER}E0,d,A,A,1,0,H\n");
        assert!(matches!(
            parse_season(SeasonId(2000), csv.as_bytes()),
            Err(Error::Row { .. })
        ));
    }

    #[test]
    fn schedule_values() {
        let s = weight_schedule();
        assert_eq!(s[&SeasonId(2000)], 1);
        assert_eq!(s[&SeasonId(2012)], 1);
        assert_eq!(s[&SeasonId(2013)], 2);
        assert_eq!(s[&SeasonId(2014)], 3);
        assert_eq!(s[&SeasonId(2015)], 4);
        assert_eq!(s[&SeasonId(2016)], 8);
        assert_eq!(s[&SeasonId(2017)], 8);
        assert_eq!(s.len(), 26);
        assert!(!s.contains_key(&TARGET_SEASON));
    }

    fn rec(season: u16) -> MatchRecord {
        MatchRecord {
            season: SeasonId(season),
            home_team: "A".into(),
            away_team: "B".into(),
            home_goals: 0,
            away_goals: 0,
        }
    }

    #[test]
    fn weights_follow_season() {
        let m: Vec<_> = std::iter::repeat_with(|| rec(2017)).take(380).collect();
        let w = apply_weights(&m, &weight_schedule()).unwrap();
        assert!(w.iter().all(|x| x.weight == 8));
        assert_eq!(w.iter().map(|x| x.weight).sum::<u32>(), 3040);
        assert_eq!(
            apply_weights(&[rec(2013)], &weight_schedule()).unwrap()[0].weight,
            2
        );
        match apply_weights(&[rec(2018)], &weight_schedule()) {
            Err(Error::MissingSeason(s)) => assert_eq!(s, SeasonId(2018)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn filter_bounds() {
        let m: Vec<_> = [1992, 2008, 2009, 2017, 2018]
            .into_iter()
            .map(rec)
            .collect();
        let tens = filter_seasons(&m, SeasonId(2009), SeasonId(2017)).unwrap();
        assert_eq!(
            tens.iter().map(|r| r.season.0).collect::<Vec<_>>(),
            [2009, 2017]
        );
        assert_eq!(
            filter_seasons(&m, SeasonId(1992), SeasonId(2018)).unwrap(),
            m
        );
        assert!(filter_seasons(&m, SeasonId(2010), SeasonId(2009)).is_err());
    }

    #[test]
    fn subsets_exclude_target_season() {
        let m: Vec<_> = [1992, 2008, 2016, 2017, 2018]
            .into_iter()
            .map(rec)
            .collect();
        for s in Subset::ALL {
            let sel = s.select(&m).unwrap();
            assert!(sel.iter().all(|w| w.record.season <= LAST_TRAINING_SEASON));
        }
        let w = Subset::Weighted.select(&m).unwrap();
        assert_eq!(w.iter().map(|x| x.weight).collect::<Vec<_>>(), [1, 1, 8, 8]);
        assert_eq!(Subset::Decade2010s.select(&m).unwrap().len(), 2);
    }

    #[test]
    fn goal_time_rows() {
        let r = parse_goal_times(&b"minute,matchweek,h1,h2,gap\n53,1,2,4,53\n"[..]).unwrap();
        assert_eq!(
            r,
            vec![GoalTimeRecord {
                minute: 53,
                matchweek: 1,
                stoppage_h1: 2,
                stoppage_h2: 4,
                gap: 53.0
            }]
        );
        let over = parse_goal_times(&b"m,w,a,b,g\n95,1,1,3,10\n"[..]);
        assert!(matches!(over, Err(Error::Row { line: 2, .. })));
        let neg = parse_goal_times(&b"m,w,a,b,g\n10,1,1,3,5\n20,1,1,3,-2\n"[..]);
        assert!(matches!(neg, Err(Error::Row { line: 3, .. })));
        assert!(matches!(
            parse_goal_times(&b"m,w,a,b,g\n"[..]),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn normalized_minutes() {
        let r = |minute, h1, h2| GoalTimeRecord {
            minute,
            matchweek: 1,
            stoppage_h1: h1,
            stoppage_h2: h2,
            gap: 1.0,
        };
        let n = normalize_minutes(&[r(45, 2, 3), r(95, 0, 5)]).unwrap();
        assert!((n[0].fraction() - 45.0 / 95.0).abs() < 1e-15);
        assert_eq!(n[1].fraction(), 1.0);
        assert!(normalize_minutes(&[]).is_err());
    }

    #[test]
    fn unknown_team_suggests() {
        let m = vec![MatchRecord {
            season: SeasonId(2000),
            home_team: "Man United".into(),
            away_team: "Leicester".into(),
            home_goals: 1,
            away_goals: 0,
        }];
        match goals_scored_by(&m, "Man Utd") {
            Err(Error::UnknownTeam { suggestions, .. }) => {
                assert_eq!(suggestions.first().map(String::as_str), Some("Man United"))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(goals_scored_by(&m, "Leicester").unwrap(), [0]);
    }

    #[test]
    fn manifest_lines() {
        let m = Manifest::parse(
            "season,path\n# old\n1992, a.csv\n\n1993,b.csv\n",
            Path::new("/d"),
        )
        .unwrap();
        assert_eq!(
            m.entries,
            vec![
                (SeasonId(1992), PathBuf::from("/d/a.csv")),
                (SeasonId(1993), PathBuf::from("/d/b.csv"))
            ]
        );
        assert!(Manifest::parse("1992,a\n1992,b\n", Path::new(".")).is_err());
        assert!(Manifest::parse("", Path::new(".")).is_err());
    }

    #[test]
    fn season_display() {
        assert_eq!(SeasonId(1999).to_string(), "1999-00");
        assert_eq!(SeasonId(2017).to_string(), "2017-18");
    }
}
