use crate::ingest::SeasonId;

/// Errors raised by the library layers (ingestion, numerics, fitting, simulation).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("missing required column {0}")]
    MissingColumn(String),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("season {0} has no entry in the weight schedule")]
    MissingSeason(SeasonId),

    #[error("unknown team {name:?}{}", suggest(.suggestions))]
    UnknownTeam {
        name: String,
        suggestions: Vec<String>,
    },

    #[error("team {0:?} has no observations")]
    NoObservations(String),

    #[error("fit did not converge for {0}")]
    NotConverged(String),

    #[error("expected count in bin {bin} is zero; merge it with a neighbouring bin")]
    ZeroExpected { bin: String },

    #[error("incomplete season: {0}")]
    IncompleteSeason(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
