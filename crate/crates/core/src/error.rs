use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate region: employment {employment} is not positive")]
    DegenerateRegion { employment: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("correlation matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("design matrix is rank deficient: column `{column}` is collinear")]
    RankDeficient { column: String },

    #[error("weak or rank-deficient first stage (condition number {condition:.3e})")]
    WeakInstruments { condition: f64 },

    #[error("unbalanced panel: {0}")]
    Panel(String),

    #[error("scenario `{scenario}`, replication {replication}{}", region.map(|r| format!(", region {r}")).unwrap_or_default())]
    Replication {
        scenario: String,
        replication: u64,
        region: Option<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn with_region(self, region: usize) -> Error {
        match self {
            Error::Replication { .. } => self,
            other => Error::Replication {
                scenario: String::new(),
                replication: 0,
                region: Some(region),
                source: Box::new(other),
            },
        }
    }

    pub(crate) fn in_replication(self, scenario: &str, replication: u64) -> Error {
        match self {
            Error::Replication { region, source, .. } => Error::Replication {
                scenario: scenario.to_string(),
                replication,
                region,
                source,
            },
            other => Error::Replication {
                scenario: scenario.to_string(),
                replication,
                region: None,
                source: Box::new(other),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
