use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: need at least {needed} points, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("no funding rate precedes {0}")]
    NoRateCoverage(chrono::NaiveDate),

    #[error("expected a {expected} series, got {got}")]
    WrongPeriod { expected: &'static str, got: &'static str },

    #[error("empty input")]
    EmptyInput,

    #[error("series do not share a period")]
    MixedPeriods,

    #[error("insufficient overlap: need {needed} common dates, got {got}")]
    InsufficientOverlap { needed: usize, got: usize },

    #[error("ranked P&L changes sign inside the fitting window")]
    SignChangeInWindow,

    #[error("too few points in window: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),

    #[error("moment does not exist: {0}")]
    MomentDoesNotExist(String),

    #[error("Edgeworth density is negative at x = {x}")]
    NegativeDensity { x: f64 },

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("too few assets at rebalance {date}: need {needed}, got {got}")]
    TooFewAssets { date: chrono::NaiveDate, needed: usize, got: usize },

    #[error("no rate history for currency {0}")]
    MissingRate(String),

    #[error("too few rows: need {needed}, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("regressor is degenerate: all zeta-star values are equal")]
    DegenerateX,

    #[error("window starting {0} has a constant strategy")]
    SingularWindow(chrono::NaiveDate),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("write failed for {path}: {source}")]
    IoWrite {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
