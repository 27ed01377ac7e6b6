use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by corpus loading and by every computation over a corpus.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input file {0}")]
    MissingFile(PathBuf),

    #[error("{file}:{line}: column `{column}`: {message}")]
    Malformed {
        file: String,
        line: u64,
        column: String,
        message: String,
    },

    #[error("{file}:{line}: {field} `{value}` does not resolve")]
    DanglingReference {
        file: String,
        line: u64,
        field: String,
        value: String,
    },

    #[error("{file}:{line}: duplicate key `{key}`")]
    DuplicateKey {
        file: String,
        line: u64,
        key: String,
    },

    #[error("{file}:{line}: {message}")]
    Invariant {
        file: String,
        line: u64,
        message: String,
    },

    #[error("corpus has no years to infer a period from")]
    EmptyPeriod,

    #[error("unknown university `{0}`")]
    UnknownUniversity(String),

    #[error("unknown area `{0}`")]
    UnknownArea(String),

    #[error("unknown sector `{0}`")]
    UnknownSector(String),

    #[error("unknown journal `{0}`")]
    UnknownJournal(String),

    #[error("journal `{journal}` has no impact factor for {year}")]
    MissingImpactFactor { journal: String, year: i32 },

    #[error("journal `{journal}` is not tagged with sector `{sector}`")]
    SectorNotTagged { journal: String, sector: String },

    #[error("value {0} is not a member of the distribution")]
    NotInDistribution(f64),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("all rating counts are zero")]
    NoRatings,

    #[error("no entities left to rank after filtering")]
    EmptyRanking,

    #[error("no indexed submissions for `{university}` in area `{area}`")]
    NoIndexedSubmissions { university: String, area: String },

    #[error("empty portfolio for `{university}` in area `{area}`")]
    EmptyPortfolio { university: String, area: String },

    #[error("portfolio of {portfolio} is smaller than the {submitted} submitted articles")]
    PortfolioTooSmall { portfolio: usize, submitted: usize },

    #[error("no university has staff in sector `{0}`")]
    NoStaffInSector(String),

    #[error("`{university}` has no staff in area `{area}`")]
    NoStaffInArea { university: String, area: String },

    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("significance level {0} outside (0, 1)")]
    InvalidAlpha(f64),

    #[error("rank tables cover different entities")]
    EntityMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
