//! Research assessment engine.
//!
//! Two evaluation approaches over one corpus of publications:
//!
//! - bibliometric: impact factors normalized to sector percentiles
//!   ([`percentile`]), volume and productivity indicators per university and
//!   sector ([`indicators`]), and staff-weighted area aggregates
//!   ([`aggregate`]);
//! - peer review: rating tallies scored and ranked per area ([`vtr`]).
//!
//! [`compare`] contrasts the two (correlations with significance thresholds,
//! rank variation, selection audits) and [`synth`] generates seeded corpora.

pub mod aggregate;
pub mod compare;
pub mod corpus;
pub mod error;
pub mod indicators;
pub mod percentile;
pub mod report;
pub mod synth;
pub mod vtr;

pub use aggregate::{aggregate_area, sector_mean, AreaProductivity, ProductivityTable};
pub use compare::{
    critical_r, pearson, rank_variation, spearman, CorrelationResult, RankVariationStats,
    SelectionAudit,
};
pub use corpus::{load_corpus, write_corpus, Corpus, CorpusParts, Publication, Rating};
pub use error::{Error, Result};
pub use indicators::{avg_submission_quality, sector_indicators, IndicatorKind, SectorIndicators};
pub use percentile::{journal_quality, percentile_rank, publication_quality};
pub use synth::{generate, SelectionStrategy, SynthConfig};
pub use vtr::{r_score, rank, score_all, RankTable, VtrScore};
