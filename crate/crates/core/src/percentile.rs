//! Sector-relative normalization of journal impact factors.
//!
//! An impact factor is turned into a percentile rank in `[0, 1]` within the
//! distribution of all journals tagged with the same sector that have an
//! impact factor for the same year. With `B` values strictly below `x`, `E`
//! values equal to it (itself included) and `N` values in total the rank is
//! `(B + (E - 1) / 2) / (N - 1)`, and `1.0` for a single-journal distribution.

use std::collections::BTreeMap;

use crate::corpus::{Corpus, Journal, Publication};
use crate::error::{Error, Result};

/// Percentile rank of `x` within `values` (any order).
pub fn percentile_rank(values: &[f64], x: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let below = values.iter().filter(|&&v| v < x).count();
    let equal = values.iter().filter(|&&v| v == x).count();
    if equal == 0 {
        return Err(Error::NotInDistribution(x));
    }
    Ok(rank_from_counts(below, equal, values.len()))
}

fn rank_from_counts(below: usize, equal: usize, n: usize) -> f64 {
    if n == 1 {
        return 1.0;
    }
    (below as f64 + 0.5 * (equal as f64 - 1.0)) / (n as f64 - 1.0)
}

/// Impact factors of one sector in one year, kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDistribution {
    pub sector: String,
    pub year: i32,
    values: Vec<f64>,
}

impl SectorDistribution {
    pub fn new(sector: impl Into<String>, year: i32, mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidConfig(
                "impact factors must be finite and non-negative".into(),
            ));
        }
        values.sort_by(f64::total_cmp);
        Ok(SectorDistribution {
            sector: sector.into(),
            year,
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Percentile rank of a member value, by binary search.
    pub fn rank(&self, x: f64) -> Result<f64> {
        let below = self.values.partition_point(|&v| v < x);
        let upto = self.values.partition_point(|&v| v <= x);
        if upto == below {
            return Err(Error::NotInDistribution(x));
        }
        Ok(rank_from_counts(below, upto - below, self.values.len()))
    }
}

/// All sector-year distributions of a corpus, built once.
#[derive(Debug, Default)]
pub struct SectorDistributions {
    by_key: BTreeMap<(String, i32), SectorDistribution>,
}

impl SectorDistributions {
    pub fn from_journals<'a>(journals: impl IntoIterator<Item = &'a Journal>) -> Self {
        let mut raw: BTreeMap<(String, i32), Vec<f64>> = BTreeMap::new();
        for j in journals {
            for sector in &j.sector_codes {
                for (&year, &impact) in &j.impact_factors {
                    raw.entry((sector.clone(), year)).or_default().push(impact);
                }
            }
        }
        let by_key = raw
            .into_iter()
            .map(|((sector, year), values)| {
                let dist = SectorDistribution::new(sector.clone(), year, values)
                    .expect("corpus impact factors are validated");
                ((sector, year), dist)
            })
            .collect();
        SectorDistributions { by_key }
    }

    pub fn get(&self, sector: &str, year: i32) -> Option<&SectorDistribution> {
        self.by_key.get(&(sector.to_string(), year))
    }

    pub fn iter(&self) -> impl Iterator<Item = &SectorDistribution> {
        self.by_key.values()
    }
}

/// Percentile of a journal's impact factor in one year within one of its
/// sectors.
pub fn journal_quality(corpus: &Corpus, journal_id: &str, sector: &str, year: i32) -> Result<f64> {
    let journal = corpus.journal(journal_id)?;
    corpus.sector(sector)?;
    if !journal.sector_codes.contains(sector) {
        return Err(Error::SectorNotTagged {
            journal: journal_id.to_string(),
            sector: sector.to_string(),
        });
    }
    let impact = journal
        .impact_factor(year)
        .ok_or_else(|| Error::MissingImpactFactor {
            journal: journal_id.to_string(),
            year,
        })?;
    corpus
        .distributions()
        .get(sector, year)
        .ok_or(Error::EmptyDistribution)?
        .rank(impact)
}

/// Quality of a publication relative to the given sector, at its own year.
pub fn publication_quality(
    corpus: &Corpus,
    publication: &Publication,
    sector: &str,
) -> Result<f64> {
    journal_quality(corpus, &publication.journal_id, sector, publication.year)
}

/// Quality of a publication counted through `sector`. When the journal is not
/// tagged with that sector the mean percentile over the journal's own sectors
/// is used instead.
pub fn counted_quality(corpus: &Corpus, publication: &Publication, sector: &str) -> Result<f64> {
    let journal = corpus.journal(&publication.journal_id)?;
    if journal.sector_codes.contains(sector) {
        return publication_quality(corpus, publication, sector);
    }
    mean_over_sectors(
        corpus,
        publication,
        journal.sector_codes.iter().map(String::as_str),
    )
}

/// Quality of a publication within a university's portfolio in an area: the
/// mean of [`counted_quality`] over the sectors of that university's authors
/// in the area. Without such authors, the journal's tags inside the area are
/// used, then all of its tags.
pub fn area_quality(
    corpus: &Corpus,
    publication: &Publication,
    university_id: &str,
    area_id: &str,
) -> Result<f64> {
    let sectors = corpus.counting_sectors(publication, university_id, area_id);
    if !sectors.is_empty() {
        let mut sum = 0.0;
        for s in &sectors {
            sum += counted_quality(corpus, publication, s)?;
        }
        return Ok(sum / sectors.len() as f64);
    }
    let journal = corpus.journal(&publication.journal_id)?;
    let in_area: Vec<&str> = journal
        .sector_codes
        .iter()
        .map(String::as_str)
        .filter(|s| corpus.area_of(s).is_ok_and(|a| a == area_id))
        .collect();
    if in_area.is_empty() {
        mean_over_sectors(
            corpus,
            publication,
            journal.sector_codes.iter().map(String::as_str),
        )
    } else {
        mean_over_sectors(corpus, publication, in_area.into_iter())
    }
}

fn mean_over_sectors<'a>(
    corpus: &Corpus,
    publication: &Publication,
    sectors: impl Iterator<Item = &'a str>,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for s in sectors {
        sum += publication_quality(corpus, publication, s)?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(sum / n as f64)
}
