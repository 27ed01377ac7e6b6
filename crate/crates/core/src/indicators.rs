//! Volume and productivity indicators per (university, sector), and the
//! average quality of a university's submitted articles in an area.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::percentile::{area_quality, counted_quality};

/// Which productivity ratio to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IndicatorKind {
    /// Output per staff member.
    P,
    /// Fractional output per staff member.
    FP,
    /// Scientific strength per staff member.
    QP,
    /// Fractional scientific strength per staff member.
    FQP,
}

impl IndicatorKind {
    pub const ALL: [IndicatorKind; 4] = [
        IndicatorKind::P,
        IndicatorKind::FP,
        IndicatorKind::QP,
        IndicatorKind::FQP,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndicatorKind::P => "P",
            IndicatorKind::FP => "FP",
            IndicatorKind::QP => "QP",
            IndicatorKind::FQP => "FQP",
        }
    }
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndicatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P" => Ok(IndicatorKind::P),
            "FP" => Ok(IndicatorKind::FP),
            "QP" => Ok(IndicatorKind::QP),
            "FQP" => Ok(IndicatorKind::FQP),
            other => Err(format!(
                "indicator must be one of P, FP, QP, FQP (got `{other}`)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorIndicators {
    pub university_id: String,
    pub sector_code: String,
    /// O: publications counted in the sector.
    pub output: u32,
    /// FO: sum of 1 / n_institutions.
    pub fractional_output: f64,
    /// SS: sum of sector-relative qualities.
    pub scientific_strength: f64,
    /// FSS: sum of quality / n_institutions.
    pub fractional_strength: f64,
    pub staff: f64,
}

impl SectorIndicators {
    pub fn volume(&self, kind: IndicatorKind) -> f64 {
        match kind {
            IndicatorKind::P => self.output as f64,
            IndicatorKind::FP => self.fractional_output,
            IndicatorKind::QP => self.scientific_strength,
            IndicatorKind::FQP => self.fractional_strength,
        }
    }

    /// Volume divided by staff; `None` when the sector has no staff.
    pub fn productivity(&self, kind: IndicatorKind) -> Option<f64> {
        (self.staff > 0.0).then(|| self.volume(kind) / self.staff)
    }
}

pub fn sector_indicators(
    corpus: &Corpus,
    university_id: &str,
    sector: &str,
) -> Result<SectorIndicators> {
    let publications = corpus.sector_publications(university_id, sector)?;
    let staff = corpus.staff_count(university_id, sector)?;
    let mut out = SectorIndicators {
        university_id: university_id.to_string(),
        sector_code: sector.to_string(),
        output: 0,
        fractional_output: 0.0,
        scientific_strength: 0.0,
        fractional_strength: 0.0,
        staff,
    };
    for p in publications {
        let quality = counted_quality(corpus, p, sector)?;
        let share = 1.0 / p.n_institutions as f64;
        out.output += 1;
        out.fractional_output += share;
        out.scientific_strength += quality;
        out.fractional_strength += quality * share;
    }
    Ok(out)
}

/// (university, sector) pairs that have researchers or a staff record, in
/// lexicographic order.
pub fn university_sectors(corpus: &Corpus) -> Vec<(String, String)> {
    let mut pairs: BTreeSet<(String, String)> = corpus
        .researchers()
        .map(|r| (r.university_id.clone(), r.sector_code.clone()))
        .collect();
    pairs.extend(
        corpus
            .staff_records()
            .map(|s| (s.university_id, s.sector_code)),
    );
    pairs.into_iter().collect()
}

pub fn all_sector_indicators(corpus: &Corpus) -> Result<Vec<SectorIndicators>> {
    university_sectors(corpus)
        .iter()
        .map(|(u, s)| sector_indicators(corpus, u, s))
        .collect()
}

/// Qualities of the indexed articles a university submitted in an area, in
/// submission order.
pub fn submitted_qualities(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
) -> Result<Vec<f64>> {
    if !corpus.has_university(university_id) {
        return Err(Error::UnknownUniversity(university_id.to_string()));
    }
    corpus.sectors_in_area(area_id)?;
    corpus
        .submissions()
        .iter()
        .filter(|s| s.university_id == university_id && s.area_id == area_id)
        .filter_map(|s| s.pub_id.as_deref())
        .map(|id| {
            let p = corpus
                .publication(id)
                .expect("submission references are validated");
            area_quality(corpus, p, university_id, area_id)
        })
        .collect()
}

/// Mean quality of the submitted, indexed articles (QI).
pub fn avg_submission_quality(corpus: &Corpus, university_id: &str, area_id: &str) -> Result<f64> {
    let qualities = submitted_qualities(corpus, university_id, area_id)?;
    if qualities.is_empty() {
        return Err(Error::NoIndexedSubmissions {
            university: university_id.to_string(),
            area: area_id.to_string(),
        });
    }
    Ok(qualities.iter().sum::<f64>() / qualities.len() as f64)
}
