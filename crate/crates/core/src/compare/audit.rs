//! Positioning of submitted articles within their university's portfolio.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::mean_and_population_std;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::indicators::submitted_qualities;
use crate::percentile::area_quality;

/// Midpoint median; `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Number of submitted qualities strictly below the portfolio median.
pub fn below_median_count(portfolio: &[f64], submitted: &[f64]) -> Option<usize> {
    let m = median(portfolio)?;
    Some(submitted.iter().filter(|&&q| q < m).count())
}

/// Submitted articles that a quality-ranked selection of the same size would
/// not have picked: those strictly below the T-th best portfolio quality.
pub fn displaced_count(portfolio: &[f64], submitted: &[f64]) -> Result<usize> {
    let t = submitted.len();
    if t == 0 {
        return Ok(0);
    }
    if portfolio.len() < t {
        return Err(Error::PortfolioTooSmall {
            portfolio: portfolio.len(),
            submitted: t,
        });
    }
    let mut sorted = portfolio.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let threshold = sorted[t - 1];
    Ok(submitted.iter().filter(|&&q| q < threshold).count())
}

/// Qualities of every publication in a university's portfolio in an area.
pub fn portfolio_qualities(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
) -> Result<Vec<f64>> {
    corpus
        .portfolio(university_id, area_id)?
        .into_iter()
        .map(|p| area_quality(corpus, p, university_id, area_id))
        .collect()
}

fn audit_inputs(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let portfolio = portfolio_qualities(corpus, university_id, area_id)?;
    if portfolio.is_empty() {
        return Err(Error::EmptyPortfolio {
            university: university_id.to_string(),
            area: area_id.to_string(),
        });
    }
    let submitted = submitted_qualities(corpus, university_id, area_id)?;
    if submitted.is_empty() {
        return Err(Error::NoIndexedSubmissions {
            university: university_id.to_string(),
            area: area_id.to_string(),
        });
    }
    Ok((portfolio, submitted))
}

/// Share of submitted indexed articles whose quality is below the median of
/// the full portfolio.
pub fn below_median_share(corpus: &Corpus, university_id: &str, area_id: &str) -> Result<f64> {
    let (portfolio, submitted) = audit_inputs(corpus, university_id, area_id)?;
    let count = below_median_count(&portfolio, &submitted).expect("portfolio is non-empty");
    Ok(count as f64 / submitted.len() as f64)
}

/// `(count, share)` of displaced submissions.
pub fn displaced_selection(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
) -> Result<(usize, f64)> {
    let (portfolio, submitted) = audit_inputs(corpus, university_id, area_id)?;
    let count = displaced_count(&portfolio, &submitted)?;
    Ok((count, count as f64 / submitted.len() as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionAudit {
    pub university_id: String,
    pub area_id: String,
    pub selected_n: usize,
    pub portfolio_n: usize,
    pub below_median_share: f64,
    pub displaced_count: usize,
    pub displaced_share: f64,
}

pub fn selection_audit(
    corpus: &Corpus,
    university_id: &str,
    area_id: &str,
) -> Result<SelectionAudit> {
    let (portfolio, submitted) = audit_inputs(corpus, university_id, area_id)?;
    let below = below_median_count(&portfolio, &submitted).expect("portfolio is non-empty");
    let displaced = displaced_count(&portfolio, &submitted)?;
    let t = submitted.len() as f64;
    Ok(SelectionAudit {
        university_id: university_id.to_string(),
        area_id: area_id.to_string(),
        selected_n: submitted.len(),
        portfolio_n: portfolio.len(),
        below_median_share: below as f64 / t,
        displaced_count: displaced,
        displaced_share: displaced as f64 / t,
    })
}

/// Audits every (university, area) that has indexed submissions and a
/// portfolio at least as large, ordered by area then university. Pairs that
/// cannot be audited are returned separately with the reason.
pub fn audit_all(corpus: &Corpus) -> (Vec<SelectionAudit>, Vec<(String, String, Error)>) {
    let pairs: BTreeSet<(&str, &str)> = corpus
        .submissions()
        .iter()
        .filter(|s| s.pub_id.is_some())
        .map(|s| (s.area_id.as_str(), s.university_id.as_str()))
        .collect();
    let mut audits = Vec::new();
    let mut skipped = Vec::new();
    for (area, university) in pairs {
        match selection_audit(corpus, university, area) {
            Ok(a) => audits.push(a),
            Err(e) => skipped.push((university.to_string(), area.to_string(), e)),
        }
    }
    (audits, skipped)
}

/// Population standard deviation over mean; `None` when empty or the mean is
/// zero.
pub fn variation_coefficient(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let (mean, std) = mean_and_population_std(values);
    (mean != 0.0).then(|| std / mean)
}

/// Distribution of below-median shares across the universities of one area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaAuditSummary {
    pub area_id: String,
    pub universities: usize,
    pub average: f64,
    pub median: f64,
    pub max: f64,
    pub variation_coefficient: Option<f64>,
}

pub fn summarize_audits(audits: &[SelectionAudit]) -> Vec<AreaAuditSummary> {
    let areas: BTreeSet<&str> = audits.iter().map(|a| a.area_id.as_str()).collect();
    areas
        .into_iter()
        .map(|area| {
            let shares: Vec<f64> = audits
                .iter()
                .filter(|a| a.area_id == area)
                .map(|a| a.below_median_share)
                .collect();
            let (average, _) = mean_and_population_std(&shares);
            AreaAuditSummary {
                area_id: area.to_string(),
                universities: shares.len(),
                average,
                median: median(&shares).unwrap_or(0.0),
                max: shares.iter().copied().fold(0.0, f64::max),
                variation_coefficient: variation_coefficient(&shares),
            }
        })
        .collect()
}
