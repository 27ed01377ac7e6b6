//! Peer-review quality index and rank tables.
//!
//! The index weights excellent, good, acceptable and limited outputs by 1,
//! 0.8, 0.6 and 0.2 and divides by the number of outputs, so it lies in
//! `[0.2, 1]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Rating};
use crate::error::{Error, Result};

/// Rating weights in tenths, so that equal tallies give bit-identical scores.
const WEIGHT_TENTHS: [u64; 4] = [10, 8, 6, 2];

/// Quality index of a rating tally.
pub fn r_score(excellent: u32, good: u32, acceptable: u32, limited: u32) -> Result<f64> {
    let counts = [excellent, good, acceptable, limited];
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    if total == 0 {
        return Err(Error::NoRatings);
    }
    let tenths: u64 = counts
        .iter()
        .zip(WEIGHT_TENTHS)
        .map(|(&c, w)| c as u64 * w)
        .sum();
    Ok(tenths as f64 / (10 * total) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VtrScore {
    pub university_id: String,
    pub area_id: String,
    pub excellent: u32,
    pub good: u32,
    pub acceptable: u32,
    pub limited: u32,
}

impl VtrScore {
    pub fn total(&self) -> u32 {
        self.excellent + self.good + self.acceptable + self.limited
    }

    pub fn r(&self) -> f64 {
        r_score(self.excellent, self.good, self.acceptable, self.limited)
            .expect("a tally always has at least one rating")
    }

    fn add(&mut self, rating: Rating) {
        match rating {
            Rating::Excellent => self.excellent += 1,
            Rating::Good => self.good += 1,
            Rating::Acceptable => self.acceptable += 1,
            Rating::Limited => self.limited += 1,
        }
    }
}

/// One tally per (university, area) with at least one submission, ordered by
/// area then university.
pub fn score_all(corpus: &Corpus) -> Vec<VtrScore> {
    let mut tallies: BTreeMap<(&str, &str), VtrScore> = BTreeMap::new();
    for s in corpus.submissions() {
        tallies
            .entry((s.area_id.as_str(), s.university_id.as_str()))
            .or_insert_with(|| VtrScore {
                university_id: s.university_id.clone(),
                area_id: s.area_id.clone(),
                excellent: 0,
                good: 0,
                acceptable: 0,
                limited: 0,
            })
            .add(s.rating);
    }
    tallies.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub entity_id: String,
    pub score: f64,
    pub rank: u32,
    /// `100 (N - rank) / (N - 1)`, 100 for a single entity.
    pub percentile: f64,
}

/// Entities ordered by non-increasing score with competition ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub label: String,
    pub rows: Vec<RankRow>,
}

impl RankTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, entity_id: &str) -> Option<&RankRow> {
        self.rows.iter().find(|r| r.entity_id == entity_id)
    }

    pub fn ranks(&self) -> BTreeMap<&str, u32> {
        self.rows
            .iter()
            .map(|r| (r.entity_id.as_str(), r.rank))
            .collect()
    }
}

/// Score of one entity together with how many outputs it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInput {
    pub entity_id: String,
    pub score: f64,
    pub outputs: u32,
}

impl RankInput {
    pub fn new(entity_id: impl Into<String>, score: f64, outputs: u32) -> Self {
        RankInput {
            entity_id: entity_id.into(),
            score,
            outputs,
        }
    }
}

/// Ranks entities with at least `min_outputs` outputs. Tied scores share the
/// smallest rank and the following rank is skipped.
pub fn rank(label: &str, inputs: &[RankInput], min_outputs: u32) -> Result<RankTable> {
    let mut kept: Vec<&RankInput> = inputs.iter().filter(|i| i.outputs >= min_outputs).collect();
    if kept.is_empty() {
        return Err(Error::EmptyRanking);
    }
    kept.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.entity_id.cmp(&b.entity_id))
    });
    let n = kept.len();
    let mut rows = Vec::with_capacity(n);
    let mut current_rank = 1u32;
    for (i, input) in kept.iter().enumerate() {
        if i > 0 && input.score != kept[i - 1].score {
            current_rank = i as u32 + 1;
        }
        let percentile = if n == 1 {
            100.0
        } else {
            100.0 * (n as f64 - current_rank as f64) / (n as f64 - 1.0)
        };
        rows.push(RankRow {
            entity_id: input.entity_id.clone(),
            score: input.score,
            rank: current_rank,
            percentile,
        });
    }
    Ok(RankTable {
        label: label.to_string(),
        rows,
    })
}

/// Ranks plain scores with no output filter.
pub fn rank_scores<S: AsRef<str>>(label: &str, scores: &[(S, f64)]) -> Result<RankTable> {
    let inputs: Vec<RankInput> = scores
        .iter()
        .map(|(e, s)| RankInput::new(e.as_ref(), *s, u32::MAX))
        .collect();
    rank(label, &inputs, 0)
}

/// Ranks universities by quality index within one area, optionally only
/// within a size category.
pub fn rank_area(
    scores: &[VtrScore],
    corpus: &Corpus,
    area_id: &str,
    category: Option<&str>,
    min_outputs: u32,
) -> Result<RankTable> {
    let inputs: Vec<RankInput> = scores
        .iter()
        .filter(|s| s.area_id == area_id)
        .filter(|s| category.is_none() || corpus.size_category(&s.university_id) == category)
        .map(|s| RankInput::new(s.university_id.clone(), s.r(), s.total()))
        .collect();
    let label = match category {
        Some(c) => format!("{area_id}/{c}"),
        None => area_id.to_string(),
    };
    rank(&label, &inputs, min_outputs)
}
