//! Seeded synthetic corpora for property tests and pipeline demonstrations.
//!
//! Impact factors are log-normal with a per-sector location, so every sector
//! has its own scale. Submissions are picked from each university's area
//! portfolio by a [`SelectionStrategy`] and rated by absolute quality
//! quartile: `q >= 0.75` is excellent, `>= 0.5` good, `>= 0.25` acceptable,
//! and limited below that.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    Corpus, CorpusParts, JournalYear, Publication, Rating, Researcher, Sector, StaffRecord,
    Submission,
};
use crate::error::{Error, Result};
use crate::percentile::area_quality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionStrategy {
    TopByQuality,
    Random,
    BelowMedianBiased,
}

impl fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionStrategy::TopByQuality => "top_by_quality",
            SelectionStrategy::Random => "random",
            SelectionStrategy::BelowMedianBiased => "below_median_biased",
        })
    }
}

impl FromStr for SelectionStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "top_by_quality" => Ok(SelectionStrategy::TopByQuality),
            "random" => Ok(SelectionStrategy::Random),
            "below_median_biased" => Ok(SelectionStrategy::BelowMedianBiased),
            other => Err(format!(
                "strategy must be top_by_quality, random or below_median_biased (got `{other}`)"
            )),
        }
    }
}

/// Log-normal impact factors. Each sector draws its location uniformly from
/// `[ln(scale_min), ln(scale_max)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfDistribution {
    pub scale_min: f64,
    pub scale_max: f64,
    pub sigma: f64,
}

impl Default for IfDistribution {
    fn default() -> Self {
        IfDistribution {
            scale_min: 0.5,
            scale_max: 3.0,
            sigma: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_universities: usize,
    pub n_areas: usize,
    pub n_sectors_per_area: usize,
    pub n_journals_per_sector: usize,
    pub n_researchers: usize,
    /// Mean publications per researcher per year.
    pub publication_rate: f64,
    pub if_distribution: IfDistribution,
    pub selection_strategy: SelectionStrategy,
    /// Submissions per (university, area) as a fraction of its researchers
    /// there.
    pub submission_fraction: f64,
    pub period: (i32, i32),
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 1,
            n_universities: 6,
            n_areas: 2,
            n_sectors_per_area: 3,
            n_journals_per_sector: 12,
            n_researchers: 120,
            publication_rate: 1.0,
            if_distribution: IfDistribution::default(),
            selection_strategy: SelectionStrategy::Random,
            submission_fraction: 0.5,
            period: (2001, 2003),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_universities", self.n_universities),
            ("n_areas", self.n_areas),
            ("n_sectors_per_area", self.n_sectors_per_area),
            ("n_journals_per_sector", self.n_journals_per_sector),
            ("n_researchers", self.n_researchers),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(Error::InvalidConfig(format!("{name} must be >= 1")));
            }
        }
        if !(self.submission_fraction > 0.0 && self.submission_fraction <= 1.0) {
            return Err(Error::InvalidConfig(
                "submission_fraction must be in (0, 1]".into(),
            ));
        }
        if !(self.publication_rate.is_finite() && self.publication_rate > 0.0) {
            return Err(Error::InvalidConfig("publication_rate must be > 0".into()));
        }
        let d = self.if_distribution;
        if !(d.scale_min > 0.0 && d.scale_max >= d.scale_min && d.sigma > 0.0) {
            return Err(Error::InvalidConfig(
                "invalid impact factor distribution".into(),
            ));
        }
        if self.period.0 > self.period.1 {
            return Err(Error::InvalidConfig("period is empty".into()));
        }
        Ok(())
    }
}

pub fn rating_for_quality(quality: f64) -> Rating {
    if quality >= 0.75 {
        Rating::Excellent
    } else if quality >= 0.5 {
        Rating::Good
    } else if quality >= 0.25 {
        Rating::Acceptable
    } else {
        Rating::Limited
    }
}

fn area_id(a: usize) -> String {
    format!("A{:02}", a + 1)
}

fn sector_code(a: usize, s: usize) -> String {
    format!("A{:02}/{:02}", a + 1, s + 1)
}

pub fn generate(config: &SynthConfig) -> Result<Corpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let years: Vec<i32> = (config.period.0..=config.period.1).collect();

    let mut sectors = Vec::new();
    for a in 0..config.n_areas {
        for s in 0..config.n_sectors_per_area {
            sectors.push(Sector {
                code: sector_code(a, s),
                area_id: area_id(a),
                area_name: format!("Area {}", a + 1),
            });
        }
    }

    // Journals: one primary sector each, sometimes a second one in the area.
    let dist = config.if_distribution;
    let jitter = Normal::new(0.0, 0.1).expect("valid normal");
    let mut journals = Vec::new();
    let mut journals_by_sector: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut journals_by_area: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for a in 0..config.n_areas {
        for s in 0..config.n_sectors_per_area {
            let location = rng.random_range(dist.scale_min.ln()..=dist.scale_max.ln());
            let base = LogNormal::new(location, dist.sigma).expect("valid log-normal");
            for j in 0..config.n_journals_per_sector {
                let id = format!("J{:02}{:02}{:03}", a + 1, s + 1, j + 1);
                let mut tags = vec![sector_code(a, s)];
                if config.n_sectors_per_area > 1 && rng.random_bool(0.2) {
                    let mut other = rng.random_range(0..config.n_sectors_per_area - 1);
                    if other >= s {
                        other += 1;
                    }
                    tags.push(sector_code(a, other));
                }
                tags.sort();
                let level: f64 = base.sample(&mut rng);
                for &year in &years {
                    let drift: f64 = jitter.sample(&mut rng);
                    let impact = (level * drift.exp() * 1000.0).round() / 1000.0;
                    journals.push(JournalYear {
                        journal_id: id.clone(),
                        sector_codes: tags.clone(),
                        year,
                        impact_factor: impact,
                    });
                }
                for t in &tags {
                    journals_by_sector
                        .entry(t.clone())
                        .or_default()
                        .push(id.clone());
                }
                journals_by_area
                    .entry(area_id(a))
                    .or_default()
                    .push(id.clone());
            }
        }
    }

    let university = |u: usize| format!("U{:03}", u + 1);
    let mut researchers = Vec::new();
    for r in 0..config.n_researchers {
        let u = rng.random_range(0..config.n_universities);
        let a = rng.random_range(0..config.n_areas);
        let s = rng.random_range(0..config.n_sectors_per_area);
        researchers.push(Researcher {
            researcher_id: format!("R{:05}", r + 1),
            university_id: university(u),
            sector_code: sector_code(a, s),
        });
    }
    let mut researchers_by_area: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, r) in researchers.iter().enumerate() {
        let area = r.sector_code[..3].to_string();
        researchers_by_area.entry(area).or_default().push(i);
    }

    let poisson = Poisson::new(config.publication_rate).expect("rate validated");
    let mut publications = Vec::new();
    for (i, r) in researchers.iter().enumerate() {
        let area = &r.sector_code[..3];
        for &year in &years {
            let count = poisson.sample(&mut rng) as usize;
            for _ in 0..count {
                let pool = if rng.random_bool(0.9) {
                    &journals_by_sector[&r.sector_code]
                } else {
                    &journals_by_area[area]
                };
                let journal_id = pool.choose(&mut rng).expect("non-empty pool").clone();
                let mut authors = BTreeSet::from([r.researcher_id.clone()]);
                let peers = &researchers_by_area[area];
                for _ in 0..rng.random_range(0..=2) {
                    let k = *peers.choose(&mut rng).expect("area has the author");
                    if k != i {
                        authors.insert(researchers[k].researcher_id.clone());
                    }
                }
                let universities: BTreeSet<&str> = authors
                    .iter()
                    .map(|a| {
                        let idx: usize = a[1..].parse::<usize>().expect("generated id") - 1;
                        researchers[idx].university_id.as_str()
                    })
                    .collect();
                let extra = u32::from(rng.random_bool(0.3));
                publications.push(Publication {
                    pub_id: format!("P{:07}", publications.len() + 1),
                    journal_id,
                    year,
                    n_institutions: universities.len() as u32 + extra,
                    author_ids: authors,
                });
            }
        }
    }

    let mut headcounts: BTreeMap<(String, String), f64> = BTreeMap::new();
    for r in &researchers {
        *headcounts
            .entry((r.university_id.clone(), r.sector_code.clone()))
            .or_default() += 1.0;
    }
    let staff: Vec<StaffRecord> = headcounts
        .iter()
        .map(|((u, s), h)| StaffRecord {
            university_id: u.clone(),
            sector_code: s.clone(),
            headcount: *h,
        })
        .collect();

    // Size categories by research staff, in thirds.
    let mut sizes: BTreeMap<&str, f64> = BTreeMap::new();
    for s in &staff {
        *sizes.entry(s.university_id.as_str()).or_default() += s.headcount;
    }
    let mut by_size: Vec<(&str, f64)> = sizes.into_iter().collect();
    by_size.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n_sized = by_size.len();
    let size_categories: Vec<(String, String)> = by_size
        .iter()
        .enumerate()
        .map(|(i, (u, _))| {
            let category = match 3 * i / n_sized.max(1) {
                0 => "large",
                1 => "medium",
                _ => "small",
            };
            (u.to_string(), category.to_string())
        })
        .collect();

    let mut parts = CorpusParts {
        sectors,
        journals,
        researchers,
        publications,
        staff,
        submissions: Vec::new(),
        size_categories,
    };
    let draft = Corpus::from_parts(parts.clone(), Some(config.period))?;

    let mut submissions = Vec::new();
    for area in draft.areas().keys() {
        let area_sectors = draft.sectors_in_area(area)?;
        for u in draft.universities() {
            let n_researchers = draft
                .researchers()
                .filter(|r| r.university_id == u && area_sectors.contains(&r.sector_code))
                .count();
            let portfolio = draft.portfolio(u, area)?;
            if portfolio.is_empty() || n_researchers == 0 {
                continue;
            }
            let wanted = (config.submission_fraction * n_researchers as f64).ceil() as usize;
            let t = wanted.clamp(1, portfolio.len());
            let mut scored = Vec::with_capacity(portfolio.len());
            for p in &portfolio {
                scored.push((area_quality(&draft, p, u, area)?, p.pub_id.clone()));
            }
            let chosen = select(&mut scored, t, config.selection_strategy, &mut rng);
            for (quality, pub_id) in chosen {
                submissions.push(Submission {
                    university_id: u.to_string(),
                    area_id: area.clone(),
                    rating: rating_for_quality(quality),
                    pub_id: Some(pub_id),
                });
            }
        }
    }

    parts.submissions = submissions;
    Corpus::from_parts(parts, Some(config.period))
}

fn select(
    scored: &mut [(f64, String)],
    t: usize,
    strategy: SelectionStrategy,
    rng: &mut ChaCha8Rng,
) -> Vec<(f64, String)> {
    match strategy {
        SelectionStrategy::TopByQuality => {
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        }
        SelectionStrategy::Random => scored.shuffle(rng),
        SelectionStrategy::BelowMedianBiased => {
            let qualities: Vec<f64> = scored.iter().map(|s| s.0).collect();
            let median = crate::compare::median(&qualities).expect("non-empty portfolio");
            scored.shuffle(rng);
            scored.sort_by_key(|s| s.0 >= median);
        }
    }
    let mut chosen = scored[..t].to_vec();
    chosen.sort_by(|a, b| a.1.cmp(&b.1));
    chosen
}
