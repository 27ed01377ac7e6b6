//! Brute-force recomputations over raw row tables. Nothing here goes through
//! the corpus indices or the library's percentile code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use assess_core::corpus::{CorpusParts, Publication};
use assess_core::synth::{SelectionStrategy, SynthConfig};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// A corpus small enough for exhaustive checks (well under 200 publications).
pub fn small_config(seed: u64, strategy: SelectionStrategy) -> SynthConfig {
    SynthConfig {
        seed,
        n_universities: 4,
        n_areas: 2,
        n_sectors_per_area: 2,
        n_journals_per_sector: 5,
        n_researchers: 36,
        publication_rate: 0.6,
        selection_strategy: strategy,
        ..SynthConfig::default()
    }
}

/// Percentile through mean 1-based ranks in a fully sorted list.
pub fn oracle_percentile(parts: &CorpusParts, journal: &str, sector: &str, year: i32) -> f64 {
    let mut values: Vec<f64> = parts
        .journals
        .iter()
        .filter(|j| j.year == year && j.sector_codes.iter().any(|s| s == sector))
        .map(|j| j.impact_factor)
        .collect();
    let x = parts
        .journals
        .iter()
        .find(|j| j.journal_id == journal && j.year == year)
        .expect("journal year present")
        .impact_factor;
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n == 1 {
        return 1.0;
    }
    let positions: Vec<usize> = (0..n).filter(|&i| values[i] == x).map(|i| i + 1).collect();
    let mean_rank = positions.iter().sum::<usize>() as f64 / positions.len() as f64;
    (mean_rank - 1.0) / (n - 1) as f64
}

fn journal_tags(parts: &CorpusParts, journal: &str) -> Vec<String> {
    parts
        .journals
        .iter()
        .find(|j| j.journal_id == journal)
        .expect("journal present")
        .sector_codes
        .clone()
}

fn area_of(parts: &CorpusParts, sector: &str) -> String {
    parts
        .sectors
        .iter()
        .find(|s| s.code == sector)
        .expect("sector present")
        .area_id
        .clone()
}

fn mean_percentile(parts: &CorpusParts, p: &Publication, sectors: &[String]) -> f64 {
    sectors
        .iter()
        .map(|s| oracle_percentile(parts, &p.journal_id, s, p.year))
        .sum::<f64>()
        / sectors.len() as f64
}

pub fn oracle_counted_quality(parts: &CorpusParts, p: &Publication, sector: &str) -> f64 {
    let tags = journal_tags(parts, &p.journal_id);
    if tags.iter().any(|t| t == sector) {
        oracle_percentile(parts, &p.journal_id, sector, p.year)
    } else {
        mean_percentile(parts, p, &tags)
    }
}

pub fn oracle_area_quality(
    parts: &CorpusParts,
    p: &Publication,
    university: &str,
    area: &str,
) -> f64 {
    let sectors: BTreeSet<String> = parts
        .researchers
        .iter()
        .filter(|r| p.author_ids.contains(&r.researcher_id))
        .filter(|r| r.university_id == university && area_of(parts, &r.sector_code) == area)
        .map(|r| r.sector_code.clone())
        .collect();
    if !sectors.is_empty() {
        return sectors
            .iter()
            .map(|s| oracle_counted_quality(parts, p, s))
            .sum::<f64>()
            / sectors.len() as f64;
    }
    let tags = journal_tags(parts, &p.journal_id);
    let in_area: Vec<String> = tags
        .iter()
        .filter(|t| area_of(parts, t) == area)
        .cloned()
        .collect();
    if in_area.is_empty() {
        mean_percentile(parts, p, &tags)
    } else {
        mean_percentile(parts, p, &in_area)
    }
}

pub fn oracle_portfolio(parts: &CorpusParts, university: &str, area: &str) -> Vec<String> {
    let mut ids: Vec<String> = Vec::new();
    for p in &parts.publications {
        let hit = p.author_ids.iter().any(|a| {
            parts.researchers.iter().any(|r| {
                &r.researcher_id == a
                    && r.university_id == university
                    && area_of(parts, &r.sector_code) == area
            })
        });
        if hit && !ids.contains(&p.pub_id) {
            ids.push(p.pub_id.clone());
        }
    }
    ids.sort();
    ids
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleIndicators {
    pub o: u32,
    pub fo: f64,
    pub ss: f64,
    pub fss: f64,
    pub staff: f64,
}

pub fn oracle_sector_indicators(
    parts: &CorpusParts,
    university: &str,
    sector: &str,
) -> OracleIndicators {
    let authors: Vec<&str> = parts
        .researchers
        .iter()
        .filter(|r| r.university_id == university && r.sector_code == sector)
        .map(|r| r.researcher_id.as_str())
        .collect();
    let mut out = OracleIndicators {
        o: 0,
        fo: 0.0,
        ss: 0.0,
        fss: 0.0,
        staff: parts
            .staff
            .iter()
            .find(|s| s.university_id == university && s.sector_code == sector)
            .map(|s| s.headcount)
            .unwrap_or(0.0),
    };
    for p in &parts.publications {
        if p.author_ids.iter().any(|a| authors.contains(&a.as_str())) {
            let q = oracle_counted_quality(parts, p, sector);
            out.o += 1;
            out.fo += 1.0 / p.n_institutions as f64;
            out.ss += q;
            out.fss += q / p.n_institutions as f64;
        }
    }
    out
}

pub fn oracle_submitted(parts: &CorpusParts, university: &str, area: &str) -> Vec<f64> {
    parts
        .submissions
        .iter()
        .filter(|s| s.university_id == university && s.area_id == area)
        .filter_map(|s| s.pub_id.as_ref())
        .map(|id| {
            let p = parts.publications.iter().find(|p| &p.pub_id == id).unwrap();
            oracle_area_quality(parts, p, university, area)
        })
        .collect()
}

pub fn oracle_portfolio_qualities(parts: &CorpusParts, university: &str, area: &str) -> Vec<f64> {
    oracle_portfolio(parts, university, area)
        .iter()
        .map(|id| {
            let p = parts.publications.iter().find(|p| &p.pub_id == id).unwrap();
            oracle_area_quality(parts, p, university, area)
        })
        .collect()
}

/// Below-median count by sorting a copy and counting.
pub fn oracle_below_median(portfolio: &[f64], submitted: &[f64]) -> usize {
    let mut v = portfolio.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let m = if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    };
    submitted.iter().filter(|&&q| q < m).count()
}

/// Displaced count: a submission is justified when fewer than T portfolio
/// articles are strictly better than it.
pub fn oracle_displaced(portfolio: &[f64], submitted: &[f64]) -> usize {
    let t = submitted.len();
    submitted
        .iter()
        .filter(|&&q| portfolio.iter().filter(|&&p| p > q).count() >= t)
        .count()
}

/// Textbook covariance formula with sample moments.
pub fn oracle_pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Mean ranks by counting: rank = (#less) + (#equal + 1) / 2.
pub fn oracle_mean_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let less = xs.iter().filter(|&&v| v < x).count() as f64;
            let equal = xs.iter().filter(|&&v| v == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// One university, one sector, 242 publications in journals of distinct
/// impact factor. Two submissions come from the top 22, twenty from below.
pub fn displaced_corpus() -> assess_core::Corpus {
    use assess_core::corpus::{JournalYear, Rating, Researcher, Sector, StaffRecord, Submission};
    let mut parts = CorpusParts {
        sectors: vec![Sector {
            code: "MAT/05".into(),
            area_id: "01".into(),
            area_name: "Mathematics".into(),
        }],
        researchers: vec![Researcher {
            researcher_id: "r".into(),
            university_id: "TV".into(),
            sector_code: "MAT/05".into(),
        }],
        staff: vec![StaffRecord {
            university_id: "TV".into(),
            sector_code: "MAT/05".into(),
            headcount: 35.0,
        }],
        ..Default::default()
    };
    for i in 0..242 {
        parts.journals.push(JournalYear {
            journal_id: format!("J{i:03}"),
            sector_codes: vec!["MAT/05".into()],
            year: 2002,
            impact_factor: 0.1 + i as f64 * 0.01,
        });
        parts.publications.push(Publication {
            pub_id: format!("P{i:03}"),
            journal_id: format!("J{i:03}"),
            year: 2002,
            n_institutions: 1,
            author_ids: ["r".to_string()].into(),
        });
    }
    // Index 241 is the best; the top 22 are 220..=241.
    let chosen = [
        241, 220, 219, 200, 180, 170, 160, 150, 140, 130, 120, 110, 100, 90, 80, 70, 60, 50, 40,
        30, 20, 10,
    ];
    for i in chosen {
        parts.submissions.push(Submission {
            university_id: "TV".into(),
            area_id: "01".into(),
            rating: Rating::Good,
            pub_id: Some(format!("P{i:03}")),
        });
    }
    assess_core::Corpus::from_parts(parts, None).unwrap()
}

/// Identical universities: same staff and same publications per sector.
pub fn identical_universities(
    n_univ: usize,
    sector_staff: &[(f64, Vec<u32>)],
) -> assess_core::Corpus {
    use assess_core::corpus::{JournalYear, Researcher, Sector, StaffRecord};
    let mut parts = CorpusParts::default();
    for (k, (_, pubs)) in sector_staff.iter().enumerate() {
        parts.sectors.push(Sector {
            code: format!("S{k}"),
            area_id: "A".into(),
            area_name: "Area".into(),
        });
        for j in 0..3 {
            parts.journals.push(JournalYear {
                journal_id: format!("J{k}-{j}"),
                sector_codes: vec![format!("S{k}")],
                year: 2001,
                impact_factor: 0.5 + j as f64 + k as f64,
            });
        }
        assert!(!pubs.is_empty());
    }
    for u in 0..n_univ {
        for (k, (staff, pubs)) in sector_staff.iter().enumerate() {
            let rid = format!("U{u}-S{k}");
            parts.researchers.push(Researcher {
                researcher_id: rid.clone(),
                university_id: format!("U{u}"),
                sector_code: format!("S{k}"),
            });
            parts.staff.push(StaffRecord {
                university_id: format!("U{u}"),
                sector_code: format!("S{k}"),
                headcount: *staff,
            });
            for (i, &inst) in pubs.iter().enumerate() {
                parts.publications.push(Publication {
                    pub_id: format!("P{u}-{k}-{i}"),
                    // Starts at the sector's top journal so quality volumes stay positive.
                    journal_id: format!("J{k}-{}", 2 - i % 3),
                    year: 2001,
                    n_institutions: inst,
                    author_ids: [rid.clone()].into(),
                });
            }
        }
    }
    assess_core::Corpus::from_parts(parts, None).unwrap()
}
