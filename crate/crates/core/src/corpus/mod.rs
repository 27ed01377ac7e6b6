//! Domain data model for one evaluation period: the sector taxonomy, journals
//! with yearly impact factors, researchers, publications, staff headcounts and
//! peer-review submissions.
//!
//! A [`Corpus`] is validated once when built and is immutable afterwards.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::percentile::SectorDistributions;

pub use io::{load_corpus, load_corpus_with_period, write_corpus};

/// A scientific disciplinary sector and the area it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub code: String,
    pub area_id: String,
    pub area_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Journal {
    pub journal_id: String,
    pub sector_codes: BTreeSet<String>,
    pub impact_factors: BTreeMap<i32, f64>,
}

impl Journal {
    pub fn impact_factor(&self, year: i32) -> Option<f64> {
        self.impact_factors.get(&year).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: String,
    pub university_id: String,
    pub sector_code: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: String,
    pub journal_id: String,
    pub year: i32,
    /// Distinct organizations on the byline, including ones outside the corpus.
    pub n_institutions: u32,
    pub author_ids: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaffRecord {
    pub university_id: String,
    pub sector_code: String,
    pub headcount: f64,
}

/// Peer-review rating of one submitted output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rating {
    Excellent,
    Good,
    Acceptable,
    Limited,
}

impl Rating {
    pub const ALL: [Rating; 4] = [
        Rating::Excellent,
        Rating::Good,
        Rating::Acceptable,
        Rating::Limited,
    ];

    pub fn letter(self) -> char {
        match self {
            Rating::Excellent => 'E',
            Rating::Good => 'G',
            Rating::Acceptable => 'A',
            Rating::Limited => 'L',
        }
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Rating {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "E" => Ok(Rating::Excellent),
            "G" => Ok(Rating::Good),
            "A" => Ok(Rating::Acceptable),
            "L" => Ok(Rating::Limited),
            other => Err(format!("rating must be one of E, G, A, L (got `{other}`)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub university_id: String,
    pub area_id: String,
    pub rating: Rating,
    /// Absent for outputs that are not indexed articles.
    pub pub_id: Option<String>,
}

/// One row of `journals.csv`: a journal's impact factor in one year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalYear {
    pub journal_id: String,
    pub sector_codes: Vec<String>,
    pub year: i32,
    pub impact_factor: f64,
}

/// Unvalidated corpus tables, in the row order of their source files.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusParts {
    pub sectors: Vec<Sector>,
    pub journals: Vec<JournalYear>,
    pub researchers: Vec<Researcher>,
    pub publications: Vec<Publication>,
    pub staff: Vec<StaffRecord>,
    pub submissions: Vec<Submission>,
    /// Optional size category per university ("large", "medium", ...).
    pub size_categories: Vec<(String, String)>,
}

/// Source line of every row, per table. Rows built in memory report the line
/// they would occupy once written (header is line 1).
#[derive(Debug, Clone, Default)]
pub(crate) struct SourceLines {
    pub sectors: Vec<u64>,
    pub journals: Vec<u64>,
    pub researchers: Vec<u64>,
    pub publications: Vec<u64>,
    pub staff: Vec<u64>,
    pub submissions: Vec<u64>,
    pub universities: Vec<u64>,
}

fn line_at(lines: &[u64], i: usize) -> u64 {
    lines.get(i).copied().unwrap_or(i as u64 + 2)
}

#[derive(Debug, Default)]
struct CorpusIndex {
    universities: BTreeSet<String>,
    areas: BTreeMap<String, String>,
    sectors_by_area: BTreeMap<String, Vec<String>>,
    pubs_by_author: HashMap<String, Vec<String>>,
}

/// Validated, cross-linked, immutable corpus.
#[derive(Debug)]
pub struct Corpus {
    period: (i32, i32),
    sectors: BTreeMap<String, Sector>,
    journals: BTreeMap<String, Journal>,
    researchers: BTreeMap<String, Researcher>,
    publications: BTreeMap<String, Publication>,
    staff: BTreeMap<(String, String), f64>,
    submissions: Vec<Submission>,
    size_categories: BTreeMap<String, String>,
    index: CorpusIndex,
    distributions: OnceLock<SectorDistributions>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.period == other.period
            && self.sectors == other.sectors
            && self.journals == other.journals
            && self.researchers == other.researchers
            && self.publications == other.publications
            && self.staff == other.staff
            && self.submissions == other.submissions
            && self.size_categories == other.size_categories
    }
}

impl Corpus {
    /// Validates in-memory tables and builds a corpus. The period is inferred
    /// from journal and publication years when not given.
    pub fn from_parts(parts: CorpusParts, period: Option<(i32, i32)>) -> Result<Corpus> {
        Corpus::build(parts, &SourceLines::default(), period)
    }

    pub(crate) fn build(
        parts: CorpusParts,
        lines: &SourceLines,
        period: Option<(i32, i32)>,
    ) -> Result<Corpus> {
        let CorpusParts {
            sectors: sector_rows,
            journals: journal_rows,
            researchers: researcher_rows,
            publications: publication_rows,
            staff: staff_rows,
            submissions,
            size_categories: category_rows,
        } = parts;

        let mut sectors = BTreeMap::new();
        for (i, s) in sector_rows.into_iter().enumerate() {
            let line = line_at(&lines.sectors, i);
            if s.code.is_empty() || s.area_id.is_empty() {
                return Err(invariant("sectors.csv", line, "empty sector or area id"));
            }
            if sectors.contains_key(&s.code) {
                return Err(Error::DuplicateKey {
                    file: "sectors.csv".into(),
                    line,
                    key: s.code,
                });
            }
            sectors.insert(s.code.clone(), s);
        }

        let mut areas = BTreeMap::new();
        let mut sectors_by_area: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for s in sectors.values() {
            match areas.get(&s.area_id) {
                Some(name) if name != &s.area_name => {
                    return Err(invariant(
                        "sectors.csv",
                        0,
                        &format!("area `{}` has conflicting names", s.area_id),
                    ));
                }
                _ => {
                    areas.insert(s.area_id.clone(), s.area_name.clone());
                }
            }
            sectors_by_area
                .entry(s.area_id.clone())
                .or_default()
                .push(s.code.clone());
        }

        let mut journals: BTreeMap<String, Journal> = BTreeMap::new();
        for (i, row) in journal_rows.into_iter().enumerate() {
            let line = line_at(&lines.journals, i);
            if row.sector_codes.is_empty() {
                return Err(invariant(
                    "journals.csv",
                    line,
                    "journal has no sector codes",
                ));
            }
            for code in &row.sector_codes {
                if !sectors.contains_key(code) {
                    return Err(dangling("journals.csv", line, "sector_codes", code));
                }
            }
            if !(row.impact_factor.is_finite() && row.impact_factor >= 0.0) {
                return Err(invariant(
                    "journals.csv",
                    line,
                    "impact factor must be a finite non-negative number",
                ));
            }
            let tags: BTreeSet<String> = row.sector_codes.into_iter().collect();
            let journal = journals
                .entry(row.journal_id.clone())
                .or_insert_with(|| Journal {
                    journal_id: row.journal_id.clone(),
                    sector_codes: tags.clone(),
                    impact_factors: BTreeMap::new(),
                });
            if journal.sector_codes != tags {
                return Err(invariant(
                    "journals.csv",
                    line,
                    &format!("sector codes of `{}` differ between rows", row.journal_id),
                ));
            }
            if journal
                .impact_factors
                .insert(row.year, row.impact_factor)
                .is_some()
            {
                return Err(Error::DuplicateKey {
                    file: "journals.csv".into(),
                    line,
                    key: format!("{}@{}", row.journal_id, row.year),
                });
            }
        }

        let mut researchers = BTreeMap::new();
        let mut universities = BTreeSet::new();
        for (i, r) in researcher_rows.into_iter().enumerate() {
            let line = line_at(&lines.researchers, i);
            if !sectors.contains_key(&r.sector_code) {
                return Err(dangling(
                    "researchers.csv",
                    line,
                    "sector_code",
                    &r.sector_code,
                ));
            }
            if researchers.contains_key(&r.researcher_id) {
                return Err(Error::DuplicateKey {
                    file: "researchers.csv".into(),
                    line,
                    key: r.researcher_id,
                });
            }
            universities.insert(r.university_id.clone());
            researchers.insert(r.researcher_id.clone(), r);
        }

        let period = match period {
            Some(p) => p,
            None => {
                let years = journals
                    .values()
                    .flat_map(|j| j.impact_factors.keys().copied())
                    .chain(publication_rows.iter().map(|p| p.year));
                let (mut lo, mut hi) = (i32::MAX, i32::MIN);
                for y in years {
                    lo = lo.min(y);
                    hi = hi.max(y);
                }
                if lo > hi {
                    return Err(Error::EmptyPeriod);
                }
                (lo, hi)
            }
        };
        if period.0 > period.1 {
            return Err(Error::InvalidConfig(format!(
                "period {}:{} is empty",
                period.0, period.1
            )));
        }

        let mut publications = BTreeMap::new();
        let mut pubs_by_author: HashMap<String, Vec<String>> = HashMap::new();
        for (i, p) in publication_rows.into_iter().enumerate() {
            let line = line_at(&lines.publications, i);
            if publications.contains_key(&p.pub_id) {
                return Err(Error::DuplicateKey {
                    file: "publications.csv".into(),
                    line,
                    key: p.pub_id,
                });
            }
            if !journals.contains_key(&p.journal_id) {
                return Err(dangling(
                    "publications.csv",
                    line,
                    "journal_id",
                    &p.journal_id,
                ));
            }
            if p.year < period.0 || p.year > period.1 {
                return Err(invariant(
                    "publications.csv",
                    line,
                    &format!("year {} outside period {}:{}", p.year, period.0, period.1),
                ));
            }
            if p.n_institutions == 0 {
                return Err(invariant(
                    "publications.csv",
                    line,
                    "n_institutions must be >= 1",
                ));
            }
            if p.author_ids.is_empty() {
                return Err(invariant(
                    "publications.csv",
                    line,
                    "publication has no authors",
                ));
            }
            let mut author_universities = BTreeSet::new();
            for a in &p.author_ids {
                match researchers.get(a) {
                    Some(r) => {
                        author_universities.insert(r.university_id.as_str());
                    }
                    None => return Err(dangling("publications.csv", line, "author_ids", a)),
                }
            }
            if (p.n_institutions as usize) < author_universities.len() {
                return Err(invariant(
                    "publications.csv",
                    line,
                    &format!(
                        "n_institutions {} is below the {} distinct author universities",
                        p.n_institutions,
                        author_universities.len()
                    ),
                ));
            }
            for a in &p.author_ids {
                pubs_by_author
                    .entry(a.clone())
                    .or_default()
                    .push(p.pub_id.clone());
            }
            publications.insert(p.pub_id.clone(), p);
        }

        let mut staff = BTreeMap::new();
        for (i, s) in staff_rows.into_iter().enumerate() {
            let line = line_at(&lines.staff, i);
            if !sectors.contains_key(&s.sector_code) {
                return Err(dangling("staff.csv", line, "sector_code", &s.sector_code));
            }
            if !(s.headcount.is_finite() && s.headcount >= 0.0) {
                return Err(invariant("staff.csv", line, "headcount must be >= 0"));
            }
            let key = (s.university_id.clone(), s.sector_code.clone());
            if staff.contains_key(&key) {
                return Err(Error::DuplicateKey {
                    file: "staff.csv".into(),
                    line,
                    key: format!("{}/{}", key.0, key.1),
                });
            }
            universities.insert(s.university_id.clone());
            staff.insert(key, s.headcount);
        }

        for (i, s) in submissions.iter().enumerate() {
            let line = line_at(&lines.submissions, i);
            if !areas.contains_key(&s.area_id) {
                return Err(dangling("submissions.csv", line, "area_id", &s.area_id));
            }
            if let Some(pid) = &s.pub_id {
                if !publications.contains_key(pid) {
                    return Err(dangling("submissions.csv", line, "pub_id", pid));
                }
            }
            universities.insert(s.university_id.clone());
        }

        let mut size_categories = BTreeMap::new();
        for (i, (u, c)) in category_rows.into_iter().enumerate() {
            let line = line_at(&lines.universities, i);
            if size_categories.insert(u.clone(), c).is_some() {
                return Err(Error::DuplicateKey {
                    file: "universities.csv".into(),
                    line,
                    key: u,
                });
            }
            universities.insert(u);
        }

        for list in pubs_by_author.values_mut() {
            list.sort();
            list.dedup();
        }

        Ok(Corpus {
            period,
            sectors,
            journals,
            researchers,
            publications,
            staff,
            submissions,
            size_categories,
            index: CorpusIndex {
                universities,
                areas,
                sectors_by_area,
                pubs_by_author,
            },
            distributions: OnceLock::new(),
        })
    }

    pub fn period(&self) -> (i32, i32) {
        self.period
    }

    pub fn sectors(&self) -> impl Iterator<Item = &Sector> {
        self.sectors.values()
    }

    pub fn sector(&self, code: &str) -> Result<&Sector> {
        self.sectors
            .get(code)
            .ok_or_else(|| Error::UnknownSector(code.to_string()))
    }

    pub fn journals(&self) -> impl Iterator<Item = &Journal> {
        self.journals.values()
    }

    pub fn journal(&self, id: &str) -> Result<&Journal> {
        self.journals
            .get(id)
            .ok_or_else(|| Error::UnknownJournal(id.to_string()))
    }

    pub fn researchers(&self) -> impl Iterator<Item = &Researcher> {
        self.researchers.values()
    }

    pub fn researcher(&self, id: &str) -> Option<&Researcher> {
        self.researchers.get(id)
    }

    pub fn publications(&self) -> impl Iterator<Item = &Publication> {
        self.publications.values()
    }

    pub fn publication(&self, id: &str) -> Option<&Publication> {
        self.publications.get(id)
    }

    pub fn staff_records(&self) -> impl Iterator<Item = StaffRecord> + '_ {
        self.staff.iter().map(|((u, s), h)| StaffRecord {
            university_id: u.clone(),
            sector_code: s.clone(),
            headcount: *h,
        })
    }

    pub fn submissions(&self) -> &[Submission] {
        &self.submissions
    }

    pub fn size_categories(&self) -> &BTreeMap<String, String> {
        &self.size_categories
    }

    pub fn size_category(&self, university_id: &str) -> Option<&str> {
        self.size_categories.get(university_id).map(String::as_str)
    }

    /// All university ids seen in researchers, staff, submissions or the
    /// universities list.
    pub fn universities(&self) -> impl Iterator<Item = &str> {
        self.index.universities.iter().map(String::as_str)
    }

    pub fn has_university(&self, id: &str) -> bool {
        self.index.universities.contains(id)
    }

    /// Area id to area name.
    pub fn areas(&self) -> &BTreeMap<String, String> {
        &self.index.areas
    }

    pub fn sectors_in_area(&self, area_id: &str) -> Result<&[String]> {
        self.index
            .sectors_by_area
            .get(area_id)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownArea(area_id.to_string()))
    }

    pub fn area_of(&self, sector: &str) -> Result<&str> {
        Ok(self.sector(sector)?.area_id.as_str())
    }

    /// Publication ids authored by a researcher, sorted.
    pub fn publications_of(&self, researcher_id: &str) -> &[String] {
        self.index
            .pubs_by_author
            .get(researcher_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub(crate) fn distributions(&self) -> &SectorDistributions {
        self.distributions
            .get_or_init(|| SectorDistributions::from_journals(self.journals.values()))
    }

    fn require_university(&self, university_id: &str) -> Result<()> {
        if self.has_university(university_id) {
            Ok(())
        } else {
            Err(Error::UnknownUniversity(university_id.to_string()))
        }
    }

    /// Publications authored by at least one researcher of the university in
    /// the given sector, deduplicated and ordered by id.
    pub fn sector_publications(
        &self,
        university_id: &str,
        sector: &str,
    ) -> Result<Vec<&Publication>> {
        self.require_university(university_id)?;
        self.sector(sector)?;
        let ids: BTreeSet<&str> = self
            .researchers
            .values()
            .filter(|r| r.university_id == university_id && r.sector_code == sector)
            .flat_map(|r| self.publications_of(&r.researcher_id))
            .map(String::as_str)
            .collect();
        Ok(ids.into_iter().map(|id| &self.publications[id]).collect())
    }

    /// The university's publication portfolio in an area: publications with
    /// at least one author who is a researcher of that university in a sector
    /// of the area. Deduplicated and ordered by id.
    pub fn portfolio(&self, university_id: &str, area_id: &str) -> Result<Vec<&Publication>> {
        self.require_university(university_id)?;
        let area_sectors = self.sectors_in_area(area_id)?;
        let ids: BTreeSet<&str> = self
            .researchers
            .values()
            .filter(|r| r.university_id == university_id && area_sectors.contains(&r.sector_code))
            .flat_map(|r| self.publications_of(&r.researcher_id))
            .map(String::as_str)
            .collect();
        Ok(ids.into_iter().map(|id| &self.publications[id]).collect())
    }

    /// Period-average headcount, 0 when no record exists.
    pub fn staff_count(&self, university_id: &str, sector: &str) -> Result<f64> {
        self.require_university(university_id)?;
        Ok(self
            .staff
            .get(&(university_id.to_string(), sector.to_string()))
            .copied()
            .unwrap_or(0.0))
    }

    pub fn area_staff(&self, university_id: &str, area_id: &str) -> Result<f64> {
        let mut total = 0.0;
        for s in self.sectors_in_area(area_id)? {
            total += self.staff_count(university_id, s)?;
        }
        Ok(total)
    }

    /// Distinct sectors, within the area, of the university's authors of a
    /// publication.
    pub fn counting_sectors(
        &self,
        publication: &Publication,
        university_id: &str,
        area_id: &str,
    ) -> BTreeSet<&str> {
        publication
            .author_ids
            .iter()
            .filter_map(|a| self.researchers.get(a))
            .filter(|r| r.university_id == university_id)
            .filter(|r| {
                self.sectors
                    .get(&r.sector_code)
                    .is_some_and(|s| s.area_id == area_id)
            })
            .map(|r| r.sector_code.as_str())
            .collect()
    }

    /// Converts the corpus back into row tables, in a canonical order.
    pub fn to_parts(&self) -> CorpusParts {
        let mut journals = Vec::new();
        for j in self.journals.values() {
            for (&year, &impact_factor) in &j.impact_factors {
                journals.push(JournalYear {
                    journal_id: j.journal_id.clone(),
                    sector_codes: j.sector_codes.iter().cloned().collect(),
                    year,
                    impact_factor,
                });
            }
        }
        CorpusParts {
            sectors: self.sectors.values().cloned().collect(),
            journals,
            researchers: self.researchers.values().cloned().collect(),
            publications: self.publications.values().cloned().collect(),
            staff: self.staff_records().collect(),
            submissions: self.submissions.clone(),
            size_categories: self
                .size_categories
                .iter()
                .map(|(u, c)| (u.clone(), c.clone()))
                .collect(),
        }
    }
}

fn invariant(file: &str, line: u64, message: &str) -> Error {
    Error::Invariant {
        file: file.to_string(),
        line,
        message: message.to_string(),
    }
}

fn dangling(file: &str, line: u64, field: &str, value: &str) -> Error {
    Error::DanglingReference {
        file: file.to_string(),
        line,
        field: field.to_string(),
        value: value.to_string(),
    }
}
