use std::collections::HashMap;
use std::fs::File;
use std::path::Path;
use std::rc::Rc;

use csv::StringRecord;

use super::{
    Corpus, CorpusParts, JournalYear, Publication, Researcher, Sector, SourceLines, StaffRecord,
    Submission,
};
use crate::error::{Error, Result};

const SECTORS: &str = "sectors.csv";
const JOURNALS: &str = "journals.csv";
const RESEARCHERS: &str = "researchers.csv";
const PUBLICATIONS: &str = "publications.csv";
const STAFF: &str = "staff.csv";
const SUBMISSIONS: &str = "submissions.csv";
const UNIVERSITIES: &str = "universities.csv";

/// Loads the corpus CSV files from a directory, inferring the period.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Corpus> {
    load_corpus_with_period(dir, None)
}

pub fn load_corpus_with_period(
    dir: impl AsRef<Path>,
    period: Option<(i32, i32)>,
) -> Result<Corpus> {
    let dir = dir.as_ref();
    let mut parts = CorpusParts::default();
    let mut lines = SourceLines::default();

    for (line, row) in read_table(dir, SECTORS, &["sector_code", "area_id", "area_name"])? {
        lines.sectors.push(line);
        parts.sectors.push(Sector {
            code: row.text("sector_code")?,
            area_id: row.text("area_id")?,
            area_name: row.raw("area_name").to_string(),
        });
    }

    for (line, row) in read_table(
        dir,
        JOURNALS,
        &["journal_id", "sector_codes", "year", "impact_factor"],
    )? {
        lines.journals.push(line);
        parts.journals.push(JournalYear {
            journal_id: row.text("journal_id")?,
            sector_codes: row.list("sector_codes"),
            year: row.parse("year")?,
            impact_factor: row.parse("impact_factor")?,
        });
    }

    for (line, row) in read_table(
        dir,
        RESEARCHERS,
        &["researcher_id", "university_id", "sector_code"],
    )? {
        lines.researchers.push(line);
        parts.researchers.push(Researcher {
            researcher_id: row.text("researcher_id")?,
            university_id: row.text("university_id")?,
            sector_code: row.text("sector_code")?,
        });
    }

    for (line, row) in read_table(
        dir,
        PUBLICATIONS,
        &[
            "pub_id",
            "journal_id",
            "year",
            "n_institutions",
            "author_ids",
        ],
    )? {
        lines.publications.push(line);
        parts.publications.push(Publication {
            pub_id: row.text("pub_id")?,
            journal_id: row.text("journal_id")?,
            year: row.parse("year")?,
            n_institutions: row.parse("n_institutions")?,
            author_ids: row.list("author_ids").into_iter().collect(),
        });
    }

    for (line, row) in read_table(dir, STAFF, &["university_id", "sector_code", "headcount"])? {
        lines.staff.push(line);
        parts.staff.push(StaffRecord {
            university_id: row.text("university_id")?,
            sector_code: row.text("sector_code")?,
            headcount: row.parse("headcount")?,
        });
    }

    for (line, row) in read_table(
        dir,
        SUBMISSIONS,
        &["university_id", "area_id", "rating", "pub_id"],
    )? {
        lines.submissions.push(line);
        let pub_id = row.raw("pub_id").trim();
        parts.submissions.push(Submission {
            university_id: row.text("university_id")?,
            area_id: row.text("area_id")?,
            rating: row.parse("rating")?,
            pub_id: (!pub_id.is_empty()).then(|| pub_id.to_string()),
        });
    }

    if dir.join(UNIVERSITIES).exists() {
        for (line, row) in read_table(dir, UNIVERSITIES, &["university_id", "size_category"])? {
            lines.universities.push(line);
            parts.size_categories.push((
                row.text("university_id")?,
                row.raw("size_category").trim().to_string(),
            ));
        }
    }

    Corpus::build(parts, &lines, period)
}

/// Writes the six corpus files (and `universities.csv` when size categories
/// are present) into a directory, in canonical row order.
pub fn write_corpus(corpus: &Corpus, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let parts = corpus.to_parts();

    let mut w = csv::Writer::from_path(dir.join(SECTORS))?;
    w.write_record(["sector_code", "area_id", "area_name"])?;
    for s in &parts.sectors {
        w.write_record([&s.code, &s.area_id, &s.area_name])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(JOURNALS))?;
    w.write_record(["journal_id", "sector_codes", "year", "impact_factor"])?;
    for j in &parts.journals {
        w.write_record([
            j.journal_id.clone(),
            j.sector_codes.join("|"),
            j.year.to_string(),
            j.impact_factor.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(RESEARCHERS))?;
    w.write_record(["researcher_id", "university_id", "sector_code"])?;
    for r in &parts.researchers {
        w.write_record([&r.researcher_id, &r.university_id, &r.sector_code])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(PUBLICATIONS))?;
    w.write_record([
        "pub_id",
        "journal_id",
        "year",
        "n_institutions",
        "author_ids",
    ])?;
    for p in &parts.publications {
        let authors: Vec<&str> = p.author_ids.iter().map(String::as_str).collect();
        w.write_record([
            p.pub_id.clone(),
            p.journal_id.clone(),
            p.year.to_string(),
            p.n_institutions.to_string(),
            authors.join("|"),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(STAFF))?;
    w.write_record(["university_id", "sector_code", "headcount"])?;
    for s in &parts.staff {
        w.write_record([
            s.university_id.clone(),
            s.sector_code.clone(),
            s.headcount.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(SUBMISSIONS))?;
    w.write_record(["university_id", "area_id", "rating", "pub_id"])?;
    for s in &parts.submissions {
        w.write_record([
            s.university_id.clone(),
            s.area_id.clone(),
            s.rating.to_string(),
            s.pub_id.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;

    if !parts.size_categories.is_empty() {
        let mut w = csv::Writer::from_path(dir.join(UNIVERSITIES))?;
        w.write_record(["university_id", "size_category"])?;
        for (u, c) in &parts.size_categories {
            w.write_record([u, c])?;
        }
        w.flush()?;
    }
    Ok(())
}

struct Row {
    file: &'static str,
    line: u64,
    columns: Rc<HashMap<String, usize>>,
    record: StringRecord,
}

impl Row {
    fn raw(&self, column: &str) -> &str {
        self.columns
            .get(column)
            .and_then(|&i| self.record.get(i))
            .unwrap_or("")
    }

    fn malformed(&self, column: &str, message: impl Into<String>) -> Error {
        Error::Malformed {
            file: self.file.to_string(),
            line: self.line,
            column: column.to_string(),
            message: message.into(),
        }
    }

    fn text(&self, column: &str) -> Result<String> {
        let v = self.raw(column).trim();
        if v.is_empty() {
            return Err(self.malformed(column, "empty value"));
        }
        Ok(v.to_string())
    }

    fn parse<T>(&self, column: &str) -> Result<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let v = self.raw(column).trim();
        v.parse()
            .map_err(|e| self.malformed(column, format!("cannot parse `{v}`: {e}")))
    }

    fn list(&self, column: &str) -> Vec<String> {
        self.raw(column)
            .split('|')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    }
}

/// Reads a headed CSV file and yields `(line, row)` pairs. Header presence
/// and per-row field counts are checked here.
fn read_table(dir: &Path, file: &'static str, required: &[&str]) -> Result<Vec<(u64, Row)>> {
    let path = dir.join(file);
    if !path.exists() {
        return Err(Error::MissingFile(path));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(File::open(&path)?);
    let headers = reader.headers()?.clone();
    let columns: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim().trim_start_matches('\u{feff}').to_string(), i))
        .collect();
    for &c in required {
        if !columns.contains_key(c) {
            return Err(Error::Malformed {
                file: file.to_string(),
                line: 1,
                column: c.to_string(),
                message: "missing header column".into(),
            });
        }
    }
    let columns = Rc::new(columns);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Malformed {
            file: file.to_string(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            column: String::new(),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push((
            line,
            Row {
                file,
                line,
                columns: Rc::clone(&columns),
                record,
            },
        ));
    }
    Ok(rows)
}
