//! Tabular reports and their CSV / JSON encodings.
//!
//! CSV cells use the shortest round-trip float representation. JSON mirrors
//! the CSV columns, one object per row, with floats rounded to 6 significant
//! digits and undefined cells as `null`.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::aggregate::AreaProductivity;
use crate::compare::{AreaAuditSummary, RankVariationStats, SelectionAudit};
use crate::error::Result;
use crate::indicators::{IndicatorKind, SectorIndicators};
use crate::vtr::{RankTable, VtrScore};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) => Number::from_f64(round_significant(*x, 6))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &rows).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(String::from_utf8(buf).expect("reports are UTF-8"))
    }
}

pub fn indicators_report(rows: &[SectorIndicators]) -> Report {
    let mut r = Report::new(vec![
        "university_id",
        "sector_code",
        "O",
        "FO",
        "SS",
        "FSS",
        "P",
        "FP",
        "QP",
        "FQP",
    ]);
    for i in rows {
        let mut row: Vec<Cell> = vec![
            i.university_id.as_str().into(),
            i.sector_code.as_str().into(),
            i.output.into(),
            i.fractional_output.into(),
            i.scientific_strength.into(),
            i.fractional_strength.into(),
        ];
        row.extend(
            IndicatorKind::ALL
                .iter()
                .map(|&k| Cell::from(i.productivity(k))),
        );
        r.push(row);
    }
    r
}

/// One row per score; rank and percentile come from the matching table when
/// the university was ranked, and are empty otherwise.
pub fn vtr_report(scores: &[VtrScore], tables: &[RankTable]) -> Report {
    let mut r = Report::new(vec![
        "university_id",
        "area_id",
        "E",
        "G",
        "A",
        "L",
        "T",
        "R",
        "rank",
        "percentile",
    ]);
    for s in scores {
        let ranked = tables
            .iter()
            .find(|t| t.label == s.area_id)
            .and_then(|t| t.get(&s.university_id));
        r.push(vec![
            s.university_id.as_str().into(),
            s.area_id.as_str().into(),
            s.excellent.into(),
            s.good.into(),
            s.acceptable.into(),
            s.limited.into(),
            s.total().into(),
            s.r().into(),
            ranked.map_or(Cell::Empty, |row| row.rank.into()),
            ranked.map_or(Cell::Empty, |row| row.percentile.into()),
        ]);
    }
    r
}

pub fn rank_table_report(tables: &[RankTable]) -> Report {
    let mut r = Report::new(vec!["grouping", "entity_id", "score", "rank", "percentile"]);
    for t in tables {
        for row in &t.rows {
            r.push(vec![
                t.label.as_str().into(),
                row.entity_id.as_str().into(),
                row.score.into(),
                row.rank.into(),
                row.percentile.into(),
            ]);
        }
    }
    r
}

pub fn area_productivity_report(rows: &[AreaProductivity]) -> Report {
    let mut r = Report::new(vec![
        "university_id",
        "area_id",
        "kind",
        "value",
        "total_staff",
    ]);
    for a in rows {
        r.push(vec![
            a.university_id.as_str().into(),
            a.area_id.as_str().into(),
            a.kind.as_str().into(),
            a.value.into(),
            a.total_staff.into(),
        ]);
    }
    r
}

/// A correlation row as emitted by the comparison report.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub area_id: String,
    pub indicator: String,
    pub result: crate::compare::CorrelationResult,
}

pub fn correlations_report(rows: &[CorrelationRow]) -> Report {
    let mut r = Report::new(vec![
        "area_id",
        "indicator",
        "n",
        "r",
        "critical",
        "significant",
    ]);
    for c in rows {
        r.push(vec![
            c.area_id.as_str().into(),
            c.indicator.as_str().into(),
            c.result.n.into(),
            c.result.r.into(),
            c.result.critical_value.into(),
            c.result.significant.into(),
        ]);
    }
    r
}

pub fn variations_report(rows: &[(String, RankVariationStats)]) -> Report {
    let mut r = Report::new(vec![
        "area_id",
        "changed",
        "total",
        "max_abs",
        "mean_abs",
        "median_abs",
        "std_abs",
        "top_k_overlap",
    ]);
    for (area, s) in rows {
        r.push(vec![
            area.as_str().into(),
            s.changed.into(),
            s.total.into(),
            s.max_abs.into(),
            s.mean_abs.into(),
            s.median_abs.into(),
            s.std_abs.into(),
            s.top_k_overlap.into(),
        ]);
    }
    r
}

pub fn audit_report(rows: &[SelectionAudit]) -> Report {
    let mut r = Report::new(vec![
        "university_id",
        "area_id",
        "selected_n",
        "portfolio_n",
        "below_median_share",
        "displaced_count",
        "displaced_share",
    ]);
    for a in rows {
        r.push(vec![
            a.university_id.as_str().into(),
            a.area_id.as_str().into(),
            a.selected_n.into(),
            a.portfolio_n.into(),
            a.below_median_share.into(),
            a.displaced_count.into(),
            a.displaced_share.into(),
        ]);
    }
    r
}

pub fn audit_summary_report(rows: &[AreaAuditSummary]) -> Report {
    let mut r = Report::new(vec![
        "area_id",
        "universities",
        "average",
        "median",
        "max",
        "variation_coefficient",
    ]);
    for s in rows {
        r.push(vec![
            s.area_id.as_str().into(),
            s.universities.into(),
            s.average.into(),
            s.median.into(),
            s.max.into(),
            s.variation_coefficient.into(),
        ]);
    }
    r
}
