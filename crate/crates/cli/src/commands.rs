use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use assess_core::compare::{audit_all, pearson_test, rank_variation, summarize_audits};
use assess_core::corpus::load_corpus_with_period;
use assess_core::indicators::all_sector_indicators;
use assess_core::report::{self, CorrelationRow, Format, Report};
use assess_core::synth::IfDistribution;
use assess_core::vtr::{rank_area, rank_scores};
use assess_core::{
    avg_submission_quality, generate, score_all, write_corpus, Corpus, Error, IndicatorKind,
    ProductivityTable, RankTable, SynthConfig, VtrScore,
};
use serde_json::json;

use crate::manifest::Manifest;
use crate::{Command, Common, SynthArgs};

/// Top-k size for rank variation overlap.
const TOP_K: usize = 10;

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Validate(c) => validate(c),
        Command::Indicators(c) => indicators(c),
        Command::VtrScore(c) => vtr_score(c),
        Command::Aggregate(c) => aggregate(c),
        Command::Compare(c) => compare(c),
        Command::Audit(c) => audit(c),
        Command::Synth(s) => synth(s),
    }
}

/// Collects the reports of one run and writes them with the manifest.
struct Run<'a> {
    name: &'static str,
    common: &'a Common,
    outputs: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    fn new(name: &'static str, common: &'a Common) -> Self {
        Run {
            name,
            common,
            outputs: Vec::new(),
        }
    }

    fn format(&self) -> Format {
        self.common.output.format.into()
    }

    fn primary(&self) -> PathBuf {
        self.common.output.out.clone().unwrap_or_else(|| {
            PathBuf::from(format!("{}.{}", self.name, self.format().extension()))
        })
    }

    /// `<stem>.<tag>.<ext>` next to the primary report.
    fn sibling(&self, tag: &str, ext: &str) -> PathBuf {
        let primary = self.primary();
        let stem = primary
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.name.to_string());
        primary.with_file_name(format!("{stem}.{tag}.{ext}"))
    }

    fn load(&self) -> Result<Corpus> {
        load_corpus_with_period(&self.common.input, self.common.period)
            .with_context(|| format!("invalid corpus in {}", self.common.input.display()))
    }

    fn emit(&mut self, path: PathBuf, report: &Report) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        report.write(self.format(), BufWriter::new(file))?;
        self.outputs.push(path);
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let c = self.common;
        let manifest = Manifest {
            input: Some(c.input.clone()),
            command: self.name.to_string(),
            config: json!({
                "period": c.period.map(|(a, b)| format!("{a}:{b}")),
                "min_outputs": c.min_outputs,
                "alpha": c.alpha,
                "indicator": c.indicator.as_str(),
                "format": self.format().extension(),
            }),
            outputs: self.outputs.clone(),
            stamp: c.output.stamp,
        };
        manifest.write(&self.sibling("manifest", "json"))?;
        for p in &self.outputs {
            println!("wrote {}", p.display());
        }
        Ok(())
    }
}

fn validate(c: &Common) -> Result<()> {
    let mut run = Run::new("validate", c);
    let corpus = run.load()?;
    let (first, last) = corpus.period();
    let mut report = Report::new(vec!["item", "count"]);
    let counts = [
        ("sectors", corpus.sectors().count()),
        ("areas", corpus.areas().len()),
        ("journals", corpus.journals().count()),
        ("researchers", corpus.researchers().count()),
        ("universities", corpus.universities().count()),
        ("publications", corpus.publications().count()),
        ("staff_records", corpus.staff_records().count()),
        ("submissions", corpus.submissions().len()),
    ];
    for (item, n) in counts {
        report.push(vec![item.into(), n.into()]);
    }
    println!("corpus ok, period {first}:{last}");
    run.emit(run.primary(), &report)?;
    run.finish()
}

fn indicators(c: &Common) -> Result<()> {
    let mut run = Run::new("indicators", c);
    let corpus = run.load()?;
    let rows = all_sector_indicators(&corpus)?;
    run.emit(run.primary(), &report::indicators_report(&rows))?;
    run.finish()
}

/// Area rank tables, skipping areas where nobody passes the output filter.
fn area_tables(corpus: &Corpus, scores: &[VtrScore], min_outputs: u32) -> Result<Vec<RankTable>> {
    let mut tables = Vec::new();
    for area in corpus.areas().keys() {
        match rank_area(scores, corpus, area, None, min_outputs) {
            Ok(t) => tables.push(t),
            Err(Error::EmptyRanking) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(tables)
}

fn vtr_score(c: &Common) -> Result<()> {
    let mut run = Run::new("vtr-score", c);
    let corpus = run.load()?;
    let scores = score_all(&corpus);
    let tables = area_tables(&corpus, &scores, c.min_outputs)?;
    run.emit(run.primary(), &report::vtr_report(&scores, &tables))?;

    let mut by_category = Vec::new();
    let categories: std::collections::BTreeSet<&String> =
        corpus.size_categories().values().collect();
    for area in corpus.areas().keys() {
        for &category in &categories {
            match rank_area(&scores, &corpus, area, Some(category), c.min_outputs) {
                Ok(t) => by_category.push(t),
                Err(Error::EmptyRanking) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    if !by_category.is_empty() {
        let ext = run.format().extension();
        run.emit(
            run.sibling("categories", ext),
            &report::rank_table_report(&by_category),
        )?;
    }
    run.finish()
}

fn aggregate(c: &Common) -> Result<()> {
    let mut run = Run::new("aggregate", c);
    let corpus = run.load()?;
    let table = ProductivityTable::new(&corpus)?;
    let rows = table.area_productivity(c.indicator);
    run.emit(run.primary(), &report::area_productivity_report(&rows))?;
    run.finish()
}

fn ranked_subset(label: &str, scores: &BTreeMap<&str, f64>) -> Result<RankTable> {
    let pairs: Vec<(&str, f64)> = scores.iter().map(|(&u, &s)| (u, s)).collect();
    Ok(rank_scores(label, &pairs)?)
}

fn compare(c: &Common) -> Result<()> {
    let mut run = Run::new("compare", c);
    let corpus = run.load()?;
    let scores = score_all(&corpus);
    let tables = area_tables(&corpus, &scores, c.min_outputs)?;
    let productivity = ProductivityTable::new(&corpus)?;
    let by_kind: BTreeMap<IndicatorKind, BTreeMap<(String, String), f64>> = IndicatorKind::ALL
        .iter()
        .map(|&k| {
            let values = productivity
                .area_productivity(k)
                .into_iter()
                .map(|a| ((a.area_id, a.university_id), a.value))
                .collect();
            (k, values)
        })
        .collect();

    let mut correlations = Vec::new();
    let mut variations = Vec::new();
    for table in &tables {
        let area = table.label.as_str();

        // Peer-review index against mean submission quality.
        let (mut rs, mut qis) = (Vec::new(), Vec::new());
        for row in &table.rows {
            if let Ok(qi) = avg_submission_quality(&corpus, &row.entity_id, area) {
                rs.push(row.score);
                qis.push(qi);
            }
        }
        match pearson_test(&rs, &qis, c.alpha) {
            Ok(result) => correlations.push(CorrelationRow {
                area_id: area.to_string(),
                indicator: "QI".to_string(),
                result,
            }),
            Err(e) => eprintln!("warning: area {area}, QI: {e}"),
        }

        // Percentile rankings over the universities present in both.
        for kind in IndicatorKind::ALL {
            let values = &by_kind[&kind];
            let mut peer = BTreeMap::new();
            let mut biblio = BTreeMap::new();
            for row in &table.rows {
                if let Some(&v) = values.get(&(area.to_string(), row.entity_id.clone())) {
                    peer.insert(row.entity_id.as_str(), row.score);
                    biblio.insert(row.entity_id.as_str(), v);
                }
            }
            if peer.is_empty() {
                eprintln!("warning: area {area}, {kind}: no university has both rankings");
                continue;
            }
            let peer_table = ranked_subset(area, &peer)?;
            let biblio_table = ranked_subset(area, &biblio)?;
            let xs: Vec<f64> = peer
                .keys()
                .map(|u| peer_table.get(u).expect("ranked").percentile)
                .collect();
            let ys: Vec<f64> = peer
                .keys()
                .map(|u| biblio_table.get(u).expect("ranked").percentile)
                .collect();
            match pearson_test(&xs, &ys, c.alpha) {
                Ok(result) => correlations.push(CorrelationRow {
                    area_id: area.to_string(),
                    indicator: kind.as_str().to_string(),
                    result,
                }),
                Err(e) => eprintln!("warning: area {area}, {kind}: {e}"),
            }
            if kind == c.indicator {
                variations.push((
                    area.to_string(),
                    rank_variation(&peer_table, &biblio_table, TOP_K)?,
                ));
            }
        }
    }
    run.emit(run.primary(), &report::correlations_report(&correlations))?;
    let ext = run.format().extension();
    run.emit(
        run.sibling("variations", ext),
        &report::variations_report(&variations),
    )?;
    run.finish()
}

fn audit(c: &Common) -> Result<()> {
    let mut run = Run::new("audit", c);
    let corpus = run.load()?;
    let (audits, skipped) = audit_all(&corpus);
    for (university, area, e) in &skipped {
        eprintln!("warning: {university} in area {area} not audited: {e}");
    }
    run.emit(run.primary(), &report::audit_report(&audits))?;
    let ext = run.format().extension();
    run.emit(
        run.sibling("summary", ext),
        &report::audit_summary_report(&summarize_audits(&audits)),
    )?;
    run.finish()
}

fn synth(s: &SynthArgs) -> Result<()> {
    let defaults = SynthConfig::default();
    let config = SynthConfig {
        seed: s.seed,
        n_universities: s.universities,
        n_areas: s.areas,
        n_sectors_per_area: s.sectors_per_area,
        n_journals_per_sector: s.journals_per_sector,
        n_researchers: s.researchers,
        publication_rate: s.rate,
        if_distribution: IfDistribution::default(),
        selection_strategy: s.strategy,
        submission_fraction: s.fraction,
        period: s.period.unwrap_or(defaults.period),
    };
    let corpus = generate(&config)?;
    fs::create_dir_all(&s.out).with_context(|| format!("creating {}", s.out.display()))?;
    write_corpus(&corpus, &s.out)?;

    let mut outputs: Vec<PathBuf> = fs::read_dir(&s.out)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    outputs.sort();
    let manifest = Manifest {
        input: None,
        command: "synth".to_string(),
        config: serde_json::to_value(&config)?,
        outputs,
        stamp: s.stamp,
    };
    manifest.write(&manifest_in(&s.out))?;
    println!(
        "wrote {} publications and {} submissions to {}",
        corpus.publications().count(),
        corpus.submissions().len(),
        s.out.display()
    );
    Ok(())
}

fn manifest_in(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}
