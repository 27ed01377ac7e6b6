mod common;

use std::fs;

use assess_core::corpus::{load_corpus, write_corpus, Corpus};
use assess_core::synth::{generate, SelectionStrategy};
use assess_core::Error;
use common::{fixture, oracle_portfolio, small_config};

fn copy_fixture(name: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture(name)).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

#[test]
fn padua_fixture_has_121_math_staff() {
    let corpus = load_corpus(fixture("padua")).unwrap();
    assert_eq!(corpus.staff_count("PD", "MAT/05").unwrap(), 35.0);
    assert_eq!(corpus.area_staff("PD", "01").unwrap(), 121.0);
    let total: f64 = corpus
        .sectors_in_area("01")
        .unwrap()
        .iter()
        .map(|s| corpus.staff_count("PD", s).unwrap())
        .sum();
    assert_eq!(total, 121.0);
    assert_eq!(corpus.period(), (2001, 2003));
}

#[test]
fn empty_publications_file_loads() {
    let dir = copy_fixture("padua");
    fs::write(
        dir.path().join("publications.csv"),
        "pub_id,journal_id,year,n_institutions,author_ids\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("submissions.csv"),
        "university_id,area_id,rating,pub_id\n",
    )
    .unwrap();
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.publications().count(), 0);
}

#[test]
fn unknown_journal_is_reported_with_its_row() {
    let dir = copy_fixture("padua");
    let path = dir.path().join("publications.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("P999,J-NOPE,2002,1,PD-MAT05-1\n");
    let line = text.lines().count() as u64;
    fs::write(&path, text).unwrap();
    match load_corpus(dir.path()).unwrap_err() {
        Error::DanglingReference {
            file,
            line: l,
            field,
            value,
        } => {
            assert_eq!(file, "publications.csv");
            assert_eq!(l, line);
            assert_eq!(field, "journal_id");
            assert_eq!(value, "J-NOPE");
        }
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn malformed_cell_names_file_line_and_column() {
    let dir = copy_fixture("padua");
    let path = dir.path().join("staff.csv");
    let text = fs::read_to_string(&path)
        .unwrap()
        .replacen(",35", ",thirty-five", 1);
    fs::write(&path, text).unwrap();
    match load_corpus(dir.path()).unwrap_err() {
        Error::Malformed {
            file, line, column, ..
        } => {
            assert_eq!(file, "staff.csv");
            assert_eq!(column, "headcount");
            assert_eq!(line, 6);
        }
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn missing_file() {
    let dir = copy_fixture("padua");
    fs::remove_file(dir.path().join("sectors.csv")).unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(Error::MissingFile(_))
    ));
}

#[test]
fn duplicate_researcher() {
    let dir = copy_fixture("padua");
    let path = dir.path().join("researchers.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("PD-MAT05-1,PD,MAT/05\n");
    fs::write(&path, text).unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(Error::DuplicateKey { .. })
    ));
}

#[test]
fn bad_rating_rejected() {
    let dir = copy_fixture("padua");
    let path = dir.path().join("submissions.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("PD,01,X,\n");
    fs::write(&path, text).unwrap();
    assert!(matches!(
        load_corpus(dir.path()),
        Err(Error::Malformed { column, .. }) if column == "rating"
    ));
}

#[test]
fn round_trip_and_determinism() {
    let original = load_corpus(fixture("padua")).unwrap();
    let again = load_corpus(fixture("padua")).unwrap();
    assert_eq!(original, again);

    let dir = tempfile::tempdir().unwrap();
    write_corpus(&original, dir.path()).unwrap();
    let reloaded = load_corpus(dir.path()).unwrap();
    assert_eq!(original, reloaded);

    let synth = generate(&small_config(5, SelectionStrategy::Random)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_corpus(&synth, dir.path()).unwrap();
    assert_eq!(synth, load_corpus(dir.path()).unwrap());
}

#[test]
fn portfolio_matches_authorship_scan() {
    for seed in 0..8 {
        let corpus = generate(&small_config(seed, SelectionStrategy::Random)).unwrap();
        assert!(
            corpus.publications().count() <= 100,
            "corpus too large for the scan"
        );
        let parts = corpus.to_parts();
        for area in corpus.areas().keys() {
            for u in corpus.universities() {
                let got: Vec<String> = corpus
                    .portfolio(u, area)
                    .unwrap()
                    .iter()
                    .map(|p| p.pub_id.clone())
                    .collect();
                assert_eq!(
                    got,
                    oracle_portfolio(&parts, u, area),
                    "seed {seed} {u} {area}"
                );
            }
        }
    }
}

#[test]
fn ten_publication_corpus_portfolio() {
    // Hand-built: two universities, one area with two sectors.
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(
        p.join("sectors.csv"),
        "sector_code,area_id,area_name\nS1,A,Area\nS2,A,Area\nT1,B,Other\n",
    )
    .unwrap();
    fs::write(
        p.join("journals.csv"),
        "journal_id,sector_codes,year,impact_factor\nJ1,S1|S2,2001,1.5\nJ2,T1,2001,0.7\n",
    )
    .unwrap();
    fs::write(
        p.join("researchers.csv"),
        "researcher_id,university_id,sector_code\na,U1,S1\nb,U1,S2\nc,U2,S1\nd,U1,T1\n",
    )
    .unwrap();
    let mut pubs = String::from("pub_id,journal_id,year,n_institutions,author_ids\n");
    let authors = ["a", "a|b", "c", "a|c", "d", "b|d", "c", "b", "d|c", "a|b|c"];
    for (i, a) in authors.iter().enumerate() {
        let inst = if a.contains('c') && (a.contains('a') || a.contains('b') || a.contains('d')) {
            2
        } else {
            1
        };
        pubs.push_str(&format!("P{i},J{},2001,{inst},{a}\n", 1 + i % 2));
    }
    fs::write(p.join("publications.csv"), pubs).unwrap();
    fs::write(p.join("staff.csv"), "university_id,sector_code,headcount\n").unwrap();
    fs::write(
        p.join("submissions.csv"),
        "university_id,area_id,rating,pub_id\n",
    )
    .unwrap();

    let corpus = load_corpus(p).unwrap();
    let parts = corpus.to_parts();
    let ids =
        |v: Vec<&assess_core::Publication>| v.iter().map(|p| p.pub_id.clone()).collect::<Vec<_>>();
    assert_eq!(
        ids(corpus.portfolio("U1", "A").unwrap()),
        vec!["P0", "P1", "P3", "P5", "P7", "P9"]
    );
    for (u, a) in [("U1", "A"), ("U2", "A"), ("U1", "B"), ("U2", "B")] {
        assert_eq!(
            ids(corpus.portfolio(u, a).unwrap()),
            oracle_portfolio(&parts, u, a)
        );
    }
    assert!(corpus.portfolio("U2", "B").unwrap().is_empty());
}

#[test]
fn from_parts_equals_loaded() {
    let loaded = load_corpus(fixture("table1")).unwrap();
    let rebuilt = Corpus::from_parts(loaded.to_parts(), Some(loaded.period())).unwrap();
    assert_eq!(loaded, rebuilt);
}
