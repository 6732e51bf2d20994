//! Replays the checked-in fuzz corpus through the parser entry points.

use std::fs;
use std::path::{Path, PathBuf};

use fracreg_core::pipeline::{group_monthly, read_records, Aggregate, AvocadoType, SeriesFile};

fn corpus(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files
}

#[test]
fn ingest_seeds() {
    let mut accepted = 0;
    for path in corpus("ingest_csv") {
        let data = fs::read(&path).unwrap();
        for t in [AvocadoType::Conventional, AvocadoType::Organic] {
            if let Ok(records) = read_records(data.as_slice(), "Chicago", t) {
                accepted += 1;
                assert!(records.windows(2).all(|w| w[0].date <= w[1].date));
                for agg in [Aggregate::Median, Aggregate::Mean] {
                    if let Ok((series, groups)) = group_monthly(&records, agg) {
                        assert_eq!(series.len(), groups.len());
                    }
                }
            }
        }
    }
    assert!(accepted > 0);
}

#[test]
fn series_seeds() {
    let mut accepted = 0;
    for path in corpus("series_json") {
        let text = fs::read_to_string(&path).unwrap();
        if let Ok(file) = SeriesFile::from_json(&text) {
            accepted += 1;
            assert_eq!(SeriesFile::from_json(&file.to_json()).unwrap(), file);
        }
    }
    assert!(accepted > 0);
}
