//! Trains the seven-criterion ensemble on the bundled labels, scores every
//! retained page and evaluates the three credibility buckets.
//!
//! ```text
//! cargo run --release --example ensemble_scoring
//! ```

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::PathBuf;

use vaxcred::credibility::{evaluate_ensemble, read_labels_csv, train_pipeline, PipelineModel};
use vaxcred::eval::{TextConfig, DEFAULT_FOLDS};
use vaxcred::ingest::{ingest_pages, parse_webpages, DEFAULT_JACCARD, DEFAULT_MIN_WORDS};
use vaxcred::models::Family;

fn main() -> vaxcred::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let pages = parse_webpages(BufReader::new(File::open(fixtures.join("webpages.jsonl"))?))?;
    let (docs, _) = ingest_pages(pages.pages, DEFAULT_MIN_WORDS, DEFAULT_JACCARD);
    let by_url: BTreeMap<&str, &str> = docs
        .iter()
        .map(|d| (d.url.as_str(), d.text.as_str()))
        .collect();

    let labels = read_labels_csv(File::open(fixtures.join("labels.csv"))?)?;
    let (texts, gold): (Vec<String>, Vec<_>) = labels
        .iter()
        .filter_map(|(url, l)| by_url.get(url.as_str()).map(|t| (t.to_string(), *l)))
        .unzip();

    let out = train_pipeline(
        &texts,
        &gold,
        &Family::Svm.default_params(),
        &Family::Rf.default_params(),
        &TextConfig::default(),
        DEFAULT_FOLDS,
        42,
    )?;
    for (criterion, family) in out.model.ensemble.families().iter().enumerate() {
        let svm = out
            .cv
            .get(criterion + 1, Family::Svm)
            .map_or(0.0, |r| r.f1_mean);
        let rf = out
            .cv
            .get(criterion + 1, Family::Rf)
            .map_or(0.0, |r| r.f1_mean);
        println!(
            "criterion {}: {family} (cv f1 svm {svm:.3}, rf {rf:.3})",
            criterion + 1
        );
    }

    let path = std::env::temp_dir().join("vaxcred-example-model.json");
    fs::write(&path, out.model.to_json()?)?;
    let model = PipelineModel::from_json(&fs::read_to_string(&path)?)?;

    for d in docs.iter().take(5) {
        let r = model.predict(&d.text)?;
        println!(
            "{:<45} {:?} score {} {}",
            d.url, r.labels.0, r.score, r.bucket
        );
    }
    let eval = evaluate_ensemble(&texts, &gold, &model)?;
    println!(
        "training-set bucket accuracy {:.3}, low precision {:?}",
        eval.three_class_accuracy, eval.low_precision
    );
    Ok(())
}
