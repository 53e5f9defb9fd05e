//! Terms over- and under-represented in low-credibility pages, ranked by
//! Fisher's exact test.
//!
//! ```text
//! cargo run --example term_significance
//! ```

use std::fs::File;
use std::path::PathBuf;

use vaxcred::credibility::{read_labels_csv, score_from_labels, Bucket};
use vaxcred::eval::{fisher_exact, odds_ratio_ci, term_significance};
use vaxcred::ingest::{ingest_pages, parse_webpages, DEFAULT_JACCARD, DEFAULT_MIN_WORDS};
use vaxcred::textprep::{analyze, build_vocabulary, default_stopwords};

fn main() -> vaxcred::Result<()> {
    let r = fisher_exact(8, 2, 1, 5);
    let or = odds_ratio_ci(8, 2, 1, 5);
    println!(
        "table [[8,2],[1,5]]: p = {:.5}, OR = {:.1} ({:.2} to {:.2})",
        r.p_value, or.odds_ratio, or.ci_low, or.ci_high
    );

    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let pages = parse_webpages(std::io::BufReader::new(File::open(
        fixtures.join("webpages.jsonl"),
    )?))?;
    let (docs, _) = ingest_pages(pages.pages, DEFAULT_MIN_WORDS, DEFAULT_JACCARD);
    let labels = read_labels_csv(File::open(fixtures.join("labels.csv"))?)?;
    let (mut low, mut other) = (Vec::new(), Vec::new());
    for (url, l) in &labels {
        if let Some(d) = docs.iter().find(|d| &d.url == url) {
            let tokens = analyze(&d.text);
            if score_from_labels(*l).bucket == Bucket::Low {
                low.push(tokens);
            } else {
                other.push(tokens);
            }
        }
    }
    let all: Vec<Vec<String>> = low.iter().chain(&other).cloned().collect();
    let vocab = build_vocabulary(&all, 2, &default_stopwords())?;
    let stats = term_significance(&low, &other, &vocab)?;
    println!(
        "{} low vs {} other pages, {} terms",
        low.len(),
        other.len(),
        stats.len()
    );
    println!(
        "{:<14} {:>4} {:>4} {:>10} {:>10}",
        "term", "a", "c", "odds", "p"
    );
    for s in stats.iter().take(12) {
        println!(
            "{:<14} {:>4} {:>4} {:>10.3} {:>10.2e}",
            s.term, s.a, s.c, s.odds_ratio, s.p_value
        );
    }
    Ok(())
}
