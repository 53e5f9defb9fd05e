//! URL normalization, language detection and the corpus filters applied to
//! the bundled webpages.
//!
//! ```text
//! cargo run --example ingest_filter
//! ```

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use vaxcred::ingest::{
    contiguous_word_count, detect_language, ingest_pages, normalize_url, parse_tweets,
    parse_webpages, DEFAULT_JACCARD, DEFAULT_MIN_WORDS,
};

fn main() -> vaxcred::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");

    for raw in [
        "HTTPS://VaxFacts.ORG/articles/001?utm_source=twitter&id=3#comments",
        "http://example.org",
        "not a url",
    ] {
        println!("{raw:<70} -> {:?}", normalize_url(raw));
    }

    let pages = parse_webpages(BufReader::new(File::open(fixtures.join("webpages.jsonl"))?))?;
    for page in pages.pages.iter().step_by(40) {
        let d = detect_language(&page.text);
        println!(
            "{:<45} lang={} ({:.3}) words={}",
            page.url,
            d.language,
            d.confidence,
            contiguous_word_count(&page.text)
        );
    }

    let (docs, report) = ingest_pages(pages.pages, DEFAULT_MIN_WORDS, DEFAULT_JACCARD);
    println!("\n{}", serde_json::to_string_pretty(&report)?);
    println!("retained {} documents, first {}", docs.len(), docs[0].url);

    let tweets = parse_tweets(BufReader::new(File::open(fixtures.join("tweets.jsonl"))?))?;
    println!(
        "tweets: {} parsed, {} skipped",
        tweets.records.len(),
        tweets.skipped
    );
    Ok(())
}
