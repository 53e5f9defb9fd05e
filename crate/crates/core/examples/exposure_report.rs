//! Share counts and potential exposure by credibility bucket for the
//! bundled tweets, using gold labels as page scores.
//!
//! ```text
//! cargo run --example exposure_report
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use vaxcred::credibility::{read_labels_csv, score_from_labels};
use vaxcred::exposure::{aggregate_shares, bucket_share_report, top_exposures};
use vaxcred::ingest::parse_tweets;

fn main() -> vaxcred::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let tweets = parse_tweets(BufReader::new(File::open(fixtures.join("tweets.jsonl"))?))?;
    let scored: BTreeMap<_, _> = read_labels_csv(File::open(fixtures.join("labels.csv"))?)?
        .into_iter()
        .map(|(url, l)| (url, score_from_labels(l)))
        .collect();

    let shares = aggregate_shares(&tweets.records, &scored);
    let report = bucket_share_report(&shares);
    println!(
        "{} pages, {} tweets, potential exposure {}",
        report.total_pages, report.total_tweets, report.total_exposure
    );
    for b in &report.per_bucket {
        println!(
            "{:<7} pages {:>3}  tweets {:>4} ({:>5.1}%)  exposure {:>9} ({:>5.1}%)",
            b.bucket.as_str(),
            b.pages,
            b.tweets,
            100.0 * b.tweet_proportion,
            b.exposure,
            100.0 * b.exposure_proportion
        );
    }
    println!("\nmost exposed pages:");
    for s in top_exposures(&shares, 5) {
        println!(
            "  {:<45} {:>9} via {:>3} tweets ({})",
            s.url, s.potential_exposure, s.tweet_count, s.bucket
        );
    }
    Ok(())
}
