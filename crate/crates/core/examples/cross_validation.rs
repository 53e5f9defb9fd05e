//! Stratified 10-fold cross-validation of both classifier families on a
//! synthetic marker-token corpus.
//!
//! ```text
//! cargo run --release --example cross_validation [-- <docs> <words> <markers> <variants>]
//! ```

use std::time::Instant;

use vaxcred::credibility::N_CRITERIA;
use vaxcred::eval::{cross_validate_binary, TextConfig};
use vaxcred::models::Family;
use vaxcred::synth::{marker_corpus, MarkerConfig};
use vaxcred::textprep::analyze_all;

fn main() -> vaxcred::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let words: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(120);
    let per: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let variants: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let markers = MarkerConfig {
        per_criterion: per,
        variants,
        fidelity: 0.9,
    };
    let (texts, labels) = marker_corpus(n, words, &markers, 7);
    let docs = analyze_all(&texts);
    let text = TextConfig::default();
    println!("criterion  family  f1_mean  acc_mean  seconds");
    for criterion in 1..=N_CRITERIA {
        let y: Vec<u8> = labels.iter().map(|l| l.get(criterion)).collect();
        for family in Family::ALL {
            let start = Instant::now();
            let s = cross_validate_binary(&docs, &y, &family.default_params(), &text, 10, 42)?;
            println!(
                "{criterion:>9}  {:>6}  {:.4}   {:.4}    {:.2}",
                family.as_str(),
                s.f1_mean(),
                s.acc_mean(),
                start.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}
