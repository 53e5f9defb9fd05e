//! Automated credibility appraisal for webpages shared on social media.
//!
//! The crate covers the whole batch pipeline:
//!
//! - [`ingest`]: tweet and webpage parsing, URL normalization, language and
//!   length filters, near-duplicate removal.
//! - [`textprep`]: text cleaning, tokenization, vocabulary pruning, TF-IDF.
//! - [`models`]: linear SVM (dual coordinate descent) and random forest
//!   classifiers trained per checklist criterion, plus grid search.
//! - [`eval`]: stratified cross-validation, F1/accuracy, Fleiss' kappa,
//!   Fisher's exact test and odds ratios for term significance.
//! - [`credibility`]: the seven-criterion checklist, scores, buckets and the
//!   per-criterion ensemble.
//! - [`exposure`]: share counts, potential exposure, user profiles and the
//!   follower network.
//! - [`cli`]: the `vaxcred` command line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod cli;
pub mod credibility;
pub mod error;
pub mod eval;
pub mod exposure;
pub mod ingest;
pub mod models;
pub mod rng;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};

/// Runs `f` inside a dedicated rayon pool with `threads` workers.
///
/// Every parallel section in the crate merges results by index, so output is
/// identical for any thread count.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build thread pool");
    pool.install(f)
}
