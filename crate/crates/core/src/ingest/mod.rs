//! Tweet and webpage ingestion and the corpus-inclusion filters.

mod lang;
mod url;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::hash::{Hash, Hasher};
use std::io::BufRead;

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::lang::{detect_language, supported_languages, Detection, MIN_CHARS, UNDETERMINED};
pub use self::url::{normalize_or_raw, normalize_url, NormalizedUrl};

pub const DEFAULT_MIN_WORDS: usize = 300;
pub const DEFAULT_JACCARD: f64 = 0.9;
/// Paragraphs with fewer tokens than this do not count toward `word_count`.
pub const MIN_PARAGRAPH_TOKENS: usize = 20;
pub const SHINGLE_WORDS: usize = 5;

/// One post, either an original tweet or a retweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub user_id: String,
    /// Followers of the posting user at post time.
    pub follower_count: u64,
    pub urls: Vec<String>,
    pub is_retweet: bool,
    #[serde(default)]
    pub retweet_of: Option<String>,
    pub timestamp: DateTime<Utc>,
}

impl TweetRecord {
    fn is_consistent(&self) -> bool {
        self.is_retweet == self.retweet_of.is_some()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedTweets {
    pub records: Vec<TweetRecord>,
    pub skipped: usize,
}

/// Reads line-delimited tweet records.
///
/// Malformed lines, retweet-link inconsistencies and repeated `tweet_id`s
/// are skipped and counted. Blank lines are ignored. More than half the
/// lines malformed is reported as [`Error::CorruptInput`].
pub fn parse_tweets<R: BufRead>(reader: R) -> Result<ParsedTweets> {
    let mut out = ParsedTweets::default();
    let mut seen = HashSet::new();
    let mut total = 0usize;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        match serde_json::from_str::<TweetRecord>(&line) {
            Ok(rec) if rec.is_consistent() && seen.insert(rec.tweet_id.clone()) => {
                out.records.push(rec)
            }
            _ => out.skipped += 1,
        }
    }
    check_corruption(out.skipped, total)?;
    Ok(out)
}

fn check_corruption(malformed: usize, total: usize) -> Result<()> {
    if malformed * 2 > total {
        return Err(Error::CorruptInput { malformed, total });
    }
    Ok(())
}

/// A webpage record as it appears in `webpages.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPage {
    pub url: String,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParsedPages {
    pub pages: Vec<RawPage>,
    pub skipped: usize,
}

/// Reads line-delimited `{"url", "text"}` records, same skip rules as
/// [`parse_tweets`].
pub fn parse_webpages<R: BufRead>(reader: R) -> Result<ParsedPages> {
    let mut out = ParsedPages::default();
    let mut total = 0usize;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        match serde_json::from_str::<RawPage>(&line) {
            Ok(p) => out.pages.push(p),
            Err(_) => out.skipped += 1,
        }
    }
    check_corruption(out.skipped, total)?;
    Ok(out)
}

/// Reads one URL per line, normalizing each.
pub fn read_url_set<R: BufRead>(reader: R) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if !line.is_empty() && !line.starts_with('#') {
            out.insert(normalize_or_raw(line));
        }
    }
    Ok(out)
}

/// A webpage keyed by normalized URL with derived length and language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WebDocument {
    pub url: String,
    pub text: String,
    pub word_count: usize,
    pub language: String,
}

impl WebDocument {
    /// Builds a document from an already-normalized URL.
    pub fn new(url: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let word_count = contiguous_word_count(&text);
        let language = detect_language(&text).language;
        Self {
            url: url.into(),
            text,
            word_count,
            language,
        }
    }
}

/// Words in "contiguous blocks": whitespace tokens summed over paragraphs of
/// at least [`MIN_PARAGRAPH_TOKENS`] tokens, where paragraphs are separated by
/// blank lines.
pub fn contiguous_word_count(text: &str) -> usize {
    let mut total = 0;
    let mut para = 0;
    for line in text.lines() {
        if line.trim().is_empty() {
            if para >= MIN_PARAGRAPH_TOKENS {
                total += para;
            }
            para = 0;
        } else {
            para += line.split_whitespace().count();
        }
    }
    if para >= MIN_PARAGRAPH_TOKENS {
        total += para;
    }
    total
}

/// Counts by rejection reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub input: usize,
    pub non_english: usize,
    pub too_short: usize,
    pub duplicate: usize,
    pub broken_empty: usize,
    pub retained: usize,
}

impl FilterReport {
    pub fn rejected(&self) -> usize {
        self.non_english + self.too_short + self.duplicate + self.broken_empty
    }

    pub fn is_balanced(&self) -> bool {
        self.retained + self.rejected() == self.input
    }
}

/// Keeps English documents with at least `min_words` contiguous words.
/// Documents with empty text are rejected as broken.
pub fn filter_corpus(docs: Vec<WebDocument>, min_words: usize) -> (Vec<WebDocument>, FilterReport) {
    let mut report = FilterReport {
        input: docs.len(),
        ..Default::default()
    };
    let mut kept = Vec::with_capacity(docs.len());
    for doc in docs {
        if doc.text.trim().is_empty() {
            report.broken_empty += 1;
        } else if doc.language != "en" {
            report.non_english += 1;
        } else if doc.word_count < min_words {
            report.too_short += 1;
        } else {
            kept.push(doc);
        }
    }
    report.retained = kept.len();
    (kept, report)
}

fn shingle_set(text: &str) -> Vec<u64> {
    let tokens: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
    let hash = |ws: &[String]| {
        let mut h = DefaultHasher::new();
        ws.hash(&mut h);
        h.finish()
    };
    let mut set: Vec<u64> = if tokens.len() < SHINGLE_WORDS {
        if tokens.is_empty() {
            Vec::new()
        } else {
            vec![hash(&tokens)]
        }
    } else {
        tokens.windows(SHINGLE_WORDS).map(hash).collect()
    };
    set.sort_unstable();
    set.dedup();
    set
}

/// Jaccard similarity of two sorted, deduplicated sets.
fn jaccard(a: &[u64], b: &[u64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    inter as f64 / (a.len() + b.len() - inter) as f64
}

/// Jaccard similarity of the 5-word shingle sets of two texts.
pub fn shingle_similarity(a: &str, b: &str) -> f64 {
    jaccard(&shingle_set(a), &shingle_set(b))
}

/// Removes near-duplicates. Documents are visited by decreasing word count
/// (ties by URL) and one is kept unless it reaches `threshold` Jaccard
/// similarity with an already kept document. Output is sorted by URL.
pub fn dedupe_near_duplicates(docs: Vec<WebDocument>, threshold: f64) -> Vec<WebDocument> {
    let mut order: Vec<(WebDocument, Vec<u64>)> = docs
        .into_par_iter()
        .map(|d| {
            let s = shingle_set(&d.text);
            (d, s)
        })
        .collect();
    order.sort_by(|(a, _), (b, _)| {
        b.word_count
            .cmp(&a.word_count)
            .then_with(|| a.url.cmp(&b.url))
            .then_with(|| a.text.cmp(&b.text))
    });
    let mut kept: Vec<(WebDocument, Vec<u64>)> = Vec::new();
    for (doc, shingles) in order {
        let n = shingles.len() as f64;
        let dup = kept.par_iter().any(|(_, other)| {
            let m = other.len() as f64;
            // |A ∩ B| / |A ∪ B| <= min/max, so skip pairs that cannot reach the threshold.
            n.min(m) >= threshold * n.max(m) && jaccard(&shingles, other) >= threshold
        });
        if !dup {
            kept.push((doc, shingles));
        }
    }
    let mut out: Vec<WebDocument> = kept.into_iter().map(|(d, _)| d).collect();
    out.sort_by(|a, b| a.url.cmp(&b.url));
    out
}

/// Corpus URLs split by membership in a reference set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UrlStrata {
    pub intersection: BTreeSet<String>,
    pub corpus_only: BTreeSet<String>,
}

pub fn intersect_urlsets(corpus: &BTreeSet<String>, reference: &BTreeSet<String>) -> UrlStrata {
    UrlStrata {
        intersection: corpus.intersection(reference).cloned().collect(),
        corpus_only: corpus.difference(reference).cloned().collect(),
    }
}

/// Full webpage pipeline: URL normalization, exact-URL merge, language and
/// length filters, near-duplicate removal.
///
/// Unparseable URLs count as broken. Pages sharing a normalized URL keep the
/// longest text; the others count as duplicates.
pub fn ingest_pages(
    pages: Vec<RawPage>,
    min_words: usize,
    jaccard_threshold: f64,
) -> (Vec<WebDocument>, FilterReport) {
    let input = pages.len();
    let mut broken = 0;
    let mut by_url: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for page in pages {
        match normalize_url(&page.url) {
            NormalizedUrl::Normalized(u) => by_url.entry(u).or_default().push(page.text),
            NormalizedUrl::Unnormalizable(_) => broken += 1,
        }
    }
    let mut url_dups = 0;
    let candidates: Vec<(String, String)> = by_url
        .into_iter()
        .map(|(url, mut texts)| {
            url_dups += texts.len() - 1;
            texts.sort_by(|a, b| {
                contiguous_word_count(b)
                    .cmp(&contiguous_word_count(a))
                    .then_with(|| a.cmp(b))
            });
            (url, texts.swap_remove(0))
        })
        .collect();
    let docs: Vec<WebDocument> = candidates
        .into_par_iter()
        .map(|(url, text)| WebDocument::new(url, text))
        .collect();
    let (filtered, mut report) = filter_corpus(docs, min_words);
    let before = filtered.len();
    let deduped = dedupe_near_duplicates(filtered, jaccard_threshold);
    report.input = input;
    report.broken_empty += broken;
    report.duplicate = url_dups + (before - deduped.len());
    report.retained = deduped.len();
    (deduped, report)
}
