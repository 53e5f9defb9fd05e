//! Text cleaning, tokenization, vocabulary construction and TF-IDF features.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MIN_DF: usize = 2;
pub const MIN_TOKEN_CHARS: usize = 2;
pub const IDF_FORMULA: &str = "smooth_ln_plus1";

/// English stop-words bundled with every fitted model.
pub const STOPWORDS: &[&str] = &[
    "about",
    "above",
    "after",
    "again",
    "against",
    "all",
    "also",
    "am",
    "an",
    "and",
    "any",
    "are",
    "as",
    "at",
    "be",
    "because",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "can",
    "could",
    "did",
    "do",
    "does",
    "doing",
    "down",
    "during",
    "each",
    "even",
    "ever",
    "few",
    "for",
    "from",
    "further",
    "get",
    "got",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "here",
    "hers",
    "herself",
    "him",
    "himself",
    "his",
    "how",
    "however",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "itself",
    "just",
    "let",
    "like",
    "may",
    "me",
    "might",
    "more",
    "most",
    "much",
    "must",
    "my",
    "myself",
    "no",
    "nor",
    "not",
    "now",
    "of",
    "off",
    "on",
    "once",
    "one",
    "only",
    "or",
    "other",
    "our",
    "ours",
    "ourselves",
    "out",
    "over",
    "own",
    "said",
    "same",
    "say",
    "says",
    "she",
    "should",
    "since",
    "so",
    "some",
    "still",
    "such",
    "than",
    "that",
    "the",
    "their",
    "theirs",
    "them",
    "themselves",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "through",
    "to",
    "too",
    "under",
    "until",
    "up",
    "upon",
    "us",
    "very",
    "was",
    "we",
    "were",
    "what",
    "when",
    "where",
    "which",
    "while",
    "who",
    "whom",
    "why",
    "will",
    "with",
    "within",
    "without",
    "would",
    "yet",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
];

pub fn default_stopwords() -> BTreeSet<String> {
    STOPWORDS.iter().map(|s| s.to_string()).collect()
}

fn is_kept_char(c: char) -> bool {
    matches!(c, ' '..='~')
        || matches!(c, '\u{00C0}'..='\u{00FF}') && c != '\u{00D7}' && c != '\u{00F7}'
        || matches!(c, '\u{2010}'..='\u{2027}')
}

/// Lowercases, drops characters outside printable Latin and common
/// punctuation (emoji, symbols, control characters) and collapses every
/// whitespace run into a single space.
pub fn clean_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars() {
        if c.is_whitespace() {
            pending_space = true;
        } else if is_kept_char(c) {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        }
    }
    out
}

/// Unigram terms: maximal alphanumeric runs of at least two characters that
/// are not purely numeric.
pub fn tokenize(cleaned: &str) -> Vec<String> {
    cleaned
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= MIN_TOKEN_CHARS && !t.chars().all(|c| c.is_numeric()))
        .map(str::to_string)
        .collect()
}

/// `clean_text` followed by `tokenize`.
pub fn analyze(raw: &str) -> Vec<String> {
    tokenize(&clean_text(raw))
}

/// [`analyze`] over many texts in parallel, preserving order.
pub fn analyze_all<S: AsRef<str> + Sync>(texts: &[S]) -> Vec<Vec<String>> {
    texts.par_iter().map(|t| analyze(t.as_ref())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub term: String,
    pub index: usize,
    pub df: usize,
}

/// Term → dense feature index, with document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, usize>,
    entries: Vec<VocabEntry>,
    n_docs: usize,
    min_df: usize,
    stopwords: BTreeSet<String>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn min_df(&self) -> usize {
        self.min_df
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn term(&self, index: usize) -> &str {
        &self.entries[index].term
    }

    fn from_parts(
        entries: Vec<VocabEntry>,
        n_docs: usize,
        min_df: usize,
        stopwords: BTreeSet<String>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.index != i {
                return Err(Error::Invariant(format!(
                    "vocabulary index {} at position {i}",
                    e.index
                )));
            }
            if e.df == 0 || e.df > n_docs {
                return Err(Error::Invariant(format!(
                    "term {:?} has df {} with N={n_docs}",
                    e.term, e.df
                )));
            }
            index.insert(e.term.clone(), i);
        }
        Ok(Self {
            index,
            entries,
            n_docs,
            min_df,
            stopwords,
        })
    }
}

/// Builds the vocabulary from tokenized documents.
///
/// Stop-words and terms with document frequency below `min_df` are removed;
/// there is no upper document-frequency cut. Indices follow lexicographic
/// term order.
pub fn build_vocabulary<S: AsRef<str>>(
    docs: &[Vec<S>],
    min_df: usize,
    stopwords: &BTreeSet<String>,
) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let uniq: BTreeSet<&str> = doc.iter().map(AsRef::as_ref).collect();
        for t in uniq {
            *df.entry(t).or_default() += 1;
        }
    }
    let entries = df
        .into_iter()
        .filter(|(t, d)| *d >= min_df && !stopwords.contains(*t))
        .enumerate()
        .map(|(index, (t, d))| VocabEntry {
            term: t.to_string(),
            index,
            df: d,
        })
        .collect();
    Vocabulary::from_parts(entries, docs.len(), min_df, stopwords.clone())
}

/// Sparse row with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    pub dim: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    /// Builds from unsorted pairs; duplicate indices are summed.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut m: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            *m.entry(i).or_default() += v;
        }
        let (indices, values) = m.into_iter().filter(|(_, v)| *v != 0.0).unzip();
        Self {
            dim,
            indices,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(p) => self.values[p],
            Err(_) => 0.0,
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            d[i] = v;
        }
        d
    }
}

/// Fitted TF-IDF weighting with l1 row normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    vocab: Vocabulary,
    idf: Vec<f64>,
}

/// `ln((1 + N) / (1 + df)) + 1`
pub fn smooth_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

impl TfIdfModel {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    /// Term counts times idf, l1-normalized. Out-of-vocabulary terms are
    /// ignored; a document with no known term maps to the zero vector.
    pub fn transform<S: AsRef<str>>(&self, doc: &[S]) -> SparseVector {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for t in doc {
            if let Some(i) = self.vocab.get(t.as_ref()) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut v = SparseVector::zeros(self.dim());
        for (i, c) in counts {
            v.indices.push(i);
            v.values.push(c * self.idf[i]);
        }
        let norm = v.l1_norm();
        if norm > 0.0 {
            v.values.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    pub fn transform_all<S: AsRef<str> + Sync>(&self, docs: &[Vec<S>]) -> Vec<SparseVector> {
        docs.par_iter().map(|d| self.transform(d)).collect()
    }

    pub fn to_file(&self) -> TfIdfFile {
        TfIdfFile {
            schema_version: 1,
            idf_formula: IDF_FORMULA.to_string(),
            stopwords: self.vocab.stopwords.iter().cloned().collect(),
            min_df: self.vocab.min_df,
            tokenizer: TokenizerMeta::default(),
            vocab: self.vocab.entries.clone(),
            n_docs: self.vocab.n_docs,
        }
    }

    pub fn from_file(file: TfIdfFile) -> Result<Self> {
        if file.schema_version != 1 {
            return Err(Error::InvalidInput(format!(
                "unsupported tfidf schema_version {}",
                file.schema_version
            )));
        }
        if file.idf_formula != IDF_FORMULA {
            return Err(Error::InvalidInput(format!(
                "unknown idf formula {:?}",
                file.idf_formula
            )));
        }
        let vocab = Vocabulary::from_parts(
            file.vocab,
            file.n_docs,
            file.min_df,
            file.stopwords.into_iter().collect(),
        )?;
        fit_tfidf_on(vocab)
    }
}

/// Fits idf weights for `vocab`. The vocabulary must come from `docs`.
pub fn fit_tfidf<S: AsRef<str>>(docs: &[Vec<S>], vocab: Vocabulary) -> Result<TfIdfModel> {
    if docs.len() != vocab.n_docs {
        return Err(Error::Invariant(format!(
            "vocabulary built on {} documents, fitting on {}",
            vocab.n_docs,
            docs.len()
        )));
    }
    fit_tfidf_on(vocab)
}

fn fit_tfidf_on(vocab: Vocabulary) -> Result<TfIdfModel> {
    let idf = vocab
        .entries
        .iter()
        .map(|e| {
            if e.df == 0 {
                Err(Error::Invariant(format!("term {:?} has df 0", e.term)))
            } else {
                Ok(smooth_idf(vocab.n_docs, e.df))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TfIdfModel { vocab, idf })
}

/// Convenience: vocabulary and idf fitted in one call.
pub fn fit_corpus<S: AsRef<str>>(
    docs: &[Vec<S>],
    min_df: usize,
    stopwords: &BTreeSet<String>,
) -> Result<TfIdfModel> {
    let vocab = build_vocabulary(docs, min_df, stopwords)?;
    fit_tfidf(docs, vocab)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerMeta {
    pub min_token_chars: usize,
    pub drop_numeric: bool,
    pub lowercase: bool,
}

impl Default for TokenizerMeta {
    fn default() -> Self {
        Self {
            min_token_chars: MIN_TOKEN_CHARS,
            drop_numeric: true,
            lowercase: true,
        }
    }
}

/// Serialized TF-IDF state as stored in the model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfFile {
    pub schema_version: u32,
    pub idf_formula: String,
    pub stopwords: Vec<String>,
    pub min_df: usize,
    pub tokenizer: TokenizerMeta,
    pub vocab: Vec<VocabEntry>,
    pub n_docs: usize,
}
