use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::fisher::{fisher_exact, odds_ratio_ci};
use crate::error::{Error, Result};
use crate::textprep::Vocabulary;

/// Presence of one term in low-credibility versus other documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermStat {
    pub term: String,
    /// Low-credibility documents containing the term.
    pub a: u64,
    /// Low-credibility documents without the term.
    pub b: u64,
    /// Other documents containing the term.
    pub c: u64,
    /// Other documents without the term.
    pub d: u64,
    pub odds_ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
}

fn presence<S: AsRef<str>>(docs: &[Vec<S>], vocab: &Vocabulary) -> Vec<u64> {
    let mut counts = vec![0u64; vocab.len()];
    for doc in docs {
        let seen: HashSet<usize> = doc.iter().filter_map(|t| vocab.get(t.as_ref())).collect();
        for i in seen {
            counts[i] += 1;
        }
    }
    counts
}

/// One row per vocabulary term, ranked by p-value ascending, then by
/// |ln OR| descending, then by term.
pub fn term_significance<S: AsRef<str>>(
    docs_low: &[Vec<S>],
    docs_other: &[Vec<S>],
    vocab: &Vocabulary,
) -> Result<Vec<TermStat>> {
    if docs_low.is_empty() || docs_other.is_empty() {
        return Err(Error::InvalidInput(
            "term significance needs both low-credibility and other documents".into(),
        ));
    }
    let (n_low, n_other) = (docs_low.len() as u64, docs_other.len() as u64);
    let low = presence(docs_low, vocab);
    let other = presence(docs_other, vocab);
    let mut rows: Vec<TermStat> = vocab
        .entries()
        .iter()
        .map(|e| {
            let (a, c) = (low[e.index], other[e.index]);
            let (b, d) = (n_low - a, n_other - c);
            let or = odds_ratio_ci(a, b, c, d);
            TermStat {
                term: e.term.clone(),
                a,
                b,
                c,
                d,
                odds_ratio: or.odds_ratio,
                ci_low: or.ci_low,
                ci_high: or.ci_high,
                p_value: fisher_exact(a, b, c, d).p_value,
            }
        })
        .collect();
    rows.sort_by(|x, y| {
        x.p_value
            .total_cmp(&y.p_value)
            .then_with(|| y.odds_ratio.ln().abs().total_cmp(&x.odds_ratio.ln().abs()))
            .then_with(|| x.term.cmp(&y.term))
    });
    Ok(rows)
}

pub fn write_terms_csv<W: std::io::Write>(rows: &[TermStat], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}
