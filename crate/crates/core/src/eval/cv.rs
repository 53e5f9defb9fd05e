//! Stratified k-fold cross-validation over raw token streams.
//!
//! The vocabulary and TF-IDF weights are refitted on the training part of
//! every fold, so held-out documents never influence feature construction.

use std::collections::BTreeSet;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{f1_and_accuracy, mean, std_dev};
use crate::credibility::{CriterionLabels, N_CRITERIA};
use crate::error::{Error, Result};
use crate::models::{self, Family, ModelParams};
use crate::rng::SplitMix64;
use crate::textprep::{self, default_stopwords, DEFAULT_MIN_DF};

pub const DEFAULT_FOLDS: usize = 10;

/// Vocabulary settings applied inside every fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextConfig {
    pub min_df: usize,
    pub stopwords: BTreeSet<String>,
}

impl Default for TextConfig {
    fn default() -> Self {
        Self {
            min_df: DEFAULT_MIN_DF,
            stopwords: default_stopwords(),
        }
    }
}

/// Partitions `0..n` into `k` folds that preserve class proportions.
///
/// Each class is shuffled and dealt round-robin, continuing from where the
/// previous class stopped, so per-fold class counts differ by at most one.
pub fn stratified_kfold(labels: &[u8], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidInput("need at least two folds".into()));
    }
    if labels.len() < k {
        return Err(Error::InvalidInput(format!(
            "{} samples cannot fill {k} folds",
            labels.len()
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut folds = vec![Vec::new(); k];
    let mut pos = 0;
    for class in 0..=1u8 {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < k {
            return Err(Error::Stratification {
                class,
                count: idx.len(),
                k,
            });
        }
        rng.shuffle(&mut idx);
        for i in idx {
            folds[pos % k].push(i);
            pos += 1;
        }
    }
    if pos != labels.len() {
        return Err(Error::InvalidInput("labels must be 0 or 1".into()));
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Per-fold metrics, in fold order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FoldScores {
    pub f1: Vec<f64>,
    pub accuracy: Vec<f64>,
}

impl FoldScores {
    pub fn f1_mean(&self) -> f64 {
        mean(&self.f1)
    }
    pub fn f1_std(&self) -> f64 {
        std_dev(&self.f1)
    }
    pub fn acc_mean(&self) -> f64 {
        mean(&self.accuracy)
    }
    pub fn acc_std(&self) -> f64 {
        std_dev(&self.accuracy)
    }
}

/// Out-of-fold predictions and scores for one binary target.
pub fn cross_validate_binary<S: AsRef<str> + Sync>(
    docs: &[Vec<S>],
    y: &[u8],
    params: &ModelParams,
    text: &TextConfig,
    k: usize,
    seed: u64,
) -> Result<FoldScores> {
    if docs.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: docs.len(),
            got: y.len(),
        });
    }
    let folds = stratified_kfold(y, k, seed)?;
    let results = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let mut in_test = vec![false; docs.len()];
            test.iter().for_each(|&i| in_test[i] = true);
            let train_idx: Vec<usize> = (0..docs.len()).filter(|&i| !in_test[i]).collect();
            let train_docs: Vec<&[S]> = train_idx.iter().map(|&i| docs[i].as_slice()).collect();
            let train_docs: Vec<Vec<&str>> = train_docs
                .iter()
                .map(|d| d.iter().map(AsRef::as_ref).collect())
                .collect();
            let tfidf = textprep::fit_corpus(&train_docs, text.min_df, &text.stopwords)?;
            let x_train = tfidf.transform_all(&train_docs);
            let y_train: Vec<u8> = train_idx.iter().map(|&i| y[i]).collect();
            let model = models::train(
                params,
                &x_train,
                &y_train,
                SplitMix64::stream(seed, f as u64).next_u64(),
            )?;
            let mut y_pred = Vec::with_capacity(test.len());
            let mut y_true = Vec::with_capacity(test.len());
            for &i in test {
                y_pred.push(model.predict(&tfidf.transform(&docs[i]))?);
                y_true.push(y[i]);
            }
            f1_and_accuracy(&y_true, &y_pred)
        })
        .collect::<Result<Vec<_>>>()?;
    let (f1, accuracy) = results.into_iter().unzip();
    Ok(FoldScores { f1, accuracy })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub criterion: usize,
    pub family: Family,
    pub f1_mean: f64,
    pub f1_std: f64,
    pub acc_mean: f64,
    pub acc_std: f64,
}

/// Mean ± population standard deviation over folds, one row per
/// (criterion, family).
#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub folds: usize,
    pub rows: Vec<CvRow>,
}

impl CvReport {
    pub fn get(&self, criterion: usize, family: Family) -> Option<&CvRow> {
        self.rows
            .iter()
            .find(|r| r.criterion == criterion && r.family == family)
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(r: R, folds: usize) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let rows = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<CvRow>, _>>()?;
        Ok(Self { folds, rows })
    }
}

/// Runs `k`-fold CV for every criterion and every parameter set.
pub fn cross_validate<S: AsRef<str> + Sync>(
    docs: &[Vec<S>],
    labels: &[CriterionLabels],
    params: &[ModelParams],
    text: &TextConfig,
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    if docs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: docs.len(),
            got: labels.len(),
        });
    }
    let mut rows = Vec::new();
    for criterion in 1..=N_CRITERIA {
        let y: Vec<u8> = labels.iter().map(|l| l.get(criterion)).collect();
        for p in params {
            let s = cross_validate_binary(docs, &y, p, text, k, seed)?;
            rows.push(CvRow {
                criterion,
                family: p.family(),
                f1_mean: s.f1_mean(),
                f1_std: s.f1_std(),
                acc_mean: s.acc_mean(),
                acc_std: s.acc_std(),
            });
        }
    }
    Ok(CvReport { folds: k, rows })
}
