//! Fleiss' kappa with the Fleiss–Nee–Landis large-sample standard error.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const Z_95: f64 = 1.959964;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub kappa: f64,
    pub standard_error: f64,
    pub ci95: (f64, f64),
    pub p_value: f64,
    pub subjects: usize,
    pub raters: usize,
    pub categories: usize,
}

/// Two-sided p-value of a standard normal statistic.
pub fn two_sided_normal_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// `ratings[i][j]` is the number of raters who put subject `i` in category
/// `j`; every row must sum to `raters`.
pub fn fleiss_kappa(ratings: &[Vec<u32>], raters: u32) -> Result<KappaResult> {
    if ratings.len() < 2 {
        return Err(Error::InvalidInput(
            "fleiss kappa needs at least two subjects".into(),
        ));
    }
    if raters < 2 {
        return Err(Error::InvalidInput(
            "fleiss kappa needs at least two raters".into(),
        ));
    }
    let k = ratings[0].len();
    if k < 2 {
        return Err(Error::InvalidInput(
            "fleiss kappa needs at least two categories".into(),
        ));
    }
    for (i, row) in ratings.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} categories, expected {k}",
                row.len()
            )));
        }
        let s: u32 = row.iter().sum();
        if s != raters {
            return Err(Error::InvalidInput(format!(
                "row {i} sums to {s}, expected {raters}"
            )));
        }
    }
    let n_subj = ratings.len() as f64;
    let n = raters as f64;

    let mut p = vec![0.0; k];
    let mut p_bar = 0.0;
    for row in ratings {
        let sq: f64 = row.iter().map(|&c| (c as f64) * (c as f64)).sum();
        p_bar += (sq - n) / (n * (n - 1.0));
        for (j, &c) in row.iter().enumerate() {
            p[j] += c as f64;
        }
    }
    p_bar /= n_subj;
    p.iter_mut().for_each(|v| *v /= n_subj * n);
    let p_e: f64 = p.iter().map(|v| v * v).sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return Err(Error::KappaUndefined);
    }
    let kappa = (p_bar - p_e) / (1.0 - p_e);

    let pq: f64 = p.iter().map(|v| v * (1.0 - v)).sum();
    let pq_qp: f64 = p.iter().map(|v| v * (1.0 - v) * ((1.0 - v) - v)).sum();
    let var = 2.0 / (n_subj * n * (n - 1.0)) * (pq * pq - pq_qp) / (pq * pq);
    let se = var.max(0.0).sqrt();
    Ok(KappaResult {
        kappa,
        standard_error: se,
        ci95: (kappa - Z_95 * se, kappa + Z_95 * se),
        p_value: two_sided_normal_p(kappa / se),
        subjects: ratings.len(),
        raters: raters as usize,
        categories: k,
    })
}

/// Builds the subjects × categories count table from per-rater category
/// indices (one inner vector per subject).
pub fn count_table(assignments: &[Vec<usize>], categories: usize) -> Vec<Vec<u32>> {
    assignments
        .iter()
        .map(|subject| {
            let mut row = vec![0u32; categories];
            for &c in subject {
                row[c] += 1;
            }
            row
        })
        .collect()
}
