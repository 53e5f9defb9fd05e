//! Soft-margin linear SVM trained by dual coordinate descent.
//!
//! The hinge-loss problem `min ½‖w‖² + C Σ max(0, 1 − yᵢ(w·xᵢ + b))` is solved
//! in the dual, one coordinate at a time, with the bias folded in as an extra
//! constant feature of value 1 (so `b` is regularized together with `w`, as
//! in liblinear). Coordinates are visited in a fresh seeded permutation each
//! epoch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::textprep::SparseVector;

pub const DEFAULT_C: f64 = 100.0;
pub const TOLERANCE: f64 = 1e-4;
pub const MAX_EPOCHS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub epochs: usize,
    pub converged: bool,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &SparseVector) -> Result<f64> {
        if x.dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim,
            });
        }
        Ok(x.dot_dense(&self.weights) + self.bias)
    }

    /// Class 1 when `w·x + b >= 0`.
    pub fn predict(&self, x: &SparseVector) -> Result<u8> {
        Ok(u8::from(self.decision(x)? >= 0.0))
    }
}

/// Per-epoch objective values recorded during training.
#[derive(Debug, Clone, Default)]
pub struct SvmTrace {
    /// Dual variables after the final epoch.
    pub alpha: Vec<f64>,
    /// Primal objective `½(‖w‖² + b²) + C Σ hinge` after each epoch.
    pub primal: Vec<f64>,
    /// Dual objective `Σα − ½‖Σ αᵢ yᵢ x̂ᵢ‖²` after each epoch.
    pub dual: Vec<f64>,
    /// Largest projected-gradient magnitude seen in each epoch.
    pub violation: Vec<f64>,
}

pub(crate) fn check_training_set(x: &[SparseVector], y: &[u8]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two training rows".into(),
        ));
    }
    if let Some(bad) = y.iter().find(|&&v| v > 1) {
        return Err(Error::InvalidInput(format!("label {bad} is not 0 or 1")));
    }
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::SingleClass);
    }
    let dim = x[0].dim;
    if let Some(bad) = x.iter().find(|v| v.dim != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.dim,
        });
    }
    Ok(dim)
}

pub fn train_linear_svm(x: &[SparseVector], y: &[u8], c: f64, seed: u64) -> Result<SvmModel> {
    train_linear_svm_traced(x, y, c, seed).map(|(m, _)| m)
}

pub fn train_linear_svm_traced(
    x: &[SparseVector],
    y: &[u8],
    c: f64,
    seed: u64,
) -> Result<(SvmModel, SvmTrace)> {
    let dim = check_training_set(x, y)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("C must be positive, got {c}")));
    }
    let n = x.len();
    let sign: Vec<f64> = y.iter().map(|&v| if v == 1 { 1.0 } else { -1.0 }).collect();
    let diag: Vec<f64> = x.iter().map(|v| v.squared_norm() + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    let mut trace = SvmTrace::default();
    let mut converged = false;
    let mut epochs = 0;

    while epochs < MAX_EPOCHS {
        epochs += 1;
        rng.shuffle(&mut order);
        let mut max_violation: f64 = 0.0;
        for &i in &order {
            let g = sign[i] * (x[i].dot_dense(&w) + b) - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / diag[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * sign[i];
                for (j, v) in x[i].iter() {
                    w[j] += step * v;
                }
                b += step;
            }
        }
        trace.primal.push(primal_objective(x, &sign, &w, b, c));
        trace
            .dual
            .push(alpha.iter().sum::<f64>() - 0.5 * (dot(&w, &w) + b * b));
        trace.violation.push(max_violation);
        if max_violation < TOLERANCE {
            converged = true;
            break;
        }
    }
    trace.alpha = alpha;
    let model = SvmModel {
        weights: w,
        bias: b,
        c,
        epochs,
        converged,
    };
    Ok((model, trace))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primal_objective(x: &[SparseVector], sign: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(sign)
        .map(|(xi, s)| (1.0 - s * (xi.dot_dense(w) + b)).max(0.0))
        .sum();
    0.5 * (dot(w, w) + b * b) + c * hinge
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(dense: &[f64]) -> SparseVector {
        SparseVector::from_pairs(dense.len(), dense.iter().copied().enumerate())
    }

    #[test]
    fn two_point_hard_margin() {
        // min w1² + w2² + b² s.t. w1 + b >= 1, -(w2 + b) >= 1  ⇒  w = (1, -1), b = 0
        let x = vec![sv(&[1.0, 0.0]), sv(&[0.0, 1.0])];
        let m = train_linear_svm(&x, &[1, 0], 100.0, 0).unwrap();
        assert!(m.converged);
        assert!((m.weights[0] - 1.0).abs() < 1e-3);
        assert!((m.weights[1] + 1.0).abs() < 1e-3);
        assert!(m.bias.abs() < 1e-3);
    }

    #[test]
    fn single_class_rejected() {
        let x = vec![sv(&[1.0]), sv(&[2.0])];
        assert!(matches!(
            train_linear_svm(&x, &[1, 1], 1.0, 0),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let x = vec![sv(&[1.0]), sv(&[2.0, 0.0])];
        assert!(matches!(
            train_linear_svm(&x, &[1, 0], 1.0, 0),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = train_linear_svm(&[sv(&[1.0]), sv(&[-1.0])], &[1, 0], 1.0, 0).unwrap();
        assert!(m.predict(&sv(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn zero_margin_maps_to_positive() {
        let m = SvmModel {
            weights: vec![1.0, -1.0],
            bias: 0.0,
            c: 1.0,
            epochs: 0,
            converged: true,
        };
        assert_eq!(m.predict(&sv(&[1.0, 0.0])).unwrap(), 1);
        assert_eq!(m.predict(&sv(&[0.0, 0.0])).unwrap(), 1);
        assert_eq!(m.predict(&sv(&[0.0, 1.0])).unwrap(), 0);
    }

    #[test]
    fn deterministic_for_seed() {
        let mut rng = SplitMix64::new(5);
        let x: Vec<SparseVector> = (0..40)
            .map(|_| sv(&[rng.next_f64() - 0.5, rng.next_f64() - 0.5, rng.next_f64()]))
            .collect();
        let y: Vec<u8> = x
            .iter()
            .map(|v| u8::from(v.get(0) + v.get(1) > 0.0))
            .collect();
        let a = train_linear_svm(&x, &y, 10.0, 9).unwrap();
        let b = train_linear_svm(&x, &y, 10.0, 9).unwrap();
        assert_eq!(a, b);
    }
}
