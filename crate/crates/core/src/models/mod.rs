//! Per-criterion binary classifiers and hyperparameter search.

mod forest;
mod svm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{cross_validate_binary, FoldScores, TextConfig};
use crate::textprep::SparseVector;

pub use self::forest::{
    bootstrap_rows, gini_impurity, grow_tree, train_random_forest, DecisionTree, ForestModel,
    ForestParams, TreeNode, DEFAULT_MIN_IMPURITY_SPLIT, DEFAULT_N_ESTIMATORS,
};
pub use self::svm::{
    train_linear_svm, train_linear_svm_traced, SvmModel, SvmTrace, DEFAULT_C, MAX_EPOCHS, TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Svm,
    Rf,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Svm, Family::Rf];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Svm => "svm",
            Family::Rf => "rf",
        }
    }

    pub fn default_params(self) -> ModelParams {
        match self {
            Family::Svm => ModelParams::Svm { c: DEFAULT_C },
            Family::Rf => ModelParams::Rf(ForestParams::default()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svm" => Ok(Family::Svm),
            "rf" => Ok(Family::Rf),
            other => Err(Error::InvalidInput(format!(
                "unknown model family {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelParams {
    Svm {
        #[serde(rename = "C")]
        c: f64,
    },
    Rf(ForestParams),
}

impl ModelParams {
    pub fn family(&self) -> Family {
        match self {
            ModelParams::Svm { .. } => Family::Svm,
            ModelParams::Rf(_) => Family::Rf,
        }
    }

    /// Compact `name=value` rendering used in reports.
    pub fn describe(&self) -> String {
        match self {
            ModelParams::Svm { c } => format!("C={c}"),
            ModelParams::Rf(p) => {
                let mut s = format!(
                    "n_estimators={};min_impurity_split={}",
                    p.n_estimators, p.min_impurity_split
                );
                if let Some(m) = p.max_features {
                    s.push_str(&format!(";max_features={m}"));
                }
                s
            }
        }
    }

    fn with(mut self, name: &str, value: f64) -> Result<Self> {
        let count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be a positive integer, got {value}"
                )))
            }
        };
        match (&mut self, name) {
            (ModelParams::Svm { c }, "C" | "c") => *c = value,
            (ModelParams::Rf(p), "n_estimators") => p.n_estimators = count(value)?,
            (ModelParams::Rf(p), "min_impurity_split") => p.min_impurity_split = value,
            (ModelParams::Rf(p), "max_features") => p.max_features = Some(count(value)?),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "parameter {name:?} does not apply to {}",
                    self.family()
                )))
            }
        }
        Ok(self)
    }
}

/// A trained binary classifier of either family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrainedModel {
    Svm(SvmModel),
    Forest(ForestModel),
}

impl TrainedModel {
    pub fn family(&self) -> Family {
        match self {
            TrainedModel::Svm(_) => Family::Svm,
            TrainedModel::Forest(_) => Family::Rf,
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<u8> {
        match self {
            TrainedModel::Svm(m) => m.predict(x),
            TrainedModel::Forest(m) => m.predict(x),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TrainedModel::Svm(m) => m.dim(),
            TrainedModel::Forest(m) => m.dim,
        }
    }
}

pub fn train(
    params: &ModelParams,
    x: &[SparseVector],
    y: &[u8],
    seed: u64,
) -> Result<TrainedModel> {
    match params {
        ModelParams::Svm { c } => train_linear_svm(x, y, *c, seed).map(TrainedModel::Svm),
        ModelParams::Rf(p) => train_random_forest(x, y, p, seed).map(TrainedModel::Forest),
    }
}

/// Named parameter → candidate values. Points are enumerated with the first
/// parameter varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperGrid {
    pub axes: Vec<(String, Vec<f64>)>,
}

impl HyperGrid {
    pub fn new(axes: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(|(_, v)| v.is_empty()) {
            return Err(Error::InvalidInput("hyperparameter grid is empty".into()));
        }
        Ok(Self { axes })
    }

    /// `C ∈ {0.01, 0.1, 1, 10, 100}` or `n_estimators ∈ {10, 50, 100}`.
    pub fn default_for(family: Family) -> Self {
        let axes = match family {
            Family::Svm => vec![("C".to_string(), vec![0.01, 0.1, 1.0, 10.0, 100.0])],
            Family::Rf => vec![("n_estimators".to_string(), vec![10.0, 50.0, 100.0])],
        };
        Self { axes }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Vec<(&str, f64)>> {
        let mut out: Vec<Vec<(&str, f64)>> = vec![Vec::new()];
        for (name, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push((name.as_str(), v));
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn params_for(&self, family: Family) -> Result<Vec<ModelParams>> {
        if self.is_empty() {
            return Err(Error::InvalidInput("hyperparameter grid is empty".into()));
        }
        self.points()
            .into_iter()
            .map(|pt| {
                pt.into_iter()
                    .try_fold(family.default_params(), |p, (name, v)| p.with(name, v))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub params: ModelParams,
    pub f1_mean: f64,
    pub f1_std: f64,
    pub acc_mean: f64,
    pub acc_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub rows: Vec<GridRow>,
    pub best: usize,
}

impl GridResult {
    pub fn best_params(&self) -> &ModelParams {
        &self.rows[self.best].params
    }
}

/// Index of the best row: highest mean F1, then highest mean accuracy, then
/// earliest.
pub fn select_best(rows: &[(f64, f64)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &(f1, acc)) in rows.iter().enumerate() {
        match best {
            Some(b) if f1 < rows[b].0 || (f1 == rows[b].0 && acc <= rows[b].1) => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Cross-validates every grid point for one binary target.
pub fn grid_search<S: AsRef<str> + Sync>(
    docs: &[Vec<S>],
    y: &[u8],
    family: Family,
    grid: &HyperGrid,
    text: &TextConfig,
    folds: usize,
    seed: u64,
) -> Result<GridResult> {
    let rows = grid
        .params_for(family)?
        .into_iter()
        .map(|params| {
            let s: FoldScores = cross_validate_binary(docs, y, &params, text, folds, seed)?;
            Ok(GridRow {
                params,
                f1_mean: s.f1_mean(),
                f1_std: s.f1_std(),
                acc_mean: s.acc_mean(),
                acc_std: s.acc_std(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r.f1_mean, r.acc_mean)).collect();
    let best = select_best(&keys).expect("grid has at least one point");
    Ok(GridResult { rows, best })
}
