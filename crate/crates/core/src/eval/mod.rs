//! Cross-validation and the statistics used to appraise classifiers,
//! raters and terms.

mod cv;
mod fisher;
mod kappa;
mod metrics;
mod terms;

pub use self::cv::{
    cross_validate, cross_validate_binary, stratified_kfold, CvReport, CvRow, FoldScores,
    TextConfig, DEFAULT_FOLDS,
};
pub use self::fisher::{fisher_exact, odds_ratio_ci, FisherResult, OddsRatio};
pub use self::kappa::{count_table, fleiss_kappa, two_sided_normal_p, KappaResult, Z_95};
pub use self::metrics::{f1_and_accuracy, mean, std_dev, Confusion};
pub use self::terms::{term_significance, write_terms_csv, TermStat};
