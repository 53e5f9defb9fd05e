//! Grid search over the SVM regularization constant and the forest size for
//! one criterion, scored by 10-fold cross-validation.
//!
//! ```text
//! cargo run --release --example grid_search
//! ```

use vaxcred::eval::TextConfig;
use vaxcred::models::{grid_search, Family, HyperGrid};
use vaxcred::synth::{marker_corpus, MarkerConfig};
use vaxcred::textprep::analyze_all;

fn main() -> vaxcred::Result<()> {
    let (texts, labels) = marker_corpus(200, 60, &MarkerConfig::default(), 5);
    let docs = analyze_all(&texts);
    let y: Vec<u8> = labels.iter().map(|l| l.get(2)).collect();
    let grids = [
        (
            Family::Svm,
            HyperGrid::new(vec![("C".into(), vec![0.1, 1.0, 10.0, 100.0])])?,
        ),
        (
            Family::Rf,
            HyperGrid::new(vec![("n_estimators".into(), vec![5.0, 10.0, 25.0])])?,
        ),
    ];
    for (family, grid) in grids {
        let result = grid_search(&docs, &y, family, &grid, &TextConfig::default(), 10, 42)?;
        for (i, row) in result.rows.iter().enumerate() {
            let mark = if i == result.best { "*" } else { " " };
            println!(
                "{mark} {family} {:<40} f1 {:.3} ± {:.3}  acc {:.3} ± {:.3}",
                row.params.describe(),
                row.f1_mean,
                row.f1_std,
                row.acc_mean,
                row.acc_std
            );
        }
    }
    Ok(())
}
