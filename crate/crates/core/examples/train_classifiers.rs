//! Trains the linear SVM and the random forest on one criterion of a
//! synthetic marker corpus and compares them on held-out pages.
//!
//! ```text
//! cargo run --release --example train_classifiers
//! ```

use vaxcred::eval::f1_and_accuracy;
use vaxcred::models::{train_linear_svm, train_random_forest, ForestParams, DEFAULT_C};
use vaxcred::synth::{marker_corpus, MarkerConfig};
use vaxcred::textprep::{analyze_all, default_stopwords, fit_corpus};

fn main() -> vaxcred::Result<()> {
    let (texts, labels) = marker_corpus(400, 80, &MarkerConfig::default(), 3);
    let docs = analyze_all(&texts);
    let (train_docs, test_docs) = docs.split_at(300);
    let y: Vec<u8> = labels.iter().map(|l| l.get(4)).collect();
    let (y_train, y_test) = y.split_at(300);

    let tfidf = fit_corpus(train_docs, 2, &default_stopwords())?;
    let x_train = tfidf.transform_all(train_docs);
    let x_test = tfidf.transform_all(test_docs);

    let svm = train_linear_svm(&x_train, y_train, DEFAULT_C, 1)?;
    let pred = x_test
        .iter()
        .map(|x| svm.predict(x))
        .collect::<vaxcred::Result<Vec<_>>>()?;
    let (f1, acc) = f1_and_accuracy(y_test, &pred)?;
    println!(
        "svm: {} epochs, converged={}, f1={f1:.3} acc={acc:.3}",
        svm.epochs, svm.converged
    );

    let mut heaviest: Vec<(usize, f64)> = svm.weights.iter().copied().enumerate().collect();
    heaviest.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for (i, w) in heaviest.iter().take(4) {
        println!("  {:<12} {w:+.2}", tfidf.vocabulary().term(*i));
    }

    let forest = train_random_forest(&x_train, y_train, &ForestParams::default(), 1)?;
    let pred = x_test
        .iter()
        .map(|x| forest.predict(x))
        .collect::<vaxcred::Result<Vec<_>>>()?;
    let (f1, acc) = f1_and_accuracy(y_test, &pred)?;
    let depth = forest.trees.iter().map(|t| t.depth()).max().unwrap_or(0);
    println!(
        "forest: {} trees, max depth {depth}, f1={f1:.3} acc={acc:.3}",
        forest.trees.len()
    );
    Ok(())
}
