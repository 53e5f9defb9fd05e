//! Text cleaning, tokenization and l1-normalized TF-IDF on a toy corpus.
//!
//! ```text
//! cargo run --example tfidf_features
//! ```

use vaxcred::textprep::{analyze, clean_text, default_stopwords, fit_corpus};

fn main() -> vaxcred::Result<()> {
    let texts = [
        "Vaccines are tested in large trials before approval.",
        "The measles vaccine is safe; trials show rare side effects.",
        "Side effects of the flu vaccine are usually mild.",
        "Measles outbreaks follow falling vaccination rates.",
    ];
    println!(
        "cleaned: {:?}",
        clean_text("Café  «naïve» – 100% SAFE!\u{1F489}")
    );
    let docs: Vec<Vec<String>> = texts.iter().map(|t| analyze(t)).collect();
    let model = fit_corpus(&docs, 2, &default_stopwords())?;
    println!("vocabulary ({} terms):", model.dim());
    for (entry, idf) in model.vocabulary().entries().iter().zip(model.idf()) {
        println!("  {:<10} df={} idf={idf:.4}", entry.term, entry.df);
    }
    for (text, doc) in texts.iter().zip(&docs) {
        let v = model.transform(doc);
        let weights: Vec<String> = v
            .iter()
            .map(|(i, w)| format!("{}={w:.3}", model.vocabulary().term(i)))
            .collect();
        println!("{text}\n  {}", weights.join(" "));
    }
    Ok(())
}
