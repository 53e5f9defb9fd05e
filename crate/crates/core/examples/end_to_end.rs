//! The full batch pipeline through the command-line front end: ingest,
//! cross-validate, train, score, terms, exposure and graph, written to one
//! output directory.
//!
//! ```text
//! cargo run --release --example end_to_end [-- <out-dir>]
//! ```

use std::path::PathBuf;

fn main() {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("vaxcred-end-to-end"));
    let f = |name: &str| fixtures.join(name).display().to_string();
    let o = |name: &str| out.join(name).display().to_string();

    let steps: Vec<Vec<String>> = vec![
        vec![
            "ingest".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--reference".into(),
            f("reference_urls.txt"),
            "--out-dir".into(),
            o(""),
        ],
        vec![
            "cv".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--labels".into(),
            f("labels.csv"),
            "--out".into(),
            o("cv_report.csv"),
        ],
        vec![
            "train".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--labels".into(),
            f("labels.csv"),
            "--out".into(),
            o("model.json"),
        ],
        vec![
            "score".into(),
            "--model".into(),
            o("model.json"),
            "--docs".into(),
            f("webpages.jsonl"),
            "--out".into(),
            o("scores.csv"),
        ],
        vec![
            "evaluate".into(),
            "--model".into(),
            o("model.json"),
            "--docs".into(),
            f("webpages.jsonl"),
            "--labels".into(),
            f("labels.csv"),
            "--out".into(),
            o("evaluation.json"),
            "--distribution".into(),
            o("label_distribution.csv"),
        ],
        vec![
            "kappa".into(),
            "--ratings".into(),
            f("ratings.csv"),
            "--out".into(),
            o("kappa.json"),
        ],
        vec![
            "terms".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--scores".into(),
            o("scores.csv"),
            "--out".into(),
            o("terms.csv"),
        ],
        vec![
            "exposure".into(),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--scores".into(),
            o("scores.csv"),
            "--out".into(),
            o("exposure.csv"),
            "--report".into(),
            o("bucket_report.json"),
        ],
        vec![
            "graph".into(),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--scores".into(),
            o("scores.csv"),
            "--followers".into(),
            f("followers.csv"),
            "--out".into(),
            o("graph.graphml"),
        ],
    ];
    for args in steps {
        let code = vaxcred::cli::dispatch(
            std::iter::once("vaxcred".to_string()).chain(args.iter().cloned()),
        );
        println!("{:<9} exit {code}", args[0]);
        if code != 0 {
            std::process::exit(code);
        }
    }
    println!("outputs in {}", out.display());
}
