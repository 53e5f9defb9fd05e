//! The `vaxcred` command line.
//!
//! Every subcommand reads its inputs once, writes its outputs, and then
//! writes a run manifest recording the effective configuration together
//! with SHA-256 digests of every input and output file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::credibility::{
    label_distribution, read_labels_csv, read_scores_csv, score_from_labels, train_pipeline,
    write_label_distribution_csv, write_scores_csv, Bucket, CredibilityResult, CriterionLabels,
    PipelineModel, N_CRITERIA,
};
use crate::error::{Error, Result};
use crate::eval::{
    count_table, cross_validate, fleiss_kappa, term_significance, write_terms_csv, TextConfig,
};
use crate::exposure::{
    aggregate_shares, bucket_share_report, build_follower_graph, build_user_profiles,
    classify_nodes, export_graph, read_followers_csv, write_exposure_csv, GraphFormat,
};
use crate::ingest::{
    ingest_pages, intersect_urlsets, normalize_or_raw, parse_tweets, parse_webpages, read_url_set,
    RawPage, WebDocument,
};
use crate::models::{grid_search, Family, ForestParams, HyperGrid, ModelParams};
use crate::textprep::{analyze_all, build_vocabulary, default_stopwords};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "vaxcred",
    version,
    about = "Credibility appraisal of shared vaccine webpages"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Where to write the run manifest (default: `<subcommand>.manifest.json`
    /// beside the main output).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Filter a webpage corpus and summarize tweets and reference overlap.
    Ingest(IngestArgs),
    /// Train the seven-criterion ensemble and write model.json.
    Train(TrainArgs),
    /// Cross-validate both classifier families per criterion.
    Cv(CvArgs),
    /// Grid search one classifier family.
    Grid(GridArgs),
    /// Score webpages with a trained model.
    Score(ScoreArgs),
    /// Compare predicted and gold credibility buckets.
    Evaluate(EvaluateArgs),
    /// Fleiss' kappa over a multi-rater label file.
    Kappa(KappaArgs),
    /// Terms over-represented in low-credibility pages.
    Terms(TermsArgs),
    /// Share counts and potential exposure per scored URL.
    Exposure(ExposureArgs),
    /// Follower network of users sharing scored links.
    Graph(GraphArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CorpusArgs {
    /// webpages.jsonl
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long, default_value_t = crate::ingest::DEFAULT_MIN_WORDS)]
    pub min_words: usize,
    #[arg(long, default_value_t = crate::ingest::DEFAULT_JACCARD)]
    pub jaccard: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    /// SVM regularization constant.
    #[arg(long = "C", default_value_t = crate::models::DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = crate::models::DEFAULT_N_ESTIMATORS)]
    pub n_estimators: usize,
    #[arg(long, default_value_t = crate::models::DEFAULT_MIN_IMPURITY_SPLIT)]
    pub min_impurity_split: f64,
    #[arg(long, default_value_t = crate::textprep::DEFAULT_MIN_DF)]
    pub min_df: usize,
    /// Cross-validation folds.
    #[arg(long, default_value_t = crate::eval::DEFAULT_FOLDS)]
    pub k: usize,
}

impl ModelArgs {
    fn svm(&self) -> ModelParams {
        ModelParams::Svm { c: self.c }
    }

    fn rf(&self) -> ModelParams {
        ModelParams::Rf(ForestParams {
            n_estimators: self.n_estimators,
            min_impurity_split: self.min_impurity_split,
            max_features: None,
        })
    }

    fn text(&self) -> TextConfig {
        TextConfig {
            min_df: self.min_df,
            ..TextConfig::default()
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct IngestArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// tweets.jsonl
    #[arg(long)]
    pub tweets: Option<PathBuf>,
    /// reference_urls.txt
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Directory for filter_report.json and retained.jsonl.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// labels.csv
    #[arg(long)]
    pub labels: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Also write the cross-validation table used for family selection.
    #[arg(long)]
    pub cv_report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CvArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub labels: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = "cv_report.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub family: Family,
    /// Restrict to one criterion (1–7); all by default.
    #[arg(long)]
    pub criterion: Option<usize>,
    /// Axis as `name=v1,v2,...`; repeatable. Defaults to the family's grid.
    #[arg(long = "grid")]
    pub axes: Vec<String>,
    #[arg(long, default_value_t = crate::textprep::DEFAULT_MIN_DF)]
    pub min_df: usize,
    #[arg(long, default_value_t = crate::eval::DEFAULT_FOLDS)]
    pub k: usize,
    #[arg(long, default_value = "grid.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, default_value = "scores.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, default_value = "evaluation.json")]
    pub out: PathBuf,
    /// Defaults to label_distribution.csv beside `--out`.
    #[arg(long)]
    pub distribution: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct KappaArgs {
    /// ratings.csv with columns url,rater,c1..c7.
    #[arg(long)]
    pub ratings: PathBuf,
    /// `bucket` (low/medium/high), `low` (low vs other) or `c1`..`c7`.
    #[arg(long, default_value = "bucket")]
    pub scheme: String,
    #[arg(long, default_value = "kappa.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct TermsArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value_t = crate::textprep::DEFAULT_MIN_DF)]
    pub min_df: usize,
    #[arg(long, default_value = "terms.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ExposureArgs {
    #[arg(long)]
    pub tweets: PathBuf,
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long, default_value = "exposure.csv")]
    pub out: PathBuf,
    /// Defaults to bucket_report.json beside `--out`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    #[arg(long)]
    pub tweets: PathBuf,
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long)]
    pub followers: PathBuf,
    #[arg(long, default_value_t = crate::exposure::DEFAULT_MIN_LINKS)]
    pub min_links: usize,
    /// `graphml` or `dot`.
    #[arg(long, default_value = "graphml")]
    pub format: String,
    #[arg(long, default_value = "graph.graphml")]
    pub out: PathBuf,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Train(_) => "train",
            Command::Cv(_) => "cv",
            Command::Grid(_) => "grid",
            Command::Score(_) => "score",
            Command::Evaluate(_) => "evaluate",
            Command::Kappa(_) => "kappa",
            Command::Terms(_) => "terms",
            Command::Exposure(_) => "exposure",
            Command::Graph(_) => "graph",
        }
    }

    fn primary_output(&self) -> PathBuf {
        match self {
            Command::Ingest(a) => a.out_dir.join("filter_report.json"),
            Command::Train(a) => a.out.clone(),
            Command::Cv(a) => a.out.clone(),
            Command::Grid(a) => a.out.clone(),
            Command::Score(a) => a.out.clone(),
            Command::Evaluate(a) => a.out.clone(),
            Command::Kappa(a) => a.out.clone(),
            Command::Terms(a) => a.out.clone(),
            Command::Exposure(a) => a.out.clone(),
            Command::Graph(a) => a.out.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

fn digest(path: &Path, bytes: &[u8]) -> FileDigest {
    FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

/// Records every file a run touches.
#[derive(Default)]
struct Run {
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    summary: BTreeMap<String, Value>,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(digest(path, &bytes));
        Ok(bytes)
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, bytes)?;
        self.outputs.push(digest(path, bytes));
        Ok(())
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    fn docs(&mut self, corpus: &CorpusArgs) -> Result<Vec<WebDocument>> {
        let bytes = self.read(&corpus.docs)?;
        let parsed = parse_webpages(bytes.as_slice())?;
        let (docs, report) = ingest_pages(parsed.pages, corpus.min_words, corpus.jaccard);
        self.note("pages_skipped_lines", parsed.skipped);
        self.note("filter", report);
        Ok(docs)
    }

    fn scores(&mut self, path: &Path) -> Result<BTreeMap<String, CredibilityResult>> {
        let bytes = self.read(path)?;
        read_scores_csv(bytes.as_slice())
    }

    fn tweets(&mut self, path: &Path) -> Result<Vec<crate::ingest::TweetRecord>> {
        let bytes = self.read(path)?;
        let parsed = parse_tweets(bytes.as_slice())?;
        self.note("tweets", parsed.records.len());
        self.note("tweets_skipped", parsed.skipped);
        Ok(parsed.records)
    }
}

/// Joins gold labels to retained documents by normalized URL, in label-file
/// order.
fn labelled(
    run: &mut Run,
    docs: &[WebDocument],
    labels_path: &Path,
) -> Result<(Vec<String>, Vec<String>, Vec<CriterionLabels>)> {
    let bytes = run.read(labels_path)?;
    let labels = read_labels_csv(bytes.as_slice())?;
    let by_url: BTreeMap<&str, &WebDocument> = docs.iter().map(|d| (d.url.as_str(), d)).collect();
    let (mut urls, mut texts, mut gold) = (Vec::new(), Vec::new(), Vec::new());
    let mut missing = 0usize;
    for (url, l) in labels {
        match by_url.get(url.as_str()) {
            Some(d) => {
                urls.push(url);
                texts.push(d.text.clone());
                gold.push(l);
            }
            None => missing += 1,
        }
    }
    run.note("labelled_documents", texts.len());
    run.note("labels_without_document", missing);
    if texts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok((urls, texts, gold))
}

fn read_model(run: &mut Run, path: &Path) -> Result<PipelineModel> {
    let bytes = run.read(path)?;
    let s = String::from_utf8(bytes)
        .map_err(|_| Error::InvalidInput(format!("{} is not UTF-8", path.display())))?;
    PipelineModel::from_json(&s)
}

fn beside(out: &Path, name: &str) -> PathBuf {
    out.parent()
        .map(Path::to_path_buf)
        .unwrap_or_default()
        .join(name)
}

fn to_json_bytes(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn parse_axis(axis: &str) -> Result<(String, Vec<f64>)> {
    let (name, values) = axis
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("grid axis `{axis}` is not name=v1,v2")))?;
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad grid value `{v}` in `{axis}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name.trim().to_string(), values))
}

/// Maps one rater's labels to a category index under `scheme`.
fn kappa_category(scheme: &str, labels: CriterionLabels) -> Result<(usize, usize)> {
    let bucket = score_from_labels(labels).bucket;
    match scheme {
        "bucket" => Ok((bucket.index(), 3)),
        "low" => Ok((usize::from(bucket != Bucket::Low), 2)),
        s => {
            let c = s
                .strip_prefix('c')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|c| (1..=N_CRITERIA).contains(c))
                .ok_or_else(|| Error::InvalidInput(format!("unknown kappa scheme `{s}`")))?;
            Ok((labels.get(c) as usize, 2))
        }
    }
}

#[derive(serde::Deserialize)]
struct RatingRow {
    url: String,
    rater: String,
    c1: u8,
    c2: u8,
    c3: u8,
    c4: u8,
    c5: u8,
    c6: u8,
    c7: u8,
}

fn run_command(cmd: &Command, seed: u64, run: &mut Run) -> Result<()> {
    match cmd {
        Command::Ingest(a) => {
            let docs = run.docs(&a.corpus)?;
            let report = run.summary.get("filter").cloned().unwrap_or(Value::Null);
            let mut retained = String::new();
            for d in &docs {
                retained.push_str(&serde_json::to_string(&RawPage {
                    url: d.url.clone(),
                    text: d.text.clone(),
                })?);
                retained.push('\n');
            }
            let mut urls: std::collections::BTreeSet<String> =
                docs.iter().map(|d| d.url.clone()).collect();
            if let Some(t) = &a.tweets {
                let tweets = run.tweets(t)?;
                urls = tweets
                    .iter()
                    .flat_map(|t| t.urls.iter().map(|u| normalize_or_raw(u)))
                    .collect();
                run.note("tweet_urls", urls.len());
            }
            if let Some(r) = &a.reference {
                let bytes = run.read(r)?;
                let reference: std::collections::BTreeSet<String> = read_url_set(bytes.as_slice())?
                    .iter()
                    .map(|u| normalize_or_raw(u))
                    .collect();
                let strata = intersect_urlsets(&urls, &reference);
                run.note("reference_intersection", strata.intersection.len());
                run.note("reference_corpus_only", strata.corpus_only.len());
            }
            run.write(
                &a.out_dir.join("filter_report.json"),
                &to_json_bytes(&report)?,
            )?;
            run.write(&a.out_dir.join("retained.jsonl"), retained.as_bytes())?;
        }
        Command::Train(a) => {
            let docs = run.docs(&a.corpus)?;
            let (_, texts, gold) = labelled(run, &docs, &a.labels)?;
            let out = train_pipeline(
                &texts,
                &gold,
                &a.model.svm(),
                &a.model.rf(),
                &a.model.text(),
                a.model.k,
                seed,
            )?;
            let families: Vec<&str> = out
                .model
                .ensemble
                .families()
                .iter()
                .map(|f| f.as_str())
                .collect();
            run.note("families", families);
            let mut json = out.model.to_json()?;
            json.push('\n');
            run.write(&a.out, json.as_bytes())?;
            if let Some(p) = &a.cv_report {
                let mut buf = Vec::new();
                out.cv.write_csv(&mut buf)?;
                run.write(p, &buf)?;
            }
        }
        Command::Cv(a) => {
            let docs = run.docs(&a.corpus)?;
            let (_, texts, gold) = labelled(run, &docs, &a.labels)?;
            let analyzed = analyze_all(&texts);
            let report = cross_validate(
                &analyzed,
                &gold,
                &[a.model.svm(), a.model.rf()],
                &a.model.text(),
                a.model.k,
                seed,
            )?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            run.write(&a.out, &buf)?;
        }
        Command::Grid(a) => {
            let docs = run.docs(&a.corpus)?;
            let (_, texts, gold) = labelled(run, &docs, &a.labels)?;
            let analyzed = analyze_all(&texts);
            let grid = if a.axes.is_empty() {
                HyperGrid::default_for(a.family)
            } else {
                HyperGrid::new(
                    a.axes
                        .iter()
                        .map(|s| parse_axis(s))
                        .collect::<Result<_>>()?,
                )?
            };
            let criteria: Vec<usize> = match a.criterion {
                Some(c) if (1..=N_CRITERIA).contains(&c) => vec![c],
                Some(c) => return Err(Error::MissingCriterion(c)),
                None => (1..=N_CRITERIA).collect(),
            };
            let text = TextConfig {
                min_df: a.min_df,
                ..TextConfig::default()
            };
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record([
                "criterion",
                "family",
                "params",
                "f1_mean",
                "f1_std",
                "acc_mean",
                "acc_std",
                "best",
            ])?;
            let mut best = BTreeMap::new();
            for c in criteria {
                let y: Vec<u8> = gold.iter().map(|l| l.get(c)).collect();
                let result = grid_search(&analyzed, &y, a.family, &grid, &text, a.k, seed)?;
                for (i, r) in result.rows.iter().enumerate() {
                    wtr.write_record([
                        c.to_string(),
                        a.family.to_string(),
                        r.params.describe(),
                        r.f1_mean.to_string(),
                        r.f1_std.to_string(),
                        r.acc_mean.to_string(),
                        r.acc_std.to_string(),
                        u8::from(i == result.best).to_string(),
                    ])?;
                }
                best.insert(c.to_string(), result.best_params().describe());
            }
            run.note("best", best);
            let buf = wtr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            run.write(&a.out, &buf)?;
        }
        Command::Score(a) => {
            let model = read_model(run, &a.model)?;
            let docs = run.docs(&a.corpus)?;
            let rows = score_documents(&model, &docs)?;
            let mut buf = Vec::new();
            write_scores_csv(&rows, &mut buf)?;
            run.write(&a.out, &buf)?;
        }
        Command::Evaluate(a) => {
            let model = read_model(run, &a.model)?;
            let docs = run.docs(&a.corpus)?;
            let (_, texts, gold) = labelled(run, &docs, &a.labels)?;
            let eval = crate::credibility::evaluate_ensemble(&texts, &gold, &model)?;
            run.write(&a.out, &to_json_bytes(&eval)?)?;
            let mut buf = Vec::new();
            write_label_distribution_csv(&label_distribution(&gold), &mut buf)?;
            let path = a
                .distribution
                .clone()
                .unwrap_or_else(|| beside(&a.out, "label_distribution.csv"));
            run.write(&path, &buf)?;
        }
        Command::Kappa(a) => {
            let bytes = run.read(&a.ratings)?;
            let mut rdr = csv::Reader::from_reader(bytes.as_slice());
            let mut by_url: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
            let mut categories = 2;
            for row in rdr.deserialize::<RatingRow>() {
                let r = row?;
                let labels = CriterionLabels::new([r.c1, r.c2, r.c3, r.c4, r.c5, r.c6, r.c7])?;
                let (cat, k) = kappa_category(&a.scheme, labels)?;
                categories = k;
                let prev = by_url
                    .entry(normalize_or_raw(&r.url))
                    .or_default()
                    .insert(r.rater.clone(), cat);
                if prev.is_some() {
                    return Err(Error::InvalidInput(format!(
                        "rater {} rated {} twice",
                        r.rater, r.url
                    )));
                }
            }
            kappa_category(&a.scheme, CriterionLabels::default())?;
            let assignments: Vec<Vec<usize>> = by_url
                .values()
                .map(|m| m.values().copied().collect())
                .collect();
            let raters = assignments.first().map_or(0, Vec::len);
            if let Some(bad) = assignments.iter().position(|v| v.len() != raters) {
                let url = by_url.keys().nth(bad).cloned().unwrap_or_default();
                return Err(Error::InvalidInput(format!(
                    "{url} has {} ratings, expected {raters}",
                    assignments[bad].len()
                )));
            }
            let table = count_table(&assignments, categories);
            let result = fleiss_kappa(&table, raters as u32)?;
            run.write(&a.out, &to_json_bytes(&result)?)?;
        }
        Command::Terms(a) => {
            let docs = run.docs(&a.corpus)?;
            let scores = run.scores(&a.scores)?;
            let (mut low, mut other) = (Vec::new(), Vec::new());
            for d in &docs {
                if let Some(s) = scores.get(&d.url) {
                    let tokens = crate::textprep::analyze(&d.text);
                    if s.bucket == Bucket::Low {
                        low.push(tokens);
                    } else {
                        other.push(tokens);
                    }
                }
            }
            run.note("low_documents", low.len());
            run.note("other_documents", other.len());
            run.note("fisher_test", "two-sided");
            let all: Vec<Vec<String>> = low.iter().chain(&other).cloned().collect();
            let vocab = build_vocabulary(&all, a.min_df, &default_stopwords())?;
            let stats = term_significance(&low, &other, &vocab)?;
            let mut buf = Vec::new();
            write_terms_csv(&stats, &mut buf)?;
            run.write(&a.out, &buf)?;
        }
        Command::Exposure(a) => {
            let tweets = run.tweets(&a.tweets)?;
            let scores = run.scores(&a.scores)?;
            let shares = aggregate_shares(&tweets, &scores);
            let report = bucket_share_report(&shares);
            let mut buf = Vec::new();
            write_exposure_csv(&shares, &mut buf)?;
            run.write(&a.out, &buf)?;
            let path = a
                .report
                .clone()
                .unwrap_or_else(|| beside(&a.out, "bucket_report.json"));
            run.write(&path, &to_json_bytes(&report)?)?;
        }
        Command::Graph(a) => {
            let format: GraphFormat = a.format.parse()?;
            let tweets = run.tweets(&a.tweets)?;
            let scores = run.scores(&a.scores)?;
            let bytes = run.read(&a.followers)?;
            let edges = read_followers_csv(bytes.as_slice())?;
            let profiles = build_user_profiles(&tweets, &scores);
            let graph = classify_nodes(build_follower_graph(&edges, &profiles, a.min_links));
            run.note("nodes", graph.nodes.len());
            run.note("edges", graph.edges.len());
            run.note("dropped_unknown", graph.dropped_unknown);
            run.note("dropped_filtered", graph.dropped_filtered);
            run.write(&a.out, export_graph(&graph, format).as_bytes())?;
        }
    }
    Ok(())
}

fn score_documents(
    model: &PipelineModel,
    docs: &[WebDocument],
) -> Result<Vec<(String, CredibilityResult)>> {
    use rayon::prelude::*;
    docs.par_iter()
        .map(|d| model.predict(&d.text).map(|r| (d.url.clone(), r)))
        .collect()
}

fn execute(cli: &Cli) -> Result<()> {
    let config = serde_json::to_value(cli)?;
    eprintln!("vaxcred config: {config}");
    let mut run = Run::default();
    crate::with_threads(cli.threads, || {
        run_command(&cli.command, cli.seed, &mut run)
    })?;
    let manifest_path = cli.manifest.clone().unwrap_or_else(|| {
        beside(
            &cli.command.primary_output(),
            &format!("{}.manifest.json", cli.command.name()),
        )
    });
    let manifest = json!({
        "tool": "vaxcred",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cli.command.name(),
        "seed": cli.seed,
        "config": config,
        "inputs": run.inputs,
        "outputs": run.outputs,
        "summary": run.summary,
    });
    let bytes = to_json_bytes(&manifest)?;
    if let Some(dir) = manifest_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&manifest_path, bytes)?;
    Ok(())
}

/// Parses `argv` (including the program name) and runs the subcommand.
///
/// Returns 0 on success, 2 on usage errors and 1 on data errors.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
