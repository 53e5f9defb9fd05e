//! The seven-criterion credibility checklist, scores and buckets, and the
//! per-criterion ensemble that predicts them.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{cross_validate, CvReport, TextConfig};
use crate::ingest::normalize_or_raw;
use crate::models::{self, Family, ModelParams, TrainedModel};
use crate::rng::SplitMix64;
use crate::textprep::{analyze_all, clean_text, tokenize, TfIdfFile, TfIdfModel};

pub const N_CRITERIA: usize = 7;

/// Checklist wording, in criterion order.
pub const CRITERIA: [&str; N_CRITERIA] = [
    "information presented is based on objective, scientific research",
    "adequate detail about the level of evidence offered by the research is included",
    "uncertainties and limitations in the research in focus are described",
    "the information does not exaggerate, overstate or misrepresent available evidence",
    "provides context for the research in focus",
    "uses clear, non-technical language that is easy to understand",
    "is transparent about sponsorship and funding",
];

/// Seven binary criterion outcomes, criterion 1 first.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CriterionLabels(pub [u8; N_CRITERIA]);

impl CriterionLabels {
    pub fn new(values: [u8; N_CRITERIA]) -> Result<Self> {
        if values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidInput(format!(
                "criterion labels must be 0/1: {values:?}"
            )));
        }
        Ok(Self(values))
    }

    /// Bit `i` of `mask` is criterion `i + 1`.
    pub fn from_mask(mask: u8) -> Self {
        let mut v = [0u8; N_CRITERIA];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = (mask >> i) & 1;
        }
        Self(v)
    }

    /// Value of criterion `criterion` (1-based).
    pub fn get(&self, criterion: usize) -> u8 {
        self.0[criterion - 1]
    }

    pub fn satisfied(&self) -> u8 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bucket {
    Low,
    Medium,
    High,
}

impl Bucket {
    pub const ALL: [Bucket; 3] = [Bucket::Low, Bucket::Medium, Bucket::High];

    /// 0–2 low, 3–4 medium, 5–7 high.
    pub fn from_score(score: u8) -> Self {
        match score {
            0..=2 => Bucket::Low,
            3..=4 => Bucket::Medium,
            _ => Bucket::High,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Bucket::Low => "low",
            Bucket::Medium => "medium",
            Bucket::High => "high",
        }
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bucket {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "low" => Ok(Bucket::Low),
            "medium" => Ok(Bucket::Medium),
            "high" => Ok(Bucket::High),
            other => Err(Error::InvalidInput(format!("unknown bucket {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CredibilityResult {
    pub labels: CriterionLabels,
    pub score: u8,
    pub bucket: Bucket,
}

pub fn score_from_labels(labels: CriterionLabels) -> CredibilityResult {
    let score = labels.satisfied();
    CredibilityResult {
        labels,
        score,
        bucket: Bucket::from_score(score),
    }
}

/// Cross-validated F1 and accuracy for one family on one criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyScore {
    pub family: Family,
    pub f1_mean: f64,
    pub acc_mean: f64,
}

/// Family with the higher mean F1; ties go to higher accuracy, then to RF.
pub fn choose_family(svm: FamilyScore, rf: FamilyScore) -> Family {
    if svm.f1_mean > rf.f1_mean || (svm.f1_mean == rf.f1_mean && svm.acc_mean > rf.acc_mean) {
        Family::Svm
    } else {
        Family::Rf
    }
}

/// Family choice per criterion (index 0 = criterion 1) from a CV report
/// holding both families.
pub fn select_families(report: &CvReport) -> Result<[(Family, [FamilyScore; 2]); N_CRITERIA]> {
    let mut out = [(
        Family::Rf,
        [FamilyScore {
            family: Family::Svm,
            f1_mean: 0.0,
            acc_mean: 0.0,
        }; 2],
    ); N_CRITERIA];
    for (i, slot) in out.iter_mut().enumerate() {
        let c = i + 1;
        let score = |f: Family| {
            report
                .get(c, f)
                .map(|r| FamilyScore {
                    family: f,
                    f1_mean: r.f1_mean,
                    acc_mean: r.acc_mean,
                })
                .ok_or(Error::MissingCriterion(c))
        };
        let svm = score(Family::Svm)?;
        let rf = score(Family::Rf)?;
        *slot = (choose_family(svm, rf), [svm, rf]);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub criterion: usize,
    pub family: Family,
    pub params: ModelParams,
    /// CV scores of both families that justified the choice.
    pub provenance: [FamilyScore; 2],
    pub weights_or_trees: TrainedModel,
}

impl EnsembleEntry {
    pub fn is_justified(&self) -> bool {
        let chosen = self.provenance.iter().find(|p| p.family == self.family);
        let other = self.provenance.iter().find(|p| p.family != self.family);
        match (chosen, other) {
            (Some(c), Some(o)) => c.f1_mean >= o.f1_mean,
            _ => false,
        }
    }
}

/// One trained classifier per criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    entries: Vec<EnsembleEntry>,
}

impl EnsembleModel {
    pub fn new(entries: Vec<EnsembleEntry>) -> Result<Self> {
        if entries.len() != N_CRITERIA {
            return Err(Error::InvalidInput(format!(
                "ensemble has {} entries",
                entries.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.criterion != i + 1 {
                return Err(Error::MissingCriterion(i + 1));
            }
            if e.weights_or_trees.family() != e.family {
                return Err(Error::Invariant(format!(
                    "criterion {} model/family mismatch",
                    e.criterion
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn families(&self) -> [Family; N_CRITERIA] {
        let mut f = [Family::Rf; N_CRITERIA];
        for (slot, e) in f.iter_mut().zip(&self.entries) {
            *slot = e.family;
        }
        f
    }
}

/// Picks, per criterion, the family favoured by `report` and takes its
/// trained model from `trained`.
pub fn build_ensemble(
    report: &CvReport,
    mut trained: BTreeMap<(usize, Family), (ModelParams, TrainedModel)>,
) -> Result<EnsembleModel> {
    let choices = select_families(report)?;
    let entries = choices
        .iter()
        .enumerate()
        .map(|(i, (family, provenance))| {
            let criterion = i + 1;
            let (params, model) = trained
                .remove(&(criterion, *family))
                .ok_or(Error::MissingCriterion(criterion))?;
            Ok(EnsembleEntry {
                criterion,
                family: *family,
                params,
                provenance: *provenance,
                weights_or_trees: model,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleModel::new(entries)
}

/// Fitted features plus ensemble: everything needed to score a page.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineModel {
    pub tfidf: TfIdfModel,
    pub ensemble: EnsembleModel,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    tfidf: TfIdfFile,
    criteria: Vec<EnsembleEntry>,
}

impl PipelineModel {
    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            schema_version: 1,
            tfidf: self.tfidf.to_file(),
            criteria: self.ensemble.entries.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s)?;
        if file.schema_version != 1 {
            return Err(Error::InvalidInput(format!(
                "unsupported model schema_version {}",
                file.schema_version
            )));
        }
        let tfidf = TfIdfModel::from_file(file.tfidf)?;
        let ensemble = EnsembleModel::new(file.criteria)?;
        for e in ensemble.entries() {
            if e.weights_or_trees.dim() != tfidf.dim() {
                return Err(Error::DimensionMismatch {
                    expected: tfidf.dim(),
                    got: e.weights_or_trees.dim(),
                });
            }
        }
        Ok(Self { tfidf, ensemble })
    }

    pub fn predict(&self, text: &str) -> Result<CredibilityResult> {
        predict_credibility(text, &self.ensemble, &self.tfidf)
    }
}

/// clean → tokenize → TF-IDF → seven classifiers → score.
pub fn predict_credibility(
    text: &str,
    ensemble: &EnsembleModel,
    tfidf: &TfIdfModel,
) -> Result<CredibilityResult> {
    let cleaned = clean_text(text);
    if cleaned.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let x = tfidf.transform(&tokenize(&cleaned));
    let mut labels = [0u8; N_CRITERIA];
    for (slot, e) in labels.iter_mut().zip(ensemble.entries()) {
        *slot = e.weights_or_trees.predict(&x)?;
    }
    Ok(score_from_labels(CriterionLabels(labels)))
}

/// Everything `train_pipeline` produces.
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: PipelineModel,
    pub cv: CvReport,
}

/// Cross-validates both families, refits features and models on all
/// labelled documents, then assembles the ensemble.
pub fn train_pipeline(
    texts: &[String],
    labels: &[CriterionLabels],
    svm: &ModelParams,
    rf: &ModelParams,
    text: &TextConfig,
    folds: usize,
    seed: u64,
) -> Result<TrainOutput> {
    let docs = analyze_all(texts);
    let cv = cross_validate(&docs, labels, &[*svm, *rf], text, folds, seed)?;
    let tfidf = crate::textprep::fit_corpus(&docs, text.min_df, &text.stopwords)?;
    let x = tfidf.transform_all(&docs);
    let mut trained = BTreeMap::new();
    for criterion in 1..=N_CRITERIA {
        let y: Vec<u8> = labels.iter().map(|l| l.get(criterion)).collect();
        for p in [svm, rf] {
            let model_seed = SplitMix64::stream(seed, 1000 + criterion as u64).next_u64();
            let m = models::train(p, &x, &y, model_seed)?;
            trained.insert((criterion, p.family()), (*p, m));
        }
    }
    let ensemble = build_ensemble(&cv, trained)?;
    Ok(TrainOutput {
        model: PipelineModel { tfidf, ensemble },
        cv,
    })
}

/// Three-class evaluation of predicted against gold buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEvaluation {
    pub three_class_accuracy: f64,
    /// Share of predicted-low pages that are gold-low; `None` when nothing
    /// was predicted low.
    pub low_precision: Option<f64>,
    /// `confusion[gold][predicted]` in low, medium, high order.
    pub confusion: [[usize; 3]; 3],
    pub documents: usize,
}

pub fn evaluate_buckets(gold: &[Bucket], predicted: &[Bucket]) -> Result<EnsembleEvaluation> {
    if gold.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: gold.len(),
            got: predicted.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::InvalidInput(
            "no labelled documents to evaluate".into(),
        ));
    }
    let mut confusion = [[0usize; 3]; 3];
    for (g, p) in gold.iter().zip(predicted) {
        confusion[g.index()][p.index()] += 1;
    }
    let correct: usize = (0..3).map(|i| confusion[i][i]).sum();
    let predicted_low: usize = (0..3).map(|g| confusion[g][0]).sum();
    Ok(EnsembleEvaluation {
        three_class_accuracy: correct as f64 / gold.len() as f64,
        low_precision: (predicted_low > 0).then(|| confusion[0][0] as f64 / predicted_low as f64),
        confusion,
        documents: gold.len(),
    })
}

/// Scores every labelled text with the pipeline and compares buckets.
pub fn evaluate_ensemble(
    texts: &[String],
    gold: &[CriterionLabels],
    model: &PipelineModel,
) -> Result<EnsembleEvaluation> {
    let predicted = texts
        .par_iter()
        .map(|t| model.predict(t).map(|r| r.bucket))
        .collect::<Result<Vec<_>>>()?;
    let gold: Vec<Bucket> = gold.iter().map(|l| score_from_labels(*l).bucket).collect();
    evaluate_buckets(&gold, &predicted)
}

/// Share of documents satisfying each criterion.
pub fn label_distribution(labels: &[CriterionLabels]) -> [f64; N_CRITERIA] {
    let mut out = [0.0; N_CRITERIA];
    if labels.is_empty() {
        return out;
    }
    for l in labels {
        for (o, v) in out.iter_mut().zip(l.0) {
            *o += v as f64;
        }
    }
    out.iter_mut().for_each(|o| *o /= labels.len() as f64);
    out
}

const LABEL_HEADER: [&str; 8] = ["url", "c1", "c2", "c3", "c4", "c5", "c6", "c7"];

/// Reads `labels.csv` (`url,c1..c7`, header required). URLs are normalized;
/// rows keep file order.
pub fn read_labels_csv<R: io::Read>(r: R) -> Result<Vec<(String, CriterionLabels)>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.len() < LABEL_HEADER.len() || header[..LABEL_HEADER.len()] != LABEL_HEADER {
        return Err(Error::InvalidInput(format!(
            "labels header must start with {}",
            LABEL_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut v = [0u8; N_CRITERIA];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = match rec.get(i + 1).map(str::trim) {
                Some("0") => 0,
                Some("1") => 1,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "labels row {}: criterion {} value {other:?} is not 0/1",
                        line + 1,
                        i + 1
                    )))
                }
            };
        }
        out.push((normalize_or_raw(&rec[0]), CriterionLabels(v)));
    }
    Ok(out)
}

pub fn write_labels_csv<W: io::Write>(rows: &[(String, CriterionLabels)], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(LABEL_HEADER)?;
    for (url, l) in rows {
        let mut rec = vec![url.clone()];
        rec.extend(l.0.iter().map(|v| v.to_string()));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes `scores.csv`: `url,c1..c7,score,bucket`.
pub fn write_scores_csv<W: io::Write>(rows: &[(String, CredibilityResult)], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = LABEL_HEADER.to_vec();
    header.extend(["score", "bucket"]);
    wtr.write_record(&header)?;
    for (url, r) in rows {
        let mut rec = vec![url.clone()];
        rec.extend(r.labels.0.iter().map(|v| v.to_string()));
        rec.push(r.score.to_string());
        rec.push(r.bucket.to_string());
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads `scores.csv`, re-deriving score and bucket from the labels and
/// rejecting rows where they disagree.
pub fn read_scores_csv<R: io::Read>(r: R) -> Result<BTreeMap<String, CredibilityResult>> {
    let labels = {
        let mut rdr = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 10 {
                return Err(Error::InvalidInput(format!(
                    "scores row has {} fields",
                    rec.len()
                )));
            }
            let mut v = [0u8; N_CRITERIA];
            for (i, slot) in v.iter_mut().enumerate() {
                *slot = rec[i + 1].trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("bad criterion value {:?}", &rec[i + 1]))
                })?;
            }
            let result = score_from_labels(CriterionLabels::new(v)?);
            let score: u8 = rec[8]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad score {:?}", &rec[8])))?;
            let bucket: Bucket = rec[9].parse()?;
            if score != result.score || bucket != result.bucket {
                return Err(Error::InvalidInput(format!(
                    "inconsistent score row for {}",
                    &rec[0]
                )));
            }
            rows.push((normalize_or_raw(&rec[0]), result));
        }
        rows
    };
    Ok(labels.into_iter().collect())
}

pub fn write_label_distribution_csv<W: io::Write>(dist: &[f64; N_CRITERIA], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["criterion", "proportion"])?;
    for (i, p) in dist.iter().enumerate() {
        wtr.write_record([(i + 1).to_string(), p.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
