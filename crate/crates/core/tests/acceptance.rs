//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use chrono::{TimeZone, Utc};
use common::{dense_tfidf, fisher_oracle, kappa_oracle, lcc_oracle, report};
use vaxcred::credibility::{
    choose_family, score_from_labels, select_families, Bucket, CredibilityResult, CriterionLabels,
    FamilyScore,
};
use vaxcred::eval::{
    cross_validate_binary, fisher_exact, fleiss_kappa, CvReport, CvRow, TextConfig,
};
use vaxcred::exposure::{
    aggregate_shares, bucket_share_report, build_follower_graph, build_user_profiles,
    classify_nodes, export_graph, largest_component, top_exposures, GraphFormat, NodeClass,
};
use vaxcred::ingest::TweetRecord;
use vaxcred::models::{train_linear_svm, train_random_forest, Family, ForestParams};
use vaxcred::rng::SplitMix64;
use vaxcred::synth::{marker_corpus, MarkerConfig};
use vaxcred::textprep::{analyze_all, default_stopwords, fit_corpus, SparseVector};
use vaxcred::with_threads;

fn finish(criterion: usize, name: &str, failures: &[String], detail: String) {
    let passed = failures.is_empty();
    let detail = if passed {
        detail
    } else {
        format!("{detail}; {}", failures.join("; "))
    };
    report(criterion, name, passed, &detail);
    assert!(passed, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_bucket_mapping() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for mask in 0u8..128 {
        let bits: Vec<u8> = (0..7).map(|i| (mask >> i) & 1).collect();
        let expected_score = bits.iter().sum::<u8>();
        let expected_bucket = match expected_score {
            0..=2 => "low",
            3..=4 => "medium",
            _ => "high",
        };
        let labels = CriterionLabels::new(bits.clone().try_into().unwrap()).unwrap();
        let r = score_from_labels(labels);
        if r.score != expected_score || r.bucket.as_str() != expected_bucket {
            failures.push(format!("{bits:?} -> {} {}", r.score, r.bucket));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 1.0 {
        failures.push(format!("took {secs:.2}s"));
    }
    finish(
        1,
        "bucket mapping",
        &failures,
        format!("128 vectors exact in {secs:.3}s"),
    );
}

#[test]
fn criterion_02_fisher_exact() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut tables = 0u64;
    let mut worst = 0.0f64;
    for n in 0..=40u64 {
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let d = n - a - b - c;
                    let got = fisher_exact(a, b, c, d).p_value;
                    let want = fisher_oracle(a, b, c, d);
                    let diff = (got - want).abs();
                    worst = worst.max(diff);
                    if diff > 1e-10 && failures.len() < 5 {
                        failures.push(format!("({a},{b},{c},{d}): {got} vs {want}"));
                    }
                    tables += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        failures.push(format!("took {secs:.1}s"));
    }
    finish(
        2,
        "fisher exact vs enumeration",
        &failures,
        format!("{tables} tables with n<=40, max |dp| = {worst:.2e}, {secs:.1}s"),
    );
}

#[test]
fn criterion_03_tfidf_oracle() {
    let mut rng = SplitMix64::new(3);
    let stopwords = default_stopwords();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for corpus in 0..100 {
        let n_terms = 1 + rng.below(30);
        let mut lexicon: Vec<String> = (0..n_terms)
            .map(|i| format!("term{}", (b'a' + i as u8) as char))
            .collect();
        lexicon.push("the".into());
        let n_docs = 1 + rng.below(10);
        let docs: Vec<Vec<String>> = (0..n_docs)
            .map(|_| {
                (0..1 + rng.below(25))
                    .map(|_| rng.choose(&lexicon).clone())
                    .collect()
            })
            .collect();
        let min_df = 1 + rng.below(2);
        let model = match fit_corpus(&docs, min_df, &stopwords) {
            Ok(m) => m,
            Err(_) => {
                let (terms, _) = dense_tfidf(&docs, min_df, &stopwords, &[]);
                if !terms.is_empty() {
                    failures.push(format!(
                        "corpus {corpus}: fit failed with non-empty oracle vocabulary"
                    ));
                }
                continue;
            }
        };
        let mut queries = docs.clone();
        queries.push((0..8).map(|_| rng.choose(&lexicon).clone()).collect());
        for q in &queries {
            let (terms, want) = dense_tfidf(&docs, min_df, &stopwords, q);
            let got = model.transform(q).to_dense();
            let vocab: Vec<&str> = (0..model.dim())
                .map(|i| model.vocabulary().term(i))
                .collect();
            if vocab != terms.iter().map(String::as_str).collect::<Vec<_>>() {
                failures.push(format!("corpus {corpus}: vocabulary differs"));
                break;
            }
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).abs());
            }
        }
    }
    if worst > 1e-12 {
        failures.push(format!("max deviation {worst:e}"));
    }
    finish(
        3,
        "tf-idf vs dense oracle",
        &failures,
        format!("100 corpora, max |dx| = {worst:.2e}"),
    );
}

#[test]
fn criterion_04_fleiss_kappa() {
    let mut failures = Vec::new();
    let perfect: Vec<Vec<u32>> = (0..20)
        .map(|i| {
            if i % 3 == 0 {
                vec![0, 4, 0]
            } else if i % 3 == 1 {
                vec![4, 0, 0]
            } else {
                vec![0, 0, 4]
            }
        })
        .collect();
    let k_perfect = fleiss_kappa(&perfect, 4).unwrap().kappa;
    if k_perfect != 1.0 {
        failures.push(format!("perfect agreement gave {k_perfect}"));
    }
    let mut worst_random = 0.0f64;
    for seed in 0..5u64 {
        let mut rng = SplitMix64::new(seed);
        let table: Vec<Vec<u32>> = (0..200)
            .map(|_| {
                let ones = (0..3).filter(|_| rng.bernoulli(0.5)).count() as u32;
                vec![3 - ones, ones]
            })
            .collect();
        let k = fleiss_kappa(&table, 3).unwrap().kappa;
        worst_random = worst_random.max(k.abs());
    }
    if worst_random >= 0.1 {
        failures.push(format!("random ratings gave |kappa| = {worst_random}"));
    }
    let fixed = vec![
        vec![3, 0],
        vec![2, 1],
        vec![1, 2],
        vec![0, 3],
        vec![3, 0],
        vec![2, 1],
    ];
    let got = fleiss_kappa(&fixed, 3).unwrap().kappa;
    let want = kappa_oracle(&fixed);
    if (got - want).abs() > 1e-12 {
        failures.push(format!("fixed table {got} vs {want}"));
    }
    finish(
        4,
        "fleiss kappa",
        &failures,
        format!("perfect = {k_perfect}, max |random| = {worst_random:.4}, fixed = {got:.6} (oracle {want:.6})"),
    );
}

#[test]
fn criterion_05_linear_svm() {
    let mut failures = Vec::new();
    let x = vec![
        SparseVector::from_pairs(2, [(0, 1.0)]),
        SparseVector::from_pairs(2, [(1, 1.0)]),
    ];
    let m = train_linear_svm(&x, &[1, 0], 100.0, 42).unwrap();
    let dev = (m.weights[0] - 1.0)
        .abs()
        .max((m.weights[1] + 1.0).abs())
        .max(m.bias.abs());
    if dev > 1e-3 {
        failures.push(format!("w = {:?}, b = {}", m.weights, m.bias));
    }

    let mut rng = SplitMix64::new(5);
    let dim = 20;
    let truth: Vec<f64> = (0..dim).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    while xs.len() < 300 {
        let mut pairs: Vec<(usize, f64)> = Vec::new();
        for j in 0..dim {
            if rng.bernoulli(0.4) {
                pairs.push((j, rng.next_f64()));
            }
        }
        let v = SparseVector::from_pairs(dim, pairs);
        let s = v.dot_dense(&truth);
        if s.abs() < 0.05 {
            continue;
        }
        ys.push(u8::from(s > 0.0));
        xs.push(v);
    }
    let m = train_linear_svm(&xs, &ys, 100.0, 1).unwrap();
    let correct = xs
        .iter()
        .zip(&ys)
        .filter(|(x, y)| m.predict(x).unwrap() == **y)
        .count();
    if correct != xs.len() {
        failures.push(format!("separable fixture: {correct}/{} correct", xs.len()));
    }
    finish(
        5,
        "linear svm",
        &failures,
        format!(
            "two-point max deviation {dev:.2e}; separable fixture {correct}/{}",
            xs.len()
        ),
    );
}

#[test]
fn criterion_06_forest_determinism_and_skill() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (texts, labels) = marker_corpus(500, 60, &MarkerConfig::default(), 7);
    let docs = analyze_all(&texts);

    let y: Vec<u8> = labels.iter().map(|l| l.get(1)).collect();
    let model = fit_corpus(&docs, 2, &default_stopwords()).unwrap();
    let x = model.transform_all(&docs);
    let params = ForestParams::default();
    let one = with_threads(1, || train_random_forest(&x, &y, &params, 11).unwrap());
    let again = with_threads(1, || train_random_forest(&x, &y, &params, 11).unwrap());
    let four = with_threads(4, || train_random_forest(&x, &y, &params, 11).unwrap());
    let preds = |m: &vaxcred::models::ForestModel| {
        x.iter().map(|v| m.predict(v).unwrap()).collect::<Vec<_>>()
    };
    if one != again || preds(&one) != preds(&again) {
        failures.push("repeat run differs".into());
    }
    if one != four || preds(&one) != preds(&four) {
        failures.push("1 vs 4 threads differ".into());
    }

    let text = TextConfig::default();
    let mut lowest = [1.0f64; 2];
    for criterion in 1..=7 {
        let y: Vec<u8> = labels.iter().map(|l| l.get(criterion)).collect();
        for (slot, family) in Family::ALL.into_iter().enumerate() {
            let s = with_threads(4, || {
                cross_validate_binary(&docs, &y, &family.default_params(), &text, 10, 42)
            })
            .unwrap();
            lowest[slot] = lowest[slot].min(s.acc_mean());
            if s.acc_mean() < 0.95 {
                failures.push(format!(
                    "criterion {criterion} {family}: accuracy {:.4}",
                    s.acc_mean()
                ));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1}s"));
    }
    finish(
        6,
        "forest determinism and marker-corpus skill",
        &failures,
        format!(
            "identical across runs and threads; min 10-fold accuracy svm {:.4}, rf {:.4}; {secs:.1}s",
            lowest[0], lowest[1]
        ),
    );
}

#[test]
fn criterion_07_ensemble_selection() {
    // Published mean F1 and accuracy per criterion: (svm, rf).
    let table = [
        ((0.903, 0.842), (0.950, 0.924)),
        ((0.802, 0.828), (0.915, 0.943)),
        ((0.761, 0.917), (0.745, 0.944)),
        ((0.903, 0.833), (0.959, 0.936)),
        ((0.787, 0.721), (0.921, 0.920)),
        ((0.912, 0.852), (0.964, 0.943)),
        ((0.801, 0.924), (0.764, 0.936)),
    ];
    let mut rows = Vec::new();
    for (i, (svm, rf)) in table.iter().enumerate() {
        for (family, (f1, acc)) in [(Family::Svm, svm), (Family::Rf, rf)] {
            rows.push(CvRow {
                criterion: i + 1,
                family,
                f1_mean: *f1,
                f1_std: 0.0,
                acc_mean: *acc,
                acc_std: 0.0,
            });
        }
    }
    let chosen = select_families(&CvReport { folds: 10, rows }).unwrap();
    let got: Vec<Family> = chosen.iter().map(|(f, _)| *f).collect();
    let want = [
        Family::Rf,
        Family::Rf,
        Family::Svm,
        Family::Rf,
        Family::Rf,
        Family::Rf,
        Family::Svm,
    ];
    let mut failures = Vec::new();
    if got != want {
        failures.push(format!("selected {got:?}"));
    }
    let tie = choose_family(
        FamilyScore {
            family: Family::Svm,
            f1_mean: 0.8,
            acc_mean: 0.9,
        },
        FamilyScore {
            family: Family::Rf,
            f1_mean: 0.8,
            acc_mean: 0.9,
        },
    );
    if tie != Family::Rf {
        failures.push("full tie did not go to rf".into());
    }
    let names: Vec<&str> = got.iter().map(|f| f.as_str()).collect();
    finish(
        7,
        "ensemble selection",
        &failures,
        format!("selected {}", names.join(",")),
    );
}

fn random_tweets(
    rng: &mut SplitMix64,
    n: usize,
) -> (
    Vec<TweetRecord>,
    BTreeMap<String, CredibilityResult>,
    BTreeMap<String, String>,
) {
    let canon: Vec<String> = (0..40)
        .map(|i| format!("https://site{}.org/page/{i}", i % 7))
        .collect();
    let mut variants: Vec<(String, String)> = Vec::new();
    for c in &canon {
        for v in [
            c.clone(),
            format!("{c}?utm_source=tw"),
            format!("{c}#top"),
            c.replacen("https://", "HTTPS://", 1),
        ] {
            variants.push((v, c.clone()));
        }
    }
    for i in 0..10 {
        let u = format!("https://elsewhere.org/{i}");
        variants.push((u.clone(), u));
    }
    let scored: BTreeMap<String, CredibilityResult> = canon
        .iter()
        .take(35)
        .map(|c| {
            (
                c.clone(),
                score_from_labels(CriterionLabels::from_mask(rng.below(128) as u8)),
            )
        })
        .collect();
    let start = Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap();
    let tweets = (0..n)
        .map(|i| TweetRecord {
            tweet_id: format!("t{i}"),
            user_id: format!("u{}", rng.below(60)),
            follower_count: rng.below(100_000) as u64,
            urls: (0..rng.below(4))
                .map(|_| rng.choose(&variants).0.clone())
                .collect(),
            is_retweet: false,
            retweet_of: None,
            timestamp: start + chrono::Duration::seconds(i as i64),
        })
        .collect();
    let canon_map = variants.into_iter().collect();
    (tweets, scored, canon_map)
}

#[test]
fn criterion_08_exposure_arithmetic() {
    let mut rng = SplitMix64::new(8);
    let (tweets, scored, canon) = random_tweets(&mut rng, 1000);
    let shares = aggregate_shares(&tweets, &scored);
    let mut failures = Vec::new();

    for (url, result) in &scored {
        let (mut count, mut exposure) = (0u64, 0u64);
        for t in &tweets {
            if t.urls.iter().any(|u| &canon[u] == url) {
                count += 1;
                exposure += t.follower_count;
            }
        }
        match shares.iter().find(|s| &s.url == url) {
            Some(s)
                if s.tweet_count == count
                    && s.potential_exposure == exposure
                    && s.score == result.score => {}
            other => failures.push(format!("{url}: got {other:?}, want {count}/{exposure}")),
        }
    }
    if shares.len() != scored.len() {
        failures.push(format!(
            "{} records for {} scored urls",
            shares.len(),
            scored.len()
        ));
    }

    let report = bucket_share_report(&shares);
    let mut tweet_sum = 0.0;
    let mut exposure_sum = 0.0;
    for b in &report.per_bucket {
        let (mut t, mut e) = (0u64, 0u64);
        for s in shares
            .iter()
            .filter(|s| Bucket::from_score(s.score) == b.bucket)
        {
            t += s.tweet_count;
            e += s.potential_exposure;
        }
        if b.tweets != t || b.exposure != e {
            failures.push(format!(
                "{} totals {}/{} vs {t}/{e}",
                b.bucket, b.tweets, b.exposure
            ));
        }
        tweet_sum += b.tweet_proportion;
        exposure_sum += b.exposure_proportion;
    }
    for (score, st) in report.per_score.iter().enumerate() {
        let t: u64 = shares
            .iter()
            .filter(|s| s.score as usize == score)
            .map(|s| s.tweet_count)
            .sum();
        if st.tweets != t {
            failures.push(format!("score {score}: {} tweets vs {t}", st.tweets));
        }
    }
    if (tweet_sum - 1.0).abs() > 1e-9 || (exposure_sum - 1.0).abs() > 1e-9 {
        failures.push(format!("proportions sum to {tweet_sum}, {exposure_sum}"));
    }

    let mut full = shares.clone();
    full.sort_by(|a, b| (b.potential_exposure, &a.url).cmp(&(a.potential_exposure, &b.url)));
    for n in [0, 1, 10, shares.len(), shares.len() + 5] {
        if top_exposures(&shares, n) != full[..n.min(full.len())] {
            failures.push(format!("top_exposures({n}) differs from full sort"));
        }
    }
    finish(
        8,
        "exposure arithmetic",
        &failures,
        format!(
            "1000 tweets, {} urls; proportions sum {tweet_sum:.12}/{exposure_sum:.12}",
            scored.len()
        ),
    );
}

fn graphml_sets(xml: &str) -> (BTreeSet<String>, BTreeSet<(String, String)>) {
    use quick_xml::events::Event;
    let mut reader = quick_xml::Reader::from_str(xml);
    let (mut nodes, mut edges) = (BTreeSet::new(), BTreeSet::new());
    loop {
        match reader.read_event().expect("well-formed graphml") {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) => {
                let attr = |name: &[u8]| {
                    e.attributes()
                        .flatten()
                        .find(|a| a.key.as_ref() == name)
                        .map(|a| a.unescape_value().unwrap().into_owned())
                };
                match e.name().as_ref() {
                    b"node" => {
                        nodes.insert(attr(b"id").unwrap());
                    }
                    b"edge" => {
                        edges.insert((attr(b"source").unwrap(), attr(b"target").unwrap()));
                    }
                    _ => {}
                }
            }
            _ => {}
        }
    }
    (nodes, edges)
}

#[test]
fn criterion_09_graph() {
    let mut failures = Vec::new();
    let mut rng = SplitMix64::new(9);
    for g in 0..50 {
        let n = 1 + rng.below(1000);
        let m = rng.below(n + n / 2);
        let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.below(n), rng.below(n))).collect();
        if largest_component(n, &edges) != lcc_oracle(n, &edges) {
            failures.push(format!("graph {g}: lcc differs (n={n}, m={m})"));
        }
    }

    // Twelve users on a follower chain with hand-picked share histories.
    let histories: [(&str, &[u8], NodeClass); 12] = [
        ("u01", &[6, 7], NodeClass::HighSharer),
        ("u02", &[5, 5, 3], NodeClass::HighSharer),
        ("u03", &[0, 1], NodeClass::LowSharer),
        ("u04", &[2, 2, 4], NodeClass::LowSharer),
        ("u05", &[6, 1], NodeClass::Unclassified),
        ("u06", &[6, 3], NodeClass::Unclassified),
        ("u07", &[3, 4], NodeClass::Unclassified),
        ("u08", &[0, 6, 7], NodeClass::Unclassified),
        ("u09", &[7, 7, 7], NodeClass::HighSharer),
        ("u10", &[1, 0, 2], NodeClass::LowSharer),
        ("u11", &[0, 3], NodeClass::Unclassified),
        ("u12", &[5, 6, 0, 1], NodeClass::Unclassified),
    ];
    let scored: BTreeMap<String, CredibilityResult> = (0..=7u8)
        .map(|s| {
            (
                format!("https://p.org/s{s}"),
                score_from_labels(CriterionLabels::from_mask((1u16 << s) as u8 - 1)),
            )
        })
        .collect();
    let start = Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap();
    let mut tweets = Vec::new();
    for (user, scores, _) in &histories {
        for s in *scores {
            tweets.push(TweetRecord {
                tweet_id: format!("{user}-{}", tweets.len()),
                user_id: user.to_string(),
                follower_count: 10 + tweets.len() as u64,
                urls: vec![format!("https://p.org/s{s}")],
                is_retweet: false,
                retweet_of: None,
                timestamp: start + chrono::Duration::minutes(tweets.len() as i64),
            });
        }
    }
    let follow: Vec<(String, String)> = histories
        .windows(2)
        .map(|w| (w[0].0.to_string(), w[1].0.to_string()))
        .collect();
    let profiles = build_user_profiles(&tweets, &scored);
    let graph = classify_nodes(build_follower_graph(&follow, &profiles, 2));
    let mut classes = [0usize; 3];
    for (user, _, want) in &histories {
        match graph.node(user) {
            Some(node) if node.class == *want => {
                classes[match want {
                    NodeClass::HighSharer => 0,
                    NodeClass::LowSharer => 1,
                    NodeClass::Unclassified => 2,
                }] += 1
            }
            Some(node) => failures.push(format!(
                "{user}: {} instead of {}",
                node.class.as_str(),
                want.as_str()
            )),
            None => failures.push(format!("{user} missing from graph")),
        }
    }

    // Round trip a larger random graph through GraphML.
    let (tweets, scored, _) = random_tweets(&mut rng, 1000);
    let profiles = build_user_profiles(&tweets, &scored);
    let users: Vec<&String> = profiles.keys().collect();
    let follow: Vec<(String, String)> = (0..150)
        .map(|_| {
            (
                rng.choose(&users).to_string(),
                rng.choose(&users).to_string(),
            )
        })
        .collect();
    let big = classify_nodes(build_follower_graph(&follow, &profiles, 2));
    let (nodes, edges) = graphml_sets(&export_graph(&big, GraphFormat::GraphMl));
    let want_nodes: BTreeSet<String> = big.nodes.iter().map(|n| n.user_id().to_string()).collect();
    let want_edges: BTreeSet<(String, String)> = big
        .edges
        .iter()
        .map(|&(a, b)| {
            (
                big.nodes[a].user_id().to_string(),
                big.nodes[b].user_id().to_string(),
            )
        })
        .collect();
    if nodes != want_nodes || edges != want_edges {
        failures.push("graphml round trip changed node or edge sets".into());
    }
    finish(
        9,
        "follower graph",
        &failures,
        format!(
            "50 random graphs match bfs; 12-user fixture classes high/low/none = {}/{}/{}; graphml round trip {} nodes {} edges",
            classes[0],
            classes[1],
            classes[2],
            nodes.len(),
            edges.len()
        ),
    );
}

fn run_pipeline(dir: &Path) -> Vec<String> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let f = |name: &str| fixtures.join(name).display().to_string();
    let steps: Vec<Vec<String>> = vec![
        vec![
            "ingest".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--reference".into(),
            f("reference_urls.txt"),
        ],
        vec![
            "cv".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--labels".into(),
            f("labels.csv"),
        ],
        vec![
            "train".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--labels".into(),
            f("labels.csv"),
        ],
        vec![
            "score".into(),
            "--model".into(),
            "model.json".into(),
            "--docs".into(),
            f("webpages.jsonl"),
        ],
        vec![
            "terms".into(),
            "--docs".into(),
            f("webpages.jsonl"),
            "--scores".into(),
            "scores.csv".into(),
        ],
        vec![
            "exposure".into(),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--scores".into(),
            "scores.csv".into(),
        ],
        vec![
            "graph".into(),
            "--tweets".into(),
            f("tweets.jsonl"),
            "--scores".into(),
            "scores.csv".into(),
            "--followers".into(),
            f("followers.csv"),
        ],
    ];
    let mut failures = Vec::new();
    for args in steps {
        let out = Command::new(env!("CARGO_BIN_EXE_vaxcred"))
            .args(&args)
            .current_dir(dir)
            .output()
            .expect("run vaxcred");
        if !out.status.success() {
            failures.push(format!(
                "{} exited {:?}: {}",
                args[0],
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
    }
    failures
}

#[test]
fn criterion_10_end_to_end() {
    let start = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut failures = run_pipeline(a.path());
    failures.extend(run_pipeline(b.path()));
    let secs = start.elapsed().as_secs_f64() / 2.0;
    let expected = [
        "filter_report.json",
        "retained.jsonl",
        "cv_report.csv",
        "model.json",
        "scores.csv",
        "terms.csv",
        "exposure.csv",
        "bucket_report.json",
        "graph.graphml",
        "ingest.manifest.json",
        "cv.manifest.json",
        "train.manifest.json",
        "score.manifest.json",
        "terms.manifest.json",
        "exposure.manifest.json",
        "graph.manifest.json",
    ];
    for name in expected {
        match (
            std::fs::read(a.path().join(name)),
            std::fs::read(b.path().join(name)),
        ) {
            (Ok(x), Ok(y)) if x == y && !x.is_empty() => {}
            (Ok(_), Ok(_)) => failures.push(format!("{name} differs between runs or is empty")),
            _ => failures.push(format!("{name} missing")),
        }
    }
    let scores = std::fs::read_to_string(a.path().join("scores.csv")).unwrap_or_default();
    let rows = scores.lines().count().saturating_sub(1);
    if secs >= 120.0 {
        failures.push(format!("pipeline took {secs:.1}s"));
    }
    finish(
        10,
        "end-to-end fixture pipeline",
        &failures,
        format!(
            "{} files byte-identical across runs, {rows} pages scored, {secs:.1}s per run",
            expected.len()
        ),
    );
}
