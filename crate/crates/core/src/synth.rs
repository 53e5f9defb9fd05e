//! Deterministic synthetic corpora.
//!
//! The real labelled pages, tweet stream and follower lists are not
//! redistributable, so tests, examples and the bundled fixture run on data
//! generated here. Pages are English filler text with class-marker tokens:
//! for every criterion a page carries [`MARKERS_PER_CRITERION`] markers, each
//! drawn from its own class's marker set with probability `fidelity` and
//! from the opposite class otherwise.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chrono::{Duration, TimeZone, Utc};

use crate::credibility::{write_labels_csv, CriterionLabels, N_CRITERIA};
use crate::error::Result;
use crate::ingest::{RawPage, TweetRecord};
use crate::rng::SplitMix64;

pub const MARKERS_PER_CRITERION: usize = 5;
pub const MARKER_VARIANTS: usize = 1;

/// Shape of the marker signal mixed into synthetic pages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerConfig {
    /// Marker tokens injected per criterion per page.
    pub per_criterion: usize,
    /// Distinct marker tokens available to each class of each criterion.
    pub variants: usize,
    /// Probability that a marker comes from the page's own class.
    pub fidelity: f64,
}

impl Default for MarkerConfig {
    fn default() -> Self {
        Self {
            per_criterion: MARKERS_PER_CRITERION,
            variants: MARKER_VARIANTS,
            fidelity: 0.9,
        }
    }
}

const ENGLISH: &[&str] = &[
    "the",
    "of",
    "and",
    "to",
    "in",
    "that",
    "is",
    "was",
    "for",
    "on",
    "with",
    "as",
    "it",
    "at",
    "by",
    "from",
    "this",
    "have",
    "are",
    "were",
    "they",
    "which",
    "their",
    "there",
    "been",
    "more",
    "when",
    "about",
    "would",
    "these",
    "other",
    "people",
    "health",
    "children",
    "parents",
    "doctor",
    "doctors",
    "nurse",
    "hospital",
    "family",
    "families",
    "school",
    "community",
    "research",
    "researchers",
    "report",
    "reported",
    "study",
    "studies",
    "evidence",
    "results",
    "vaccine",
    "vaccines",
    "vaccination",
    "disease",
    "outbreak",
    "measles",
    "influenza",
    "virus",
    "safety",
    "risk",
    "risks",
    "benefit",
    "benefits",
    "public",
    "agency",
    "government",
    "policy",
    "program",
    "country",
    "state",
    "local",
    "news",
    "article",
    "story",
    "stories",
    "website",
    "information",
    "question",
    "questions",
    "answer",
    "believe",
    "think",
    "know",
    "said",
    "told",
    "found",
    "showed",
    "suggested",
    "explained",
    "described",
    "included",
    "reviewed",
    "experts",
    "scientists",
    "journal",
    "published",
    "data",
    "number",
    "percent",
    "rate",
    "increase",
    "decrease",
    "year",
    "years",
    "month",
    "week",
    "today",
    "recent",
    "recently",
    "important",
    "serious",
    "common",
    "rare",
    "likely",
    "possible",
    "different",
    "several",
    "many",
    "most",
    "some",
    "every",
    "each",
    "first",
    "second",
    "new",
    "old",
    "young",
    "small",
    "large",
    "great",
    "good",
    "better",
    "best",
    "long",
    "short",
    "high",
    "low",
    "early",
    "later",
    "mother",
    "father",
    "daughter",
    "son",
    "friend",
    "friends",
    "neighbour",
    "teacher",
    "town",
    "city",
    "clinic",
    "office",
    "medicine",
    "treatment",
    "symptoms",
    "fever",
    "infection",
    "immune",
    "system",
    "body",
    "blood",
    "test",
    "tests",
    "trial",
    "trials",
    "group",
    "groups",
    "control",
    "sample",
    "analysis",
    "review",
    "paper",
    "author",
    "authors",
    "team",
    "work",
    "working",
    "worked",
    "make",
    "made",
    "take",
    "took",
    "give",
    "gave",
    "help",
    "helped",
    "keep",
    "protect",
    "protection",
    "prevent",
    "cause",
    "caused",
    "effect",
    "effects",
    "reaction",
    "after",
    "before",
    "during",
    "while",
    "because",
    "although",
    "however",
    "also",
    "only",
    "still",
    "even",
    "just",
    "often",
    "always",
    "never",
    "sometimes",
    "perhaps",
    "very",
    "much",
    "around",
    "across",
    "through",
    "between",
    "against",
    "without",
    "within",
    "under",
    "over",
    "decision",
    "choice",
    "choose",
    "concern",
    "concerns",
    "worried",
    "afraid",
    "hope",
    "trust",
    "social",
    "media",
    "online",
    "share",
    "shared",
    "post",
    "posts",
    "read",
    "reading",
    "write",
    "wrote",
    "written",
    "show",
    "shows",
    "seen",
    "see",
    "look",
    "looked",
    "life",
    "lives",
    "world",
    "place",
    "home",
    "house",
    "water",
    "food",
    "money",
    "cost",
    "costs",
    "funding",
];

const FRENCH: &[&str] = &[
    "le",
    "la",
    "les",
    "de",
    "des",
    "du",
    "et",
    "un",
    "une",
    "est",
    "dans",
    "pour",
    "que",
    "qui",
    "sur",
    "avec",
    "par",
    "pas",
    "plus",
    "mais",
    "nous",
    "vous",
    "ils",
    "elles",
    "leur",
    "leurs",
    "santé",
    "enfants",
    "parents",
    "médecin",
    "hôpital",
    "famille",
    "école",
    "recherche",
    "étude",
    "études",
    "résultats",
    "vaccin",
    "vaccins",
    "maladie",
    "épidémie",
    "rougeole",
    "grippe",
    "sécurité",
    "risque",
    "bénéfice",
    "publique",
    "gouvernement",
    "politique",
    "pays",
    "nouvelles",
    "article",
    "histoire",
    "information",
    "question",
    "réponse",
    "croire",
    "penser",
    "savoir",
    "dit",
    "trouvé",
    "montré",
    "expliqué",
    "experts",
    "scientifiques",
    "journal",
    "publié",
    "données",
    "nombre",
    "année",
    "mois",
    "semaine",
    "aujourd'hui",
    "important",
    "grave",
    "commun",
    "rare",
    "probable",
    "possible",
    "différent",
    "plusieurs",
    "beaucoup",
    "chaque",
    "premier",
    "nouveau",
    "vieux",
    "jeune",
    "petit",
    "grand",
    "bon",
    "meilleur",
    "mère",
    "père",
    "fille",
    "fils",
    "ami",
    "amis",
    "voisin",
    "ville",
    "médicament",
    "traitement",
    "fièvre",
    "infection",
    "système",
    "corps",
    "sang",
    "essai",
    "groupe",
    "analyse",
    "auteur",
    "travail",
    "faire",
    "prendre",
    "donner",
    "aider",
    "protéger",
    "protection",
    "prévenir",
    "cause",
    "effet",
    "après",
    "avant",
    "pendant",
    "parce",
    "aussi",
    "seulement",
    "encore",
    "toujours",
    "jamais",
    "parfois",
    "très",
    "entre",
    "contre",
    "sans",
    "sous",
    "décision",
    "choix",
    "inquiétude",
    "espoir",
    "confiance",
    "partager",
    "lire",
    "écrire",
    "voir",
    "vie",
    "monde",
    "maison",
    "eau",
    "nourriture",
    "argent",
    "coût",
    "financement",
    "ces",
    "cette",
];

pub fn marker(criterion: usize, positive: bool, variant: usize) -> String {
    let c = (b'a' + (criterion - 1) as u8) as char;
    let v = (b'a' + variant as u8) as char;
    if positive {
        format!("crit{c}yes{v}")
    } else {
        format!("crit{c}no{v}")
    }
}

fn sentence(rng: &mut SplitMix64, lexicon: &[&str], words: usize) -> Vec<String> {
    (0..words)
        .map(|_| rng.choose(lexicon).to_string())
        .collect()
}

/// Joins tokens into sentences and paragraphs of 40–70 words separated by
/// blank lines.
fn layout(rng: &mut SplitMix64, tokens: Vec<String>) -> String {
    let mut out = String::new();
    let mut para = 0;
    let mut para_len = 40 + rng.below(31);
    let mut sent = 0;
    let mut sent_len = 8 + rng.below(10);
    for t in tokens {
        if sent == 0 {
            let mut cs = t.chars();
            if let Some(f) = cs.next() {
                out.extend(f.to_uppercase());
                out.push_str(cs.as_str());
            }
        } else {
            out.push_str(&t);
        }
        sent += 1;
        para += 1;
        if sent >= sent_len {
            out.push('.');
            sent = 0;
            sent_len = 8 + rng.below(10);
        }
        if para >= para_len && sent == 0 {
            out.push_str("\n\n");
            para = 0;
            para_len = 40 + rng.below(31);
        } else {
            out.push(' ');
        }
    }
    let mut out = out.trim_end().to_string();
    if !out.ends_with('.') {
        out.push('.');
    }
    out
}

/// English filler of `words` tokens with the markers for `labels` mixed in.
pub fn marked_page(
    rng: &mut SplitMix64,
    labels: &CriterionLabels,
    words: usize,
    markers: &MarkerConfig,
) -> String {
    let mut tokens = sentence(rng, ENGLISH, words);
    for criterion in 1..=N_CRITERIA {
        let truth = labels.get(criterion) == 1;
        for _ in 0..markers.per_criterion {
            let positive = if rng.bernoulli(markers.fidelity) {
                truth
            } else {
                !truth
            };
            let m = marker(criterion, positive, rng.below(markers.variants));
            let at = rng.below(tokens.len() + 1);
            tokens.insert(at, m);
        }
    }
    layout(rng, tokens)
}

pub fn english_page(rng: &mut SplitMix64, words: usize) -> String {
    let tokens = sentence(rng, ENGLISH, words);
    layout(rng, tokens)
}

pub fn french_page(rng: &mut SplitMix64, words: usize) -> String {
    let tokens = sentence(rng, FRENCH, words);
    layout(rng, tokens)
}

/// Criterion labels driven by a latent quality level (0 low, 1 medium,
/// 2 high).
pub fn labels_for_quality(rng: &mut SplitMix64, quality: usize) -> CriterionLabels {
    let p = [0.15, 0.5, 0.85][quality.min(2)];
    let mut v = [0u8; N_CRITERIA];
    for slot in &mut v {
        *slot = u8::from(rng.bernoulli(p));
    }
    CriterionLabels(v)
}

/// A labelled marker corpus: `(texts, labels)`.
pub fn marker_corpus(
    n_docs: usize,
    words: usize,
    markers: &MarkerConfig,
    seed: u64,
) -> (Vec<String>, Vec<CriterionLabels>) {
    let mut rng = SplitMix64::new(seed);
    let mut texts = Vec::with_capacity(n_docs);
    let mut labels = Vec::with_capacity(n_docs);
    for _ in 0..n_docs {
        let q = rng.below(3);
        let l = labels_for_quality(&mut rng, q);
        texts.push(marked_page(&mut rng, &l, words, markers));
        labels.push(l);
    }
    (texts, labels)
}

/// Every file of the bundled end-to-end fixture, in memory.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub pages: Vec<RawPage>,
    pub labels: Vec<(String, CriterionLabels)>,
    /// `(url, rater, labels)` for the multi-rater agreement subset.
    pub ratings: Vec<(String, String, CriterionLabels)>,
    pub reference_urls: Vec<String>,
    pub tweets: Vec<TweetRecord>,
    /// Raw lines appended to `tweets.jsonl` that must be skipped.
    pub malformed_tweet_lines: Vec<String>,
    pub followers: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy)]
pub struct FixtureConfig {
    pub pages: usize,
    pub labelled: usize,
    pub tweets: usize,
    pub users: usize,
    pub seed: u64,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        Self {
            pages: 120,
            labelled: 60,
            tweets: 1000,
            users: 150,
            seed: 2019,
        }
    }
}

fn url_variant(rng: &mut SplitMix64, url: &str) -> String {
    match rng.below(5) {
        0 => format!("{url}?utm_source=twitter&utm_medium=social"),
        1 => format!("{url}#comments"),
        2 => url
            .replacen("https://", "HTTPS://", 1)
            .replacen(".org", ".ORG", 1),
        _ => url.to_string(),
    }
}

/// Builds the fixture described by `config`.
///
/// Of the pages, 16 are designed to be rejected: 6 French, 6 too short, 2
/// empty and 2 near-duplicates, plus 2 URL variants of retained pages; the
/// remainder are English marker pages, the first `labelled` of which carry
/// gold labels.
pub fn build_fixture(config: &FixtureConfig) -> Fixture {
    let mut rng = SplitMix64::new(config.seed);
    let n_rejects = 6 + 6 + 2 + 2 + 2;
    let n_good = config.pages.saturating_sub(n_rejects).max(config.labelled);

    // Good pages with latent quality; resample labels until both classes of
    // every criterion have at least ten labelled members.
    let mut labels: Vec<CriterionLabels>;
    let mut quality: Vec<usize>;
    loop {
        quality = (0..n_good).map(|_| rng.below(3)).collect();
        labels = quality
            .iter()
            .map(|&q| labels_for_quality(&mut rng, q))
            .collect();
        let ok = (1..=N_CRITERIA).all(|c| {
            let pos = labels[..config.labelled]
                .iter()
                .filter(|l| l.get(c) == 1)
                .count();
            pos >= 10 && config.labelled - pos >= 10
        });
        if ok {
            break;
        }
    }
    let good_urls: Vec<String> = (0..n_good)
        .map(|i| {
            let host = [
                "healthnews.org",
                "vaxfacts.org",
                "dailyreport.org",
                "parentsblog.org",
            ][i % 4];
            format!("https://{host}/articles/{i:03}")
        })
        .collect();
    let mut pages: Vec<RawPage> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let words = 350 + rng.below(300);
        pages.push(RawPage {
            url: good_urls[i].clone(),
            text: marked_page(&mut rng, l, words, &MarkerConfig::default()),
        });
    }
    for i in 0..6 {
        pages.push(RawPage {
            url: format!("https://actualites.fr/sante/{i}"),
            text: french_page(&mut rng, 400),
        });
    }
    for i in 0..6 {
        pages.push(RawPage {
            url: format!("https://shortnews.org/brief/{i}"),
            text: {
                let words = 120 + rng.below(150);
                english_page(&mut rng, words)
            },
        });
    }
    for i in 0..2 {
        pages.push(RawPage {
            url: format!("https://broken.org/missing/{i}"),
            text: String::new(),
        });
    }
    // Near-duplicates of unlabelled pages, one longer and one shorter.
    let unlabelled = config.labelled..n_good;
    for (k, i) in unlabelled.clone().take(2).enumerate() {
        let base = pages[i].text.clone();
        let text = if k == 0 {
            format!("{base}\n\nThis article was updated with additional reporting from the health desk team.")
        } else {
            let cut = base.rfind("\n\n").unwrap_or(base.len());
            base[..cut].to_string()
        };
        pages.push(RawPage {
            url: format!("https://mirror.org/copy/{k}"),
            text,
        });
    }
    for (k, i) in unlabelled.skip(2).take(2).enumerate() {
        pages.push(RawPage {
            url: format!("{}?utm_campaign=mirror{k}", good_urls[i]),
            text: english_page(&mut rng, 320),
        });
    }

    let label_rows: Vec<(String, CriterionLabels)> = (0..config.labelled)
        .map(|i| (good_urls[i].clone(), labels[i]))
        .collect();

    let mut ratings = Vec::new();
    for (url, gold) in label_rows.iter().take(30) {
        for rater in ["r1", "r2", "r3"] {
            let mut v = gold.0;
            for x in &mut v {
                if rng.bernoulli(0.1) {
                    *x ^= 1;
                }
            }
            ratings.push((url.clone(), rater.to_string(), CriterionLabels(v)));
        }
    }

    let mut reference_urls: Vec<String> = (0..n_good)
        .filter(|&i| quality[i] == 2 && i % 2 == 0)
        .map(|i| good_urls[i].clone())
        .collect();
    reference_urls.extend((0..10).map(|i| format!("https://journal.example.org/doi/10.1000/{i}")));

    // Users lean towards low, high or mixed quality pages.
    let users: Vec<(String, usize, u64)> = (0..config.users)
        .map(|u| {
            let leaning = rng.below(3);
            let followers = 10f64.powf(1.0 + 4.0 * rng.next_f64()).round() as u64;
            (format!("user{u:03}"), leaning, followers)
        })
        .collect();
    let by_quality: Vec<Vec<usize>> = (0..3)
        .map(|q| (0..n_good).filter(|&i| quality[i] == q).collect())
        .collect();
    let start = Utc.with_ymd_and_hms(2017, 1, 17, 0, 0, 0).unwrap();
    let mut tweets: Vec<TweetRecord> = Vec::with_capacity(config.tweets);
    let mut user_stats: BTreeMap<usize, u64> = BTreeMap::new();
    for t in 0..config.tweets {
        let u = rng.below(users.len());
        let (ref uid, leaning, base_followers) = users[u];
        let followers = {
            let e = user_stats.entry(u).or_insert(base_followers);
            *e += rng.below(3) as u64;
            *e
        };
        let timestamp = start + Duration::minutes((t as i64) * 37 + rng.below(30) as i64);
        let tweet_id = format!("{}", 800_000_000_000u64 + t as u64);
        if !tweets.is_empty() && rng.bernoulli(0.3) {
            let src = &tweets[rng.below(tweets.len())];
            let (urls, src_id) = (src.urls.clone(), src.tweet_id.clone());
            tweets.push(TweetRecord {
                tweet_id,
                user_id: uid.clone(),
                follower_count: followers,
                urls,
                is_retweet: true,
                retweet_of: Some(src_id),
                timestamp,
            });
            continue;
        }
        let pick = |rng: &mut SplitMix64| {
            let q = if leaning < 2 && rng.bernoulli(0.8) {
                [0, 2][leaning]
            } else {
                rng.below(3)
            };
            let pool = &by_quality[q];
            if pool.is_empty() {
                rng.below(n_good)
            } else {
                *rng.choose(pool)
            }
        };
        let first = pick(&mut rng);
        let mut urls = vec![url_variant(&mut rng, &good_urls[first])];
        if rng.bernoulli(0.1) {
            let second = pick(&mut rng);
            urls.push(url_variant(&mut rng, &good_urls[second]));
        }
        if rng.bernoulli(0.05) {
            urls.push(format!("https://www.youtube.com/watch?v=clip{t}"));
        }
        tweets.push(TweetRecord {
            tweet_id,
            user_id: uid.clone(),
            follower_count: followers,
            urls,
            is_retweet: false,
            retweet_of: None,
            timestamp,
        });
    }
    let malformed_tweet_lines = vec![
        "{\"tweet_id\": \"broken\"".to_string(),
        "{\"tweet_id\":\"x1\",\"user_id\":\"user000\",\"follower_count\":-5,\"urls\":[],\"is_retweet\":false,\"timestamp\":\"2017-02-01T00:00:00Z\"}".to_string(),
        "{\"tweet_id\":\"x2\",\"user_id\":\"user001\",\"follower_count\":5,\"urls\":[],\"is_retweet\":true,\"retweet_of\":null,\"timestamp\":\"2017-02-01T00:00:00Z\"}".to_string(),
    ];

    let mut followers = Vec::new();
    for (a, (ua, la, _)) in users.iter().enumerate() {
        for (b, (ub, lb, _)) in users.iter().enumerate() {
            if a == b {
                continue;
            }
            let p = if la == lb { 0.05 } else { 0.01 };
            if rng.bernoulli(p) {
                followers.push((ua.clone(), ub.clone()));
            }
        }
    }
    for (i, (user, _, _)) in users.iter().take(5).enumerate() {
        followers.push((format!("outsider{i}"), user.clone()));
    }

    Fixture {
        pages,
        labels: label_rows,
        ratings,
        reference_urls,
        tweets,
        malformed_tweet_lines,
        followers,
    }
}

impl Fixture {
    /// Writes `webpages.jsonl`, `labels.csv`, `ratings.csv`,
    /// `reference_urls.txt`, `tweets.jsonl` and `followers.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut pages = String::new();
        for p in &self.pages {
            pages.push_str(&serde_json::to_string(p)?);
            pages.push('\n');
        }
        fs::write(dir.join("webpages.jsonl"), pages)?;

        let mut buf = Vec::new();
        write_labels_csv(&self.labels, &mut buf)?;
        fs::write(dir.join("labels.csv"), buf)?;

        let mut ratings = String::from("url,rater,c1,c2,c3,c4,c5,c6,c7\n");
        for (url, rater, l) in &self.ratings {
            let _ = write!(ratings, "{url},{rater}");
            for v in l.0 {
                let _ = write!(ratings, ",{v}");
            }
            ratings.push('\n');
        }
        fs::write(dir.join("ratings.csv"), ratings)?;

        let mut refs = self.reference_urls.join("\n");
        refs.push('\n');
        fs::write(dir.join("reference_urls.txt"), refs)?;

        let mut tweets = String::new();
        for (i, t) in self.tweets.iter().enumerate() {
            tweets.push_str(&serde_json::to_string(t)?);
            tweets.push('\n');
            if let Some(bad) = self
                .malformed_tweet_lines
                .get(i / 300)
                .filter(|_| i % 300 == 150)
            {
                tweets.push_str(bad);
                tweets.push('\n');
            }
        }
        fs::write(dir.join("tweets.jsonl"), tweets)?;

        let mut f = String::from("follower_id,followee_id\n");
        for (a, b) in &self.followers {
            let _ = writeln!(f, "{a},{b}");
        }
        fs::write(dir.join("followers.csv"), f)?;
        Ok(())
    }
}
