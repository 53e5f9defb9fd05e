//! Character-trigram language identification.
//!
//! Each built-in language is a smoothed trigram distribution estimated from a
//! short bundled sample text. A document is scored by its trigram
//! log-likelihood under every profile; the reported confidence is the
//! posterior probability of the winning language under a uniform prior.

use std::collections::HashMap;
use std::sync::OnceLock;

/// Texts shorter than this (in characters) are reported as undetermined.
pub const MIN_CHARS: usize = 20;
/// Only the leading part of long documents is inspected.
const MAX_CHARS: usize = 4000;
const SMOOTHING: f64 = 0.5;
/// Nominal size of the trigram space used for add-k smoothing.
const TRIGRAM_SPACE: f64 = 30.0 * 30.0 * 30.0;

pub const UNDETERMINED: &str = "und";

const SAMPLES: &[(&str, &str)] = &[
    ("en", include_str!("profiles/en.txt")),
    ("fr", include_str!("profiles/fr.txt")),
    ("de", include_str!("profiles/de.txt")),
    ("es", include_str!("profiles/es.txt")),
    ("it", include_str!("profiles/it.txt")),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub language: String,
    pub confidence: f64,
}

impl Detection {
    fn undetermined() -> Self {
        Self {
            language: UNDETERMINED.to_string(),
            confidence: 0.0,
        }
    }
}

struct Profile {
    code: &'static str,
    log_probs: HashMap<[char; 3], f64>,
    unseen: f64,
}

fn trigrams(text: &str) -> Vec<[char; 3]> {
    let mut out = Vec::new();
    for word in text
        .chars()
        .take(MAX_CHARS)
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphabetic() { c } else { ' ' })
        .collect::<String>()
        .split_whitespace()
    {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(word.chars())
            .chain(std::iter::once(' '))
            .collect();
        out.extend(padded.windows(3).map(|w| [w[0], w[1], w[2]]));
    }
    out
}

fn profiles() -> &'static [Profile] {
    static PROFILES: OnceLock<Vec<Profile>> = OnceLock::new();
    PROFILES.get_or_init(|| {
        SAMPLES
            .iter()
            .map(|(code, sample)| {
                let mut counts: HashMap<[char; 3], f64> = HashMap::new();
                let grams = trigrams(sample);
                for g in &grams {
                    *counts.entry(*g).or_default() += 1.0;
                }
                let denom = grams.len() as f64 + SMOOTHING * TRIGRAM_SPACE;
                let log_probs = counts
                    .into_iter()
                    .map(|(g, c)| (g, ((c + SMOOTHING) / denom).ln()))
                    .collect();
                Profile {
                    code,
                    log_probs,
                    unseen: (SMOOTHING / denom).ln(),
                }
            })
            .collect()
    })
}

/// Codes of the built-in language profiles.
pub fn supported_languages() -> Vec<&'static str> {
    SAMPLES.iter().map(|(c, _)| *c).collect()
}

/// Identifies the language of `text`.
pub fn detect_language(text: &str) -> Detection {
    if text.trim().chars().count() < MIN_CHARS {
        return Detection::undetermined();
    }
    let grams = trigrams(text);
    if grams.is_empty() {
        return Detection::undetermined();
    }
    let scores: Vec<f64> = profiles()
        .iter()
        .map(|p| {
            grams
                .iter()
                .map(|g| p.log_probs.get(g).copied().unwrap_or(p.unseen))
                .sum()
        })
        .collect();
    // First maximum wins, so the result is independent of float ties order.
    let (best, best_score) =
        scores
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc },
            );
    let norm: f64 = scores.iter().map(|s| (s - best_score).exp()).sum();
    Detection {
        language: profiles()[best].code.to_string(),
        confidence: 1.0 / norm,
    }
}
