use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::credibility::{Bucket, CredibilityResult};
use crate::error::Result;
use crate::ingest::{normalize_or_raw, TweetRecord};

/// Tweets and potential exposure for one scored URL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareRecord {
    pub url: String,
    /// Tweets and retweets containing the URL.
    pub tweet_count: u64,
    /// Sum of the posting users' follower counts over those tweets.
    pub potential_exposure: u64,
    pub score: u8,
    pub bucket: Bucket,
}

/// Distinct scored URLs of one tweet, normalized.
fn scored_urls<'a>(
    tweet: &TweetRecord,
    scored: &'a BTreeMap<String, CredibilityResult>,
) -> BTreeMap<&'a String, &'a CredibilityResult> {
    tweet
        .urls
        .iter()
        .filter_map(|u| scored.get_key_value(&normalize_or_raw(u)))
        .collect()
}

/// One record per scored URL, sorted by URL.
///
/// A tweet with several distinct scored URLs counts once for each. Retweets
/// count as posts by the retweeting user with that user's follower count.
/// Followers reached through several posters are counted every time.
pub fn aggregate_shares(
    tweets: &[TweetRecord],
    scored: &BTreeMap<String, CredibilityResult>,
) -> Vec<ShareRecord> {
    let mut totals: BTreeMap<&String, (u64, u64)> = scored.keys().map(|u| (u, (0, 0))).collect();
    for t in tweets {
        for (url, _) in scored_urls(t, scored) {
            let e = totals.get_mut(url).expect("scored url present");
            e.0 += 1;
            e.1 += t.follower_count;
        }
    }
    totals
        .into_iter()
        .map(|(url, (tweet_count, potential_exposure))| {
            let r = &scored[url];
            ShareRecord {
                url: url.clone(),
                tweet_count,
                potential_exposure,
                score: r.score,
                bucket: r.bucket,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreTotals {
    pub score: u8,
    pub pages: u64,
    pub tweets: u64,
    pub exposure: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketTotals {
    pub bucket: Bucket,
    pub pages: u64,
    pub tweets: u64,
    pub exposure: u64,
    pub tweet_proportion: f64,
    pub exposure_proportion: f64,
    /// Potential exposure of each page in the bucket, largest first.
    pub page_exposures: Vec<u64>,
}

/// Tweet and exposure totals by score and by bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketReport {
    pub total_pages: u64,
    pub total_tweets: u64,
    pub total_exposure: u64,
    pub per_score: Vec<ScoreTotals>,
    pub per_bucket: Vec<BucketTotals>,
}

fn share_of(part: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        part as f64 / total as f64
    }
}

/// Proportions are zero when the corresponding total is zero.
pub fn bucket_share_report(shares: &[ShareRecord]) -> BucketReport {
    let mut per_score: Vec<ScoreTotals> = (0..=7)
        .map(|score| ScoreTotals {
            score,
            ..Default::default()
        })
        .collect();
    let mut per_bucket: Vec<BucketTotals> = Bucket::ALL
        .iter()
        .map(|&bucket| BucketTotals {
            bucket,
            pages: 0,
            tweets: 0,
            exposure: 0,
            tweet_proportion: 0.0,
            exposure_proportion: 0.0,
            page_exposures: Vec::new(),
        })
        .collect();
    for s in shares {
        let st = &mut per_score[s.score as usize];
        st.pages += 1;
        st.tweets += s.tweet_count;
        st.exposure += s.potential_exposure;
        let bt = &mut per_bucket[s.bucket.index()];
        bt.pages += 1;
        bt.tweets += s.tweet_count;
        bt.exposure += s.potential_exposure;
        bt.page_exposures.push(s.potential_exposure);
    }
    let total_tweets: u64 = per_bucket.iter().map(|b| b.tweets).sum();
    let total_exposure: u64 = per_bucket.iter().map(|b| b.exposure).sum();
    for b in &mut per_bucket {
        b.tweet_proportion = share_of(b.tweets, total_tweets);
        b.exposure_proportion = share_of(b.exposure, total_exposure);
        b.page_exposures.sort_unstable_by(|x, y| y.cmp(x));
    }
    BucketReport {
        total_pages: shares.len() as u64,
        total_tweets,
        total_exposure,
        per_score,
        per_bucket,
    }
}

/// The `n` records with the largest exposure; ties by URL.
pub fn top_exposures(shares: &[ShareRecord], n: usize) -> Vec<ShareRecord> {
    let mut sorted = shares.to_vec();
    sorted.sort_by(|a, b| {
        b.potential_exposure
            .cmp(&a.potential_exposure)
            .then_with(|| a.url.cmp(&b.url))
    });
    sorted.truncate(n);
    sorted
}

/// Writes `exposure.csv` rows in the given order.
pub fn write_exposure_csv<W: io::Write>(rows: &[ShareRecord], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// The credibility profile of one posting user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    /// Followers at the user's most recent post.
    pub follower_count: u64,
    /// One score per shared scored link, in posting order.
    pub shared_scores: Vec<u8>,
    /// Counts of `shared_scores` by bucket: low, medium, high.
    pub bucket_counts: [usize; 3],
}

impl UserProfile {
    pub fn count(&self, bucket: Bucket) -> usize {
        self.bucket_counts[bucket.index()]
    }
}

/// Profiles for every user who posted at least one tweet.
pub fn build_user_profiles(
    tweets: &[TweetRecord],
    scored: &BTreeMap<String, CredibilityResult>,
) -> BTreeMap<String, UserProfile> {
    let mut order: Vec<&TweetRecord> = tweets.iter().collect();
    order.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.tweet_id.cmp(&b.tweet_id))
    });
    let mut out: BTreeMap<String, UserProfile> = BTreeMap::new();
    for t in order {
        let p = out.entry(t.user_id.clone()).or_insert_with(|| UserProfile {
            user_id: t.user_id.clone(),
            follower_count: 0,
            shared_scores: Vec::new(),
            bucket_counts: [0; 3],
        });
        p.follower_count = t.follower_count;
        for (_, r) in scored_urls(t, scored) {
            p.shared_scores.push(r.score);
            p.bucket_counts[r.bucket.index()] += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credibility::{score_from_labels, CriterionLabels};
    use chrono::{TimeZone, Utc};

    pub(crate) fn tweet(id: &str, user: &str, followers: u64, urls: &[&str]) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            user_id: user.into(),
            follower_count: followers,
            urls: urls.iter().map(|s| s.to_string()).collect(),
            is_retweet: false,
            retweet_of: None,
            timestamp: Utc
                .with_ymd_and_hms(2017, 6, 1, 0, 0, id.len() as u32)
                .unwrap(),
        }
    }

    fn scored(urls: &[(&str, u8)]) -> BTreeMap<String, CredibilityResult> {
        urls.iter()
            .map(|(u, mask)| {
                (
                    u.to_string(),
                    score_from_labels(CriterionLabels::from_mask(*mask)),
                )
            })
            .collect()
    }

    #[test]
    fn sums_followers() {
        let s = scored(&[("http://u.com/", 0), ("http://never.com/", 0)]);
        let t = vec![
            tweet("1", "a", 100, &["http://u.com/"]),
            tweet("2", "b", 50, &["http://U.com/#x"]),
            tweet("3", "c", 50, &["http://u.com/?utm_source=tw"]),
        ];
        let r = aggregate_shares(&t, &s);
        let never = r.iter().find(|x| x.url == "http://never.com/").unwrap();
        assert_eq!((never.tweet_count, never.potential_exposure), (0, 0));
        let u = r.iter().find(|x| x.url == "http://u.com/").unwrap();
        assert_eq!((u.tweet_count, u.potential_exposure), (3, 200));
    }

    #[test]
    fn multi_url_tweet_counts_each_once() {
        let s = scored(&[("http://u.com/", 0), ("http://v.com/", 0)]);
        let t = vec![tweet(
            "1",
            "a",
            7,
            &["http://u.com/", "http://v.com/", "http://u.com/"],
        )];
        let r = aggregate_shares(&t, &s);
        assert!(r
            .iter()
            .all(|x| x.tweet_count == 1 && x.potential_exposure == 7));
    }

    #[test]
    fn single_bucket_proportions() {
        let s = scored(&[("http://u.com/", 0), ("http://v.com/", 1)]);
        let t = vec![tweet("1", "a", 7, &["http://u.com/", "http://v.com/"])];
        let rep = bucket_share_report(&aggregate_shares(&t, &s));
        assert_eq!(rep.per_bucket[0].tweet_proportion, 1.0);
        assert_eq!(rep.per_bucket[0].exposure_proportion, 1.0);
        assert_eq!(rep.per_bucket[0].page_exposures, vec![7, 7]);
    }

    #[test]
    fn top_n_tie_by_url() {
        let rec = |u: &str, e: u64| ShareRecord {
            url: u.into(),
            tweet_count: 1,
            potential_exposure: e,
            score: 0,
            bucket: Bucket::Low,
        };
        let shares = vec![rec("U", 5), rec("W", 9), rec("V", 9)];
        let top: Vec<String> = top_exposures(&shares, 2)
            .into_iter()
            .map(|r| r.url)
            .collect();
        assert_eq!(top, ["V", "W"]);
        assert_eq!(top_exposures(&shares, 10).len(), 3);
    }

    #[test]
    fn profiles_track_buckets() {
        let s = scored(&[("http://low.com/", 0), ("http://high.com/", 0b11111)]);
        let t = vec![
            tweet("1", "a", 5, &["http://low.com/"]),
            tweet("22", "a", 9, &["http://high.com/", "http://low.com/"]),
            tweet("333", "b", 1, &["http://other.com/"]),
        ];
        let p = build_user_profiles(&t, &s);
        assert_eq!(p["a"].shared_scores, vec![0, 5, 0]);
        assert_eq!(p["a"].bucket_counts, [2, 0, 1]);
        assert_eq!(p["a"].follower_count, 9);
        assert!(p["b"].shared_scores.is_empty());
    }
}
