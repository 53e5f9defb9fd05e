//! Fleiss' kappa for the bundled three-rater subset, on the three buckets
//! and on each criterion.
//!
//! ```text
//! cargo run --example rater_agreement
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use vaxcred::credibility::{score_from_labels, CriterionLabels, N_CRITERIA};
use vaxcred::eval::{count_table, fleiss_kappa};

fn main() -> vaxcred::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/ratings.csv");
    let mut rdr = csv::Reader::from_path(path)?;
    let mut by_url: BTreeMap<String, Vec<CriterionLabels>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let mut v = [0u8; N_CRITERIA];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = rec[i + 2]
                .parse()
                .map_err(|_| vaxcred::Error::InvalidInput(rec[i + 2].into()))?;
        }
        by_url
            .entry(rec[0].to_string())
            .or_default()
            .push(CriterionLabels::new(v)?);
    }

    let buckets: Vec<Vec<usize>> = by_url
        .values()
        .map(|rs| {
            rs.iter()
                .map(|l| score_from_labels(*l).bucket.index())
                .collect()
        })
        .collect();
    let k = fleiss_kappa(&count_table(&buckets, 3), 3)?;
    println!(
        "buckets: kappa {:.3} (95% CI {:.3} to {:.3}, p = {:.2e}) over {} pages",
        k.kappa, k.ci95.0, k.ci95.1, k.p_value, k.subjects
    );
    for c in 1..=N_CRITERIA {
        let a: Vec<Vec<usize>> = by_url
            .values()
            .map(|rs| rs.iter().map(|l| l.get(c) as usize).collect())
            .collect();
        match fleiss_kappa(&count_table(&a, 2), 3) {
            Ok(k) => println!(
                "criterion {c}: kappa {:.3} ± {:.3}",
                k.kappa, k.standard_error
            ),
            Err(e) => println!("criterion {c}: {e}"),
        }
    }
    Ok(())
}
