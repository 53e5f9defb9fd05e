//! Regenerates the bundled fixture under `fixtures/`.
//!
//! ```text
//! cargo run --example make_fixture [-- <dir>]
//! ```

use std::path::PathBuf;

use vaxcred::synth::{build_fixture, FixtureConfig};

fn main() -> vaxcred::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    let fixture = build_fixture(&FixtureConfig::default());
    fixture.write_to(&dir)?;
    println!(
        "wrote {} pages, {} labels, {} tweets, {} follower edges to {}",
        fixture.pages.len(),
        fixture.labels.len(),
        fixture.tweets.len(),
        fixture.followers.len(),
        dir.display()
    );
    Ok(())
}
