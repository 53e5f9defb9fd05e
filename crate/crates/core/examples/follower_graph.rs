//! Follower network of users who shared at least two scored pages,
//! restricted to its largest connected component and exported as GraphML.
//!
//! ```text
//! cargo run --example follower_graph [-- out.graphml]
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use vaxcred::credibility::{read_labels_csv, score_from_labels};
use vaxcred::exposure::{
    build_follower_graph, build_user_profiles, classify_nodes, export_graph, read_followers_csv,
    GraphFormat, NodeClass, DEFAULT_MIN_LINKS,
};
use vaxcred::ingest::parse_tweets;

fn main() -> vaxcred::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let tweets = parse_tweets(BufReader::new(File::open(fixtures.join("tweets.jsonl"))?))?;
    let scored: BTreeMap<_, _> = read_labels_csv(File::open(fixtures.join("labels.csv"))?)?
        .into_iter()
        .map(|(url, l)| (url, score_from_labels(l)))
        .collect();
    let edges = read_followers_csv(File::open(fixtures.join("followers.csv"))?)?;

    let profiles = build_user_profiles(&tweets.records, &scored);
    let graph = classify_nodes(build_follower_graph(&edges, &profiles, DEFAULT_MIN_LINKS));
    println!(
        "{} users with profiles; component of {} nodes and {} edges ({} edges to unknown users, {} below threshold)",
        profiles.len(),
        graph.nodes.len(),
        graph.edges.len(),
        graph.dropped_unknown,
        graph.dropped_filtered
    );
    for class in [
        NodeClass::HighSharer,
        NodeClass::LowSharer,
        NodeClass::Unclassified,
    ] {
        let n = graph.nodes.iter().filter(|n| n.class == class).count();
        println!("  {:<13} {n}", class.as_str());
    }
    let xml = export_graph(&graph, GraphFormat::GraphMl);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, xml)?,
        None => println!("{}", xml.lines().take(14).collect::<Vec<_>>().join("\n")),
    }
    Ok(())
}
