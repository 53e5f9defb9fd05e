//! Follower network among users who shared scored links.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::shares::UserProfile;
use crate::credibility::Bucket;
use crate::error::{Error, Result};

pub const DEFAULT_MIN_LINKS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeClass {
    /// At least two high-credibility shares and no low ones.
    HighSharer,
    /// At least two low-credibility shares and no high ones.
    LowSharer,
    Unclassified,
}

impl NodeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeClass::HighSharer => "high_sharer",
            NodeClass::LowSharer => "low_sharer",
            NodeClass::Unclassified => "unclassified",
        }
    }

    pub fn of(profile: &UserProfile) -> Self {
        let (low, high) = (profile.count(Bucket::Low), profile.count(Bucket::High));
        let is_high = high >= 2 && low == 0;
        let is_low = low >= 2 && high == 0;
        debug_assert!(!(is_high && is_low));
        match (is_high, is_low) {
            (true, _) => NodeClass::HighSharer,
            (_, true) => NodeClass::LowSharer,
            _ => NodeClass::Unclassified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub profile: UserProfile,
    pub class: NodeClass,
}

impl GraphNode {
    pub fn user_id(&self) -> &str {
        &self.profile.user_id
    }
}

/// Directed follower → followee graph, nodes sorted by user id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowerGraph {
    pub nodes: Vec<GraphNode>,
    /// `(follower, followee)` node indices, sorted and unique.
    pub edges: Vec<(usize, usize)>,
    /// Input edges naming a user with no profile.
    pub dropped_unknown: usize,
    /// Input edges touching a user below the share threshold.
    pub dropped_filtered: usize,
}

impl FollowerGraph {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, user_id: &str) -> Option<&GraphNode> {
        self.nodes
            .binary_search_by(|n| n.user_id().cmp(user_id))
            .ok()
            .map(|i| &self.nodes[i])
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Members of the largest weakly connected component of `0..n`. Among
/// equal-size components the one holding the smallest index wins.
pub fn largest_component(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut ds = DisjointSet::new(n);
    for &(a, b) in edges {
        ds.union(a, b);
    }
    let mut size = vec![0usize; n];
    let mut first = vec![usize::MAX; n];
    for i in 0..n {
        let r = ds.find(i);
        size[r] += 1;
        first[r] = first[r].min(i);
    }
    let best = (0..n)
        .filter(|&r| size[r] > 0)
        .max_by(|&a, &b| size[a].cmp(&size[b]).then(first[b].cmp(&first[a])))
        .expect("non-empty");
    (0..n).filter(|&i| ds.find(i) == best).collect()
}

/// Keeps users with at least `min_links` scored shares, restricted to the
/// largest connected component of the undirected projection. Nodes are
/// left unclassified; see [`classify_nodes`].
pub fn build_follower_graph(
    edges: &[(String, String)],
    profiles: &BTreeMap<String, UserProfile>,
    min_links: usize,
) -> FollowerGraph {
    let kept: Vec<&UserProfile> = profiles
        .values()
        .filter(|p| p.shared_scores.len() >= min_links)
        .collect();
    let index: BTreeMap<&str, usize> = kept
        .iter()
        .enumerate()
        .map(|(i, p)| (p.user_id.as_str(), i))
        .collect();
    let mut dropped_unknown = 0;
    let mut dropped_filtered = 0;
    let mut pairs = BTreeSet::new();
    for (a, b) in edges {
        if !profiles.contains_key(a) || !profiles.contains_key(b) {
            dropped_unknown += 1;
            continue;
        }
        match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&x), Some(&y)) if x != y => {
                pairs.insert((x, y));
            }
            (Some(_), Some(_)) => {}
            _ => dropped_filtered += 1,
        }
    }
    let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
    let members = largest_component(kept.len(), &pairs);
    let mut remap = vec![usize::MAX; kept.len()];
    for (new, &old) in members.iter().enumerate() {
        remap[old] = new;
    }
    let nodes = members
        .iter()
        .map(|&i| GraphNode {
            profile: kept[i].clone(),
            class: NodeClass::Unclassified,
        })
        .collect();
    let edges = pairs
        .into_iter()
        .filter(|&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
        .map(|(a, b)| (remap[a], remap[b]))
        .collect();
    FollowerGraph {
        nodes,
        edges,
        dropped_unknown,
        dropped_filtered,
    }
}

pub fn classify_nodes(mut graph: FollowerGraph) -> FollowerGraph {
    for n in &mut graph.nodes {
        n.class = NodeClass::of(&n.profile);
    }
    graph
}

/// Reads `followers.csv` (`follower_id,followee_id`); a header row is
/// detected and skipped.
pub fn read_followers_csv<R: io::Read>(r: R) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "followers row {} has {} fields",
                i + 1,
                rec.len()
            )));
        }
        if i == 0
            && rec[0].eq_ignore_ascii_case("follower_id")
            && rec[1].eq_ignore_ascii_case("followee_id")
        {
            continue;
        }
        out.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Serializes the graph. Node size is the follower count.
pub fn export_graph(graph: &FollowerGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::GraphMl => to_graphml(graph),
        GraphFormat::Dot => to_dot(graph),
    }
}

fn to_graphml(g: &FollowerGraph) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    for (id, ty) in [
        ("user_id", "string"),
        ("follower_count", "long"),
        ("class", "string"),
        ("size", "long"),
        ("low_shares", "int"),
        ("medium_shares", "int"),
        ("high_shares", "int"),
    ] {
        let _ = writeln!(
            s,
            "  <key id=\"{id}\" for=\"node\" attr.name=\"{id}\" attr.type=\"{ty}\"/>"
        );
    }
    s.push_str("  <graph id=\"followers\" edgedefault=\"directed\">\n");
    for n in &g.nodes {
        let id = xml_escape(n.user_id());
        let p = &n.profile;
        let _ = writeln!(s, "    <node id=\"{id}\">");
        let _ = writeln!(s, "      <data key=\"user_id\">{id}</data>");
        let _ = writeln!(
            s,
            "      <data key=\"follower_count\">{}</data>",
            p.follower_count
        );
        let _ = writeln!(s, "      <data key=\"class\">{}</data>", n.class.as_str());
        let _ = writeln!(s, "      <data key=\"size\">{}</data>", p.follower_count);
        let _ = writeln!(
            s,
            "      <data key=\"low_shares\">{}</data>",
            p.bucket_counts[0]
        );
        let _ = writeln!(
            s,
            "      <data key=\"medium_shares\">{}</data>",
            p.bucket_counts[1]
        );
        let _ = writeln!(
            s,
            "      <data key=\"high_shares\">{}</data>",
            p.bucket_counts[2]
        );
        s.push_str("    </node>\n");
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(
            s,
            "    <edge source=\"{}\" target=\"{}\"/>",
            xml_escape(g.nodes[a].user_id()),
            xml_escape(g.nodes[b].user_id())
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

fn to_dot(g: &FollowerGraph) -> String {
    let mut s = String::from("digraph followers {\n");
    for n in &g.nodes {
        let p = &n.profile;
        let _ = writeln!(
            s,
            "  \"{}\" [user_id=\"{}\", follower_count={}, class=\"{}\", size={}, low_shares={}, medium_shares={}, high_shares={}];",
            dot_escape(n.user_id()),
            dot_escape(n.user_id()),
            p.follower_count,
            n.class.as_str(),
            p.follower_count,
            p.bucket_counts[0],
            p.bucket_counts[1],
            p.bucket_counts[2],
        );
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(
            s,
            "  \"{}\" -> \"{}\";",
            dot_escape(g.nodes[a].user_id()),
            dot_escape(g.nodes[b].user_id())
        );
    }
    s.push_str("}\n");
    s
}
