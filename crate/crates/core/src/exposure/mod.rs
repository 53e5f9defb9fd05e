//! Sharing, potential exposure and the follower network.

mod graph;
mod shares;

pub use self::graph::{
    build_follower_graph, classify_nodes, export_graph, largest_component, read_followers_csv,
    FollowerGraph, GraphFormat, GraphNode, NodeClass, DEFAULT_MIN_LINKS,
};
pub use self::shares::{
    aggregate_shares, bucket_share_report, build_user_profiles, top_exposures, write_exposure_csv,
    BucketReport, BucketTotals, ScoreTotals, ShareRecord, UserProfile,
};
