//! Doubly rooted neighborhoods of edges, their isomorphism types, and
//! distributions over types.

mod ball;
mod canon;
mod dist;

pub use ball::{ball_extract, BallExtractor, BallGraph};
pub use canon::{canonical_labeling, canonicalize, TypeId};
pub use dist::{
    count_complete_types, edge_type_counts, edge_type_distribution, rescaled_distribution,
    sampled_type_counts, tv_distance, TypeCounts, TypeDistribution,
};
