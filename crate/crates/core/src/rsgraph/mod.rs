//! Graph-driven caching over induced matchings.
//!
//! Each user is a vertex. A file is cut into `2γ-1` slots per vertex; users
//! cache their own vertex and every non-neighbor. Each induced matching of
//! size `γ` forms a multicast group of `2γ` users in which every member sends
//! one XOR of `2γ-1` packets.

mod construct;
mod decompose;
mod graph;
mod scheme;

pub use construct::{
    degree_lower_bound, rs_asymptotics, rs_construct, rs_memory_bound, rs_uncoded_gap,
    MemoryBound, RsAsymptotics, RsConstructionParams, RS_VERTEX_CAP,
};
pub use decompose::{is_edge_partition, rs_decompose, verify_rs_property, Matching, RsDecomposition};
pub use graph::Graph;
pub use scheme::{
    fig5_fixture, graph_memory, matching_messages, packet_number, residual_surcharge, rs_delivery,
    rs_packetization, rs_placement, rs_rate, rs_total_rate, vertex_slot,
};
