//! Coded device-to-device caching with reduced file packetization.
//!
//! The crate builds cache placements and XOR multicast delivery schedules for
//! two combinatorial designs and checks them symbolically:
//!
//! - [`hypercube`]: users cache hyperplanes of a `t`-dimensional lattice with
//!   `q = m/M` points per side; orthogonal hyperplane tuples form multicast
//!   groups. Includes the `c > 1` symmetric extension.
//! - [`decentralized`]: users pick one hypercube packet set at random and are
//!   served in rounds, plus the balls-into-bins calculators.
//! - [`rsgraph`]: placement and delivery driven by an induced-matching
//!   decomposition of a graph (Ruzsa-Szemeredi construction).
//! - [`spatial`]: grid geometry under the protocol model, clustering, reuse
//!   sets and clustered throughput/gap calculators.
//! - [`verify`]: byte-level XOR decoding over synthetic payloads and the
//!   memory / sender / decodability / recovery checks.
//! - [`cli`]: JSON scenario configs, result records and CSV sweeps behind the
//!   `d2dcache` binary.
//!
//! Rates, cache sizes and packet sizes are exact rationals with the file size
//! normalized to one.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` lists them.

pub mod cli;
pub mod decentralized;
pub mod error;
pub mod hypercube;
pub mod model;
pub mod rsgraph;
pub mod spatial;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    measured_rate, uncoded_rate, worst_case_demands, CacheAssignment, DeliverySchedule,
    DemandVector, GroupLabel, Locator, MulticastMessage, NetworkParams, PacketId, Rational,
};
