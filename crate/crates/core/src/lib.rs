//! Symmetric pebble-configuration powers `G[k]` of finite graphs.
//!
//! A vertex of `G[k]` is a placement of `k` indistinguishable pebbles on the
//! vertices of `G`; two placements are adjacent when one is reached from the
//! other by moving some pebbles, each across a single edge. The crate builds
//! `G[k]` explicitly, computes its independence number exactly, evaluates
//! the classical lower and upper bounds, and mechanically audits the
//! counting arguments specific to the 5-cycle.

pub mod bitset;
pub mod bounds;
pub mod c5_lab;
pub mod cli;
pub mod config_space;
pub mod graph;
pub mod mis_solver;
pub mod quotient;
pub mod transport;

pub use bitset::Bitset;
pub use config_space::{Configuration, TransportPlan};
pub use graph::{construct_named, parse_graph, Family, Graph, VertexSet};
pub use mis_solver::{Budget, IndependentSetCertificate, SolveReport};
pub use quotient::{build_quotient, strong_power_quotient_oracle, QuotientGraph};
