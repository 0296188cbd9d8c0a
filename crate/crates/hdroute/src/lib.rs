//! Packet-level traffic simulation on complex networks with hierarchical
//! dynamic bypass routing.
//!
//! The crate is organized around five pieces:
//!
//! - [`graph`]: topology generation/loading, betweenness centrality, stats
//! - [`routing`]: shortest-path DAGs, the beta-parameterized bypass
//!   next-hop tables, least-degree tables, bypass degeneracy
//! - [`traffic`]: the discrete-time queueing simulator and congestion
//!   metrics (order parameter, critical rate)
//! - [`agent`]: per-node Q-learning (network, replay, training loop)
//! - [`experiment`]: scenario configs, sweep/census/resilience/report
//!   runners and their CSV outputs
//!
//! With the default `parallel` feature, betweenness accumulation, routing
//! table construction, all-pairs statistics and sweep grids run on rayon;
//! results are identical to the sequential build.

pub mod agent;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod rng;
pub mod routing;
pub mod traffic;

pub use error::{Error, Result};
