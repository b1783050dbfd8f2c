//! Monte-Carlo simulator of coordinated spatial reuse group selection in
//! multi-AP Wi-Fi networks, scheduled by hierarchical multi-armed bandits.
//!
//! The crate is organized bottom-up:
//!
//! - [`network`]: positions, walls, topologies, transmission sets
//! - [`channel`]: path loss, SINR, MCS rates and success curves
//! - [`txop`]: single-TXOP simulation and the effective-data-rate metric
//! - [`bandit`]: ε-greedy / Softmax / UCB / Thompson agents with discounting
//! - [`scheduler`]: hierarchical and flat bandit group selection, baselines
//! - [`scenario`]: square and randomized test topologies with mobility
//! - [`experiment`]: multi-seed runs, aggregation, fairness, tuning, CSV i/o
//! - [`rng`]: named deterministic sub-streams per master seed

// Validation deliberately writes `!(x > 0.0)` so that NaN fails the
// check the same way an out-of-range value does.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandit;
pub mod channel;
pub mod experiment;
pub mod network;
pub mod rng;
pub mod scenario;
pub mod scheduler;
pub mod txop;

pub use bandit::{Algorithm, BanditAgent, Hyperparams};
pub use channel::{ChannelParams, McsKey, McsTable};
pub use network::{ApId, Pair, Position, StationId, Topology, TransmissionSet, Wall};
pub use scenario::{RandomScenarioSpec, ScenarioScript};
pub use scheduler::{FlatScheduler, HierarchicalScheduler};
pub use txop::{TxopConfig, TxopResult};
