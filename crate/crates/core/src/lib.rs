//! Online stochastic bipartite matching in the probe-commit model.
//!
//! The toolkit has three layers:
//!
//! * **Instances** ([`model`]): stochastic graphs whose edges are active
//!   independently with known probabilities, with a downward-closed probing
//!   constraint per online vertex (patience, knapsack, or an explicit set
//!   family), plus known-i.d. inputs (a type graph with per-arrival type
//!   distributions).
//! * **Solvers** ([`star`], [`simplex`], [`lp`]): the optimal single-vertex
//!   probing DP, a dense two-phase simplex, and the configuration LP solved
//!   by column generation with the DP as pricing oracle, together with the
//!   comparison LPs used for benchmarking.
//! * **Algorithms and benchmarks** ([`rounding`], [`crs`], [`online`],
//!   [`oracles`]): exact randomized rounding of LP solutions, rank-1
//!   contention resolution schemes, every online probing algorithm, and
//!   brute-force ground truth at tiny scale.
//!
//! All randomness flows from explicit seeds through [`rng::stream`], so every
//! simulation is reproducible.

pub mod crs;
pub mod generate;
pub mod lp;
pub mod model;
pub mod online;
pub mod oracles;
pub mod rng;
pub mod rounding;
pub mod schema;
pub mod simplex;
pub mod star;
pub mod stats;

pub use model::{
    EdgeStateSample, EdgeString, KnownIdInput, ModelError, OnlineVertex, ProbingConstraint,
    StochasticGraph,
};
