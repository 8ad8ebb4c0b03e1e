//! Simulation and analysis of k-connectivity in secure wireless sensor
//! networks using Eschenauer–Gligor random key predistribution over
//! unreliable (on/off) links.
//!
//! The network model is an intersection of two random graphs on the same
//! `n` nodes: the random key graph (nodes share a key iff their randomly
//! assigned key rings intersect) and an Erdős–Rényi graph of independently
//! operational channels. The crate provides:
//!
//! - [`models`]: exact edge-probability formulas and seeded samplers for
//!   the key graph, the channel graph, and their intersection;
//! - [`connectivity`]: exact k-connectivity decisions (degree gates, DFS
//!   certificates, Menger-style max-flow) plus a brute-force oracle;
//! - [`analysis`]: the closed-form asymptotic probability of
//!   k-connectivity, Poisson degree-count means, and key-ring
//!   dimensioning;
//! - [`experiment`]: a deterministic parallel Monte Carlo harness that
//!   compares empirical frequencies with the analytical predictions and
//!   renders CSV/JSON;
//! - [`graph`]: the shared compact undirected graph type.

pub mod analysis;
pub mod connectivity;
pub mod experiment;
pub mod graph;
pub mod models;

pub use analysis::{predict, Prediction};
pub use connectivity::{is_k_connected, ConnectivityVerdict};
pub use experiment::{run_sweep, CellResult, SweepConfig};
pub use graph::Graph;
pub use models::ModelParams;
