//! Limited-attention centrality.
//!
//! Limited-attention variants of PageRank and Alpha-Centrality scale the
//! probability that a node receives a message (or a random walker) by the
//! inverse of its in-degree: a node that follows many others divides its
//! attention among them. This crate provides
//!
//! - [`graph`]: immutable directed graphs, edge-list ingestion, degree
//!   conditioning and seeded generators;
//! - [`centrality`]: exact fixed-point solvers for PR, laPR, AC and laAC, a
//!   spectral-radius estimator gating the broadcast measures, and a dense
//!   direct solver used as a test oracle;
//! - [`push`]: residual-push approximations with a per-node `(1 - δ)`
//!   guarantee and runtime checks of the residual invariant;
//! - [`eval`]: empirical influence from broadcast logs, Spearman rank
//!   correlation, error metrics, tolerance sweeps and a limited-attention
//!   cascade simulator.

pub mod centrality;
pub mod error;
pub mod eval;
pub mod graph;
pub mod push;

pub use centrality::{CentralityParams, Measure, ScoreVector, StartingVector};
pub use error::{Error, Result};
pub use graph::{DegreeConditioning, DirectedGraph};
pub use push::{PushParams, PushStats};
