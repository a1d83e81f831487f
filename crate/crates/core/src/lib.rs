//! Exchangeable rewiring processes on finite graphs.
//!
//! A rewiring map assigns to every vertex pair a pair of bits `(w0, w1)`:
//! the pair's new status is `w0` if the edge was absent and `w1` if it was
//! present. Random rewiring maps drawn i.i.d. drive discrete-time graph
//! chains ([`chain`]); Poisson streams of rewiring maps and single-edge
//! updates drive continuous-time processes ([`ctmc`]). Closed-form
//! transition kernels and parametric rewiring laws live in [`measures`],
//! subgraph and rewiring-map densities in [`limits`], and [`verify`]
//! bundles the exact small-order checks into named suites.
//!
//! Vertex labels are 0-based in the API and 1-based in every text format.

pub mod chain;
pub mod config;
pub mod ctmc;
pub mod edgelist;
mod error;
pub mod graph;
pub mod limits;
pub mod measures;
pub mod pairs;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{compose, distance, Graph, PairArray, Permutation, RewiringMap};
