//! Structural analysis of scatter networks: bipartite graphs linking facts
//! to the documents (pages) that contain them.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats,
//! reports and the command line live in the companion `scatter` crate.
//!
//! Nodes are stored in lexicographic order of their ids, and every
//! algorithm iterates in that order, so all results (including the
//! seeded stochastic ones) are reproducible bit for bit.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod community;
pub mod graph;
pub mod metrics;
pub mod null_model;
pub mod proximity;
pub mod rng;
pub mod robustness;
pub mod surfer;

pub use graph::{
    BipartiteGraph, ComponentAssignment, GraphError, NodeDecl, NodeId, NodeKind, NodeMeta,
    WeightedProjection,
};
