//! Reachability preservers of directed graphs.
//!
//! A reachability preserver of a graph `G` and a demand set `P` is a subgraph
//! `H` such that for every pair `(s, t)` in `P`, `s` reaches `t` in `H` iff it
//! does in `G`. This crate provides:
//!
//! * [`graph`] — the directed-graph carrier type, demand sets, reachability
//!   queries, SCC condensation, and the preserver verifier;
//! * [`decremental`] — decremental single-source reachability on DAGs with an
//!   undo journal, the workhorse of the randomized construction;
//! * [`bounds`] — the extremal size bounds `O(n + sqrt(n p s))` and
//!   `O(n + (np)^{2/3})`, evaluated in exact integer arithmetic;
//! * [`preserver`] — the multi-universe randomized construction, a greedy
//!   single-pass pruner, and a brute-force optimum oracle for small instances;
//! * [`geom`] — exact integer lattice geometry (convex hulls of disc lattice
//!   points, cone membership tests);
//! * [`lowerbound`] — generators and verifiers for extremal lower-bound
//!   instances (skewed-lattice source-restricted instances, grid bases with
//!   unique shortest paths, and their layered directed versions);
//! * [`dsn`] — desk-scale unweighted Directed Steiner Network approximation
//!   via the thick/thin pair framework on top of the preserver machinery;
//! * [`gen`] — seeded random instance generators for fixtures and benchmarks.

pub mod bounds;
pub mod decremental;
pub mod dsn;
pub mod error;
pub mod gen;
pub mod geom;
pub mod graph;
pub mod lowerbound;
pub mod preserver;
pub mod rng;
pub mod scc;

pub use error::Error;
pub use graph::{DemandSet, DirectedGraph, EdgeId, NodeId};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
