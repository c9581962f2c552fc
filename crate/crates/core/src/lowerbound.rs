//! Generators and verifiers for extremal lower-bound instances.

pub mod lattice;
pub mod layered;
pub mod verify;

pub use lattice::{build_sv_lowerbound, default_params, sparsest_params, LatticeParams};
pub use layered::{build_ce_base, build_layered_lowerbound};
pub use verify::{verify_lowerbound, VerificationReport};

use serde::{Deserialize, Serialize};

use crate::graph::{DemandSet, DirectedGraph, EdgeId, NodeId};

/// Per-node placement information of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "coords")]
pub enum NodePlacement {
    /// Lattice instances: abstract source nodes carry no point.
    Lattice(Vec<Option<(i64, i64)>>),
    /// Layered instances: (layer, base node id).
    Layered(Vec<(usize, NodeId)>),
    /// Grid bases: plain points.
    Grid(Vec<(i64, i64)>),
}

/// A generated lower-bound instance: the graph, its demands, node placement,
/// and one canonical path per demand pair.
#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub graph: DirectedGraph,
    pub demands: DemandSet,
    pub placement: NodePlacement,
    /// Edge-id path per demand pair, aligned with `demands.pairs()`.
    pub canonical_paths: Vec<Vec<EdgeId>>,
    /// Common demand-path length (set for grid bases and layered instances).
    pub common_distance: Option<usize>,
}
