//! Grid base instances with unique shortest paths and their layered directed
//! versions.
//!
//! The base is an undirected-as-symmetric grid graph whose edge set is
//! exactly the union of straight demand paths: every demand walks a fixed
//! step vector the same number of times, so all demands share one distance,
//! each shortest path is unique, and the paths are pairwise edge-disjoint.
//! Layering copies the base `2L` times, directs every base edge across
//! consecutive copies (both orientations), and asks for reachability between
//! copies `L` apart — any non-shortest detour overshoots its target layer.

use std::collections::HashMap;

use crate::error::Error;
use crate::geom::{cross, Point};
use crate::graph::{DemandSet, DirectedGraph, EdgeId, NodeId};
use crate::lowerbound::{LowerBoundInstance, NodePlacement};
use crate::Result;

/// Step vectors of the base paths: the strictly-positive hull vertices of
/// the radius-√5 disc, so projections of distinct steps are strictly smaller
/// than the step norm (the unique-shortest-path argument).
const BASE_STEPS: [Point; 2] = [(2, 1), (1, 2)];

/// Builds a `side × side` grid base carrying `pairs` straight demand paths,
/// all of one common length, unique and edge-disjoint.
pub fn build_ce_base(side: usize, pairs: usize) -> Result<LowerBoundInstance> {
    if side < 3 {
        return Err(Error::params("side must be at least 3"));
    }
    if pairs == 0 {
        return Err(Error::params("need at least one pair"));
    }
    let k = ((side - 1) / 2) as i64;
    if k < 1 {
        return Err(Error::params(format!("side {side} leaves no room for a path")));
    }
    let side_i = side as i64;

    // Pick start points round-robin over step directions, one line each so
    // paths in a common direction never share an edge.
    let mut used_lines: [HashMap<i128, ()>; 2] = [HashMap::new(), HashMap::new()];
    let mut cursor: [usize; 2] = [0, 0];
    let all_points: Vec<Point> = (0..side_i)
        .flat_map(|y| (0..side_i).map(move |x| (x, y)))
        .collect();
    let mut chosen: Vec<(Point, usize)> = Vec::new();
    'outer: for i in 0..pairs {
        let prefer = i % BASE_STEPS.len();
        for probe in 0..BASE_STEPS.len() {
            let di = (prefer + probe) % BASE_STEPS.len();
            let step = BASE_STEPS[di];
            while cursor[di] < all_points.len() {
                let p = all_points[cursor[di]];
                cursor[di] += 1;
                let end = (p.0 + k * step.0, p.1 + k * step.1);
                if end.0 >= side_i || end.1 >= side_i {
                    continue;
                }
                let line = cross(step, p);
                if used_lines[di].insert(line, ()).is_some() {
                    continue;
                }
                chosen.push((p, di));
                continue 'outer;
            }
        }
        return Err(Error::params(format!(
            "infeasible (side, p) combination: only {} disjoint paths fit in a {side}x{side} grid",
            chosen.len()
        )));
    }

    // The edge set is exactly the union of the paths, symmetrized.
    let id = |p: Point| -> NodeId { (p.1 * side_i + p.0) as NodeId };
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut edge_id: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
    let add_arc = |edges: &mut Vec<(NodeId, NodeId)>,
                       edge_id: &mut HashMap<(NodeId, NodeId), EdgeId>,
                       u: NodeId,
                       v: NodeId| {
        edge_id.entry((u, v)).or_insert_with(|| {
            edges.push((u, v));
            edges.len() - 1
        });
    };
    let mut demand_pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut canonical_paths: Vec<Vec<EdgeId>> = Vec::new();
    for &(start, di) in &chosen {
        let step = BASE_STEPS[di];
        let mut cur = start;
        let mut path = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let nxt = (cur.0 + step.0, cur.1 + step.1);
            add_arc(&mut edges, &mut edge_id, id(cur), id(nxt));
            add_arc(&mut edges, &mut edge_id, id(nxt), id(cur));
            path.push(edge_id[&(id(cur), id(nxt))]);
            cur = nxt;
        }
        demand_pairs.push((id(start), id(cur)));
        canonical_paths.push(path);
    }

    let graph = DirectedGraph::from_edges(side * side, edges)?;
    let demands = DemandSet::new(demand_pairs, None)?;
    debug_assert_eq!(demands.len(), canonical_paths.len());

    Ok(LowerBoundInstance {
        graph,
        demands,
        placement: NodePlacement::Grid(all_points),
        canonical_paths,
        common_distance: Some(k as usize),
    })
}

/// Layers a base instance: `layers = 2L` copies with every base edge
/// directed across consecutive copies in both orientations, and demands
/// `(s_j, t_{j+L})` for `j = 0..L` per base demand.
pub fn build_layered_lowerbound(
    base: &LowerBoundInstance,
    layers: usize,
) -> Result<LowerBoundInstance> {
    let common = base
        .common_distance
        .ok_or_else(|| Error::contract("base instance has no common distance"))?;
    if layers != 2 * common {
        return Err(Error::params(format!(
            "layer count {layers} does not match 2L = {}",
            2 * common
        )));
    }
    let l = common;
    let n_base = base.graph.node_count();

    // Undirected base edges: each symmetric arc pair collapses to (u < v).
    let mut undirected: Vec<(NodeId, NodeId)> = Vec::new();
    let mut seen: HashMap<(NodeId, NodeId), ()> = HashMap::new();
    for &(u, v) in base.graph.edges() {
        let key = (u.min(v), u.max(v));
        if seen.insert(key, ()).is_none() {
            undirected.push(key);
        }
    }

    let node = |layer: usize, x: NodeId| -> NodeId { layer * n_base + x };
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut edge_id: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
    for layer in 0..layers - 1 {
        for &(u, v) in &undirected {
            for (a, b) in [(u, v), (v, u)] {
                let arc = (node(layer, a), node(layer + 1, b));
                edge_id.insert(arc, edges.len());
                edges.push(arc);
            }
        }
    }

    // Base canonical paths as node sequences.
    let mut demand_pairs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut canonical_paths: Vec<Vec<EdgeId>> = Vec::new();
    for (pi, &(s, t)) in base.demands.pairs().iter().enumerate() {
        let path_nodes = path_nodes(&base.graph, s, &base.canonical_paths[pi]);
        debug_assert_eq!(*path_nodes.last().unwrap(), t);
        debug_assert_eq!(path_nodes.len(), l + 1);
        for j in 0..l {
            demand_pairs.push((node(j, s), node(j + l, t)));
            let mut path = Vec::with_capacity(l);
            for (i, w) in path_nodes.windows(2).enumerate() {
                let arc = (node(j + i, w[0]), node(j + i + 1, w[1]));
                path.push(edge_id[&arc]);
            }
            canonical_paths.push(path);
        }
    }

    let graph = DirectedGraph::from_edges(layers * n_base, edges)?;
    let demands = DemandSet::new(demand_pairs, None)?;
    debug_assert_eq!(demands.len(), canonical_paths.len());

    let placement: Vec<(usize, NodeId)> = (0..layers * n_base)
        .map(|v| (v / n_base, v % n_base))
        .collect();

    Ok(LowerBoundInstance {
        graph,
        demands,
        placement: NodePlacement::Layered(placement),
        canonical_paths,
        common_distance: Some(l),
    })
}

/// Expands an edge-id path starting at `s` into its node sequence.
pub fn path_nodes(g: &DirectedGraph, s: NodeId, path: &[EdgeId]) -> Vec<NodeId> {
    let mut nodes = vec![s];
    for &e in path {
        debug_assert_eq!(g.tail(e), *nodes.last().unwrap());
        nodes.push(g.head(e));
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_a_straight_path() {
        let inst = build_ce_base(6, 1).unwrap();
        assert_eq!(inst.demands.len(), 1);
        assert_eq!(inst.common_distance, Some(2));
        // Edge set is the union of the one path, both directions.
        assert_eq!(inst.graph.edge_count(), 4);
    }

    #[test]
    fn base_edge_count_is_sum_of_path_lengths() {
        let inst = build_ce_base(8, 6).unwrap();
        let total: usize = inst.canonical_paths.iter().map(|p| p.len()).sum();
        // Symmetrized: two arcs per undirected path edge, disjoint paths.
        assert_eq!(inst.graph.edge_count(), 2 * total);
    }

    #[test]
    fn infeasible_combination_is_rejected() {
        let err = build_ce_base(4, 50).unwrap_err();
        assert!(err.to_string().contains("infeasible"));
    }

    #[test]
    fn layered_single_path_has_unique_two_edge_demands() {
        let base = build_ce_base(6, 1).unwrap();
        let inst = build_layered_lowerbound(&base, 4).unwrap();
        assert_eq!(inst.demands.len(), 2); // L = 2 offsets
        for path in &inst.canonical_paths {
            assert_eq!(path.len(), 2);
        }
        // Every demand pair is reachable along its canonical path.
        for (i, &(s, t)) in inst.demands.pairs().iter().enumerate() {
            let nodes = path_nodes(&inst.graph, s, &inst.canonical_paths[i]);
            assert_eq!(*nodes.last().unwrap(), t);
        }
    }

    #[test]
    fn layered_rejects_wrong_layer_count() {
        let base = build_ce_base(6, 2).unwrap();
        assert!(build_layered_lowerbound(&base, 6).is_err());
    }

    #[test]
    fn layered_edges_cross_one_layer() {
        let base = build_ce_base(6, 4).unwrap();
        let inst = build_layered_lowerbound(&base, 4).unwrap();
        let n_base = base.graph.node_count();
        for &(u, v) in inst.graph.edges() {
            assert_eq!(v / n_base, u / n_base + 1);
        }
        assert!(inst.graph.is_acyclic());
    }
}
