//! Strongly connected components, condensation, and preserver expansion.
//!
//! The condensation maps a general digraph to a DAG over SCC ids together
//! with everything needed to lift a condensed preserver back to the original
//! graph: a strong skeleton per SCC and one representative original edge per
//! condensed edge.

use std::collections::HashMap;

use crate::error::Error;
use crate::graph::{DemandSet, DirectedGraph, EdgeId, NodeId};
use crate::Result;

/// The condensation of a digraph.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// DAG over SCC ids. Edge `(C1, C2)` exists iff some original edge
    /// crosses from `C1` to `C2`.
    pub dag: DirectedGraph,
    /// Original node id → SCC id.
    pub node_to_scc: Vec<usize>,
    /// SCC id → member nodes, ascending.
    pub scc_members: Vec<Vec<NodeId>>,
    /// Original edge ids forming per-SCC strong skeletons
    /// (≤ 2(|C| − 1) edges per component).
    pub skeleton_edges: Vec<EdgeId>,
    /// Condensed edge id → one original crossing edge id.
    pub edge_representatives: Vec<EdgeId>,
}

/// Iterative Tarjan SCC. Returns (scc count, node → scc id). Components are
/// numbered in reverse topological order of the condensation.
pub fn tarjan_scc(g: &DirectedGraph) -> (usize, Vec<usize>) {
    const UNSET: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // Explicit DFS stack of (node, next out-edge position) to survive deep graphs.
    let mut call: Vec<(NodeId, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&e) = g.out_edges(v).get(*pos) {
                *pos += 1;
                let w = g.head(e);
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    (comp_count, comp)
}

/// Condenses `g` and maps the demand set through the SCC contraction.
///
/// The returned demands are deduplicated with same-SCC pairs removed; dag
/// edges are deduplicated with one original crossing edge recorded each.
pub fn condense(g: &DirectedGraph, demands: &DemandSet) -> Result<(Condensation, DemandSet)> {
    let (scc_count, node_to_scc) = tarjan_scc(g);
    let mut scc_members = vec![Vec::new(); scc_count];
    for v in 0..g.node_count() {
        scc_members[node_to_scc[v]].push(v);
    }

    let mut dag_edges: Vec<(usize, usize)> = Vec::new();
    let mut representatives: Vec<EdgeId> = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        let (cu, cv) = (node_to_scc[u], node_to_scc[v]);
        if cu == cv {
            continue;
        }
        seen.entry((cu, cv)).or_insert_with(|| {
            dag_edges.push((cu, cv));
            representatives.push(id);
            dag_edges.len() - 1
        });
    }
    let dag = DirectedGraph::from_edges(scc_count, dag_edges)?;
    debug_assert!(dag.is_acyclic(), "condensation must be a DAG");

    let mut skeleton = Vec::new();
    for members in &scc_members {
        if members.len() > 1 {
            strong_skeleton(g, &node_to_scc, members, &mut skeleton);
        }
    }

    let mapped_pairs: Vec<(usize, usize)> = demands
        .pairs()
        .iter()
        .map(|&(s, t)| (node_to_scc[s], node_to_scc[t]))
        .collect();
    let mapped_sources = demands.declared_sources().map(|src| {
        let mut out: Vec<usize> = Vec::new();
        for &s in src {
            let c = node_to_scc[s];
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    });
    // DemandSet::new performs the dedup and same-SCC (s = t) drops.
    let mapped = DemandSet::new(mapped_pairs, mapped_sources)?;

    Ok((
        Condensation {
            dag,
            node_to_scc,
            scc_members,
            skeleton_edges: skeleton,
            edge_representatives: representatives,
        },
        mapped,
    ))
}

/// Appends a strong skeleton of one SCC: an out-arborescence plus an
/// in-arborescence rooted at the first member, restricted to intra-SCC edges.
/// Costs at most 2(|C| − 1) edges.
fn strong_skeleton(
    g: &DirectedGraph,
    node_to_scc: &[usize],
    members: &[NodeId],
    out: &mut Vec<EdgeId>,
) {
    let root = members[0];
    let comp = node_to_scc[root];
    let mut chosen = std::collections::HashSet::new();

    // BFS forward from the root along intra-component edges.
    let mut seen: HashMap<NodeId, ()> = HashMap::new();
    seen.insert(root, ());
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let v = g.head(e);
            if node_to_scc[v] == comp && !seen.contains_key(&v) {
                seen.insert(v, ());
                chosen.insert(e);
                queue.push_back(v);
            }
        }
    }
    debug_assert_eq!(seen.len(), members.len(), "SCC must be strongly connected");

    // BFS backward from the root.
    let mut seen_rev: HashMap<NodeId, ()> = HashMap::new();
    seen_rev.insert(root, ());
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &e in g.in_edges(v) {
            let u = g.tail(e);
            if node_to_scc[u] == comp && !seen_rev.contains_key(&u) {
                seen_rev.insert(u, ());
                chosen.insert(e);
                queue.push_back(u);
            }
        }
    }
    debug_assert_eq!(seen_rev.len(), members.len());

    let mut edges: Vec<EdgeId> = chosen.into_iter().collect();
    edges.sort_unstable();
    out.extend(edges);
}

/// Lifts a condensed preserver back to original edge ids: the per-SCC
/// skeletons plus one representative original edge per kept condensed edge.
/// The result is sorted.
pub fn expand_preserver(c: &Condensation, condensed_edges: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut out: Vec<EdgeId> = c.skeleton_edges.clone();
    for &ce in condensed_edges {
        let rep = *c
            .edge_representatives
            .get(ce)
            .ok_or_else(|| Error::contract(format!("unknown condensed edge id {ce}")))?;
        out.push(rep);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_preserver;

    #[test]
    fn three_cycle_condenses_to_single_node() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = DemandSet::new(vec![(0, 1)], None).unwrap();
        let (c, mapped) = condense(&g, &d).unwrap();
        assert_eq!(c.dag.node_count(), 1);
        assert_eq!(c.dag.edge_count(), 0);
        assert!(mapped.is_empty());
        assert!(c.skeleton_edges.len() <= 4);
        // The skeleton alone must preserve the in-component demand.
        assert!(is_preserver(&g, &c.skeleton_edges, &d));
    }

    #[test]
    fn dag_condenses_to_itself() {
        let g = DirectedGraph::from_edges(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let d = DemandSet::new(vec![(0, 2)], None).unwrap();
        let (c, mapped) = condense(&g, &d).unwrap();
        assert_eq!(c.dag.node_count(), 4);
        assert_eq!(c.dag.edge_count(), 3);
        assert!(c.skeleton_edges.is_empty());
        assert_eq!(mapped.len(), 1);
        // Edges map one-to-one onto representatives.
        let mut reps = c.edge_representatives.clone();
        reps.sort_unstable();
        assert_eq!(reps, vec![0, 1, 2]);
    }

    #[test]
    fn two_two_cycles_joined() {
        // Nodes {0,1} and {2,3} are 2-cycles, joined by edge (1, 2).
        let g = DirectedGraph::from_edges(
            4,
            [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)],
        )
        .unwrap();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        let (c, mapped) = condense(&g, &d).unwrap();
        assert_eq!(c.dag.node_count(), 2);
        assert_eq!(c.dag.edge_count(), 1);
        let cs = c.node_to_scc[0];
        let ct = c.node_to_scc[3];
        assert_eq!(mapped.pairs(), &[(cs, ct)]);
        // Expanding the full condensed edge set yields a valid preserver.
        let kept = expand_preserver(&c, &[0]).unwrap();
        assert!(is_preserver(&g, &kept, &d));
        // Skeletons: two 2-cycles cost 2 edges each.
        assert_eq!(c.skeleton_edges.len(), 4);
    }

    #[test]
    fn expand_on_dag_with_empty_set_is_empty() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let d = DemandSet::new(vec![], None).unwrap();
        let (c, _) = condense(&g, &d).unwrap();
        assert!(expand_preserver(&c, &[]).unwrap().is_empty());
    }

    #[test]
    fn expand_on_cycle_returns_skeleton_only() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = DemandSet::new(vec![], None).unwrap();
        let (c, _) = condense(&g, &d).unwrap();
        let kept = expand_preserver(&c, &[]).unwrap();
        assert_eq!(kept, c.skeleton_edges);
        assert!(!kept.is_empty());
    }

    #[test]
    fn expand_rejects_unknown_condensed_edge() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let d = DemandSet::new(vec![], None).unwrap();
        let (c, _) = condense(&g, &d).unwrap();
        assert!(expand_preserver(&c, &[99]).is_err());
    }

    #[test]
    fn tarjan_on_deep_path_does_not_overflow() {
        let n = 200_000;
        let g = DirectedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        let (count, _) = tarjan_scc(&g);
        assert_eq!(count, n);
    }

    #[test]
    fn skeleton_budget_within_two_n() {
        let mut edges = Vec::new();
        // Two interlocking cycles sharing node 0, plus a tail.
        for w in [vec![0, 1, 2, 3], vec![0, 4, 5]] {
            for i in 0..w.len() {
                edges.push((w[i], w[(i + 1) % w.len()]));
            }
        }
        edges.push((3, 6));
        let g = DirectedGraph::from_edges(7, edges).unwrap();
        let d = DemandSet::new(vec![(1, 6)], None).unwrap();
        let (c, _) = condense(&g, &d).unwrap();
        let n = g.node_count();
        let scc_count = c.scc_members.len();
        assert!(c.skeleton_edges.len() <= 2 * (n - scc_count));
    }
}
