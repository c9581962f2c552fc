//! Seeded random instance generators for fixtures and benchmarks.
//!
//! Everything here is a pure function of its parameters and seed; fixtures
//! named in tests rely on that.

use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashSet;

use crate::graph::{DemandSet, DirectedGraph, NodeId};
use crate::rng::stream;
use crate::Result;

/// Random simple digraph with exactly `m` distinct edges (no self-loops).
pub fn random_digraph(n: usize, m: usize, seed: u64) -> DirectedGraph {
    assert!(n >= 2, "need at least two nodes");
    let max_edges = n * (n - 1);
    assert!(m <= max_edges, "m = {m} exceeds {max_edges}");
    let mut rng = stream(seed, "random-digraph");
    let mut chosen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && chosen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    DirectedGraph::from_edges(n, edges).expect("generated edges are in range")
}

/// Random DAG with exactly `m` edges: a random permutation fixes a
/// topological order and edges go forward along it.
pub fn random_dag(n: usize, m: usize, seed: u64) -> DirectedGraph {
    assert!(n >= 2, "need at least two nodes");
    let max_edges = n * (n - 1) / 2;
    assert!(m <= max_edges, "m = {m} exceeds {max_edges}");
    let mut rng = stream(seed, "random-dag");
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut chosen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if chosen.insert((i, j)) {
            edges.push((order[i], order[j]));
        }
    }
    DirectedGraph::from_edges(n, edges).expect("generated edges are in range")
}

/// Random demand set over `g`.
///
/// With `source_count = Some(k)` the pairs originate in `k` sampled sources
/// and the set declares them (the source-restricted shape); otherwise pairs
/// are arbitrary. With `require_reachable` only pairs with `s ⇝ t` in `g`
/// are emitted. Returns up to `count` pairs; fewer when the graph cannot
/// supply them.
pub fn random_demands(
    g: &DirectedGraph,
    count: usize,
    source_count: Option<usize>,
    require_reachable: bool,
    seed: u64,
) -> Result<DemandSet> {
    let n = g.node_count();
    let mut rng = stream(seed, "random-demands");
    let sources: Vec<NodeId> = match source_count {
        Some(k) => {
            let mut nodes: Vec<NodeId> = (0..n).collect();
            nodes.shuffle(&mut rng);
            nodes.truncate(k.min(n));
            nodes
        }
        None => (0..n).collect(),
    };

    // Candidate pairs per source, in node order for determinism.
    let mut candidates: Vec<(NodeId, NodeId)> = Vec::new();
    for &s in &sources {
        let reach = g.reachable_set(s);
        for t in 0..n {
            if t == s {
                continue;
            }
            if !require_reachable || reach[t] {
                candidates.push((s, t));
            }
        }
    }
    candidates.shuffle(&mut rng);
    candidates.truncate(count);
    DemandSet::new(candidates, source_count.map(|_| sources))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digraph_is_reproducible() {
        let a = random_digraph(8, 16, 11);
        let b = random_digraph(8, 16, 11);
        assert_eq!(a, b);
        let c = random_digraph(8, 16, 12);
        assert_ne!(a, c);
    }

    #[test]
    fn dag_is_acyclic_with_exact_edge_count() {
        for seed in 0..20 {
            let g = random_dag(10, 25, seed);
            assert!(g.is_acyclic(), "seed {seed}");
            assert_eq!(g.edge_count(), 25);
        }
    }

    #[test]
    fn demands_respect_reachability_and_sources() {
        let g = random_dag(10, 20, 3);
        let d = random_demands(&g, 6, Some(3), true, 4).unwrap();
        assert!(d.len() <= 6);
        let sources = d.declared_sources().unwrap().to_vec();
        assert!(sources.len() <= 3);
        for &(s, t) in d.pairs() {
            assert!(sources.contains(&s));
            assert!(g.reachable_set(s)[t]);
        }
    }
}
