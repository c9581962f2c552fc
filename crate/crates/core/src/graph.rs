//! Directed-graph representation, demand sets, reachability queries, and the
//! preserver verifier.
//!
//! Edges carry stable integer ids (their position in the edge list), so
//! preservers can be reported and fixture-tested as exact id sets.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::Error;
use crate::Result;

pub type NodeId = usize;
pub type EdgeId = usize;

/// An immutable adjacency-list digraph with stable edge identifiers.
///
/// Invariants: all node ids are in `[0, node_count)`; parallel edges are
/// deduplicated at construction; `out_edges`/`in_edges` are exact inverses of
/// the edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl DirectedGraph {
    /// Builds a graph from an edge list, deduplicating parallel edges.
    /// Edge ids are assigned by order of first occurrence.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = DirectedGraph {
            node_count,
            edges: Vec::new(),
            out_adj: vec![Vec::new(); node_count],
            in_adj: vec![Vec::new(); node_count],
        };
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::params(format!(
                    "edge ({u}, {v}): node-id out of range (n = {node_count})"
                )));
            }
            if seen.insert((u, v)) {
                let id = g.edges.len();
                g.edges.push((u, v));
                g.out_adj[u].push(id);
                g.in_adj[v].push(id);
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Endpoints `(tail, head)` of edge `e`.
    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.edges[e].0
    }

    pub fn head(&self, e: EdgeId) -> NodeId {
        self.edges[e].1
    }

    /// Ids of edges leaving `v`, in insertion order.
    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    /// Ids of edges entering `v`, in insertion order.
    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    /// Topological order of the nodes, or `None` if the graph has a cycle.
    pub fn topo_order(&self) -> Option<Vec<NodeId>> {
        let mut indeg: Vec<usize> = vec![0; self.node_count];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut queue: Vec<NodeId> = (0..self.node_count).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.node_count);
        let mut next = 0;
        while next < queue.len() {
            let u = queue[next];
            next += 1;
            order.push(u);
            for &e in &self.out_adj[u] {
                let v = self.head(e);
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push(v);
                }
            }
        }
        (order.len() == self.node_count).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo_order().is_some()
    }

    /// The set of nodes reachable from `s`, including `s`, as a boolean mask.
    pub fn reachable_set(&self, s: NodeId) -> Vec<bool> {
        self.reachable_with(s, |_| true)
    }

    /// Reachability from `s` restricted to edges accepted by `keep`.
    pub fn reachable_with(&self, s: NodeId, keep: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        assert!(s < self.node_count, "source {s} out of range");
        let mut seen = vec![false; self.node_count];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.out_adj[u] {
                if !keep(e) {
                    continue;
                }
                let v = self.head(e);
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Reachability towards `t` (i.e. the set of nodes that reach `t`),
    /// restricted to edges accepted by `keep`.
    pub fn coreachable_with(&self, t: NodeId, keep: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        assert!(t < self.node_count, "target {t} out of range");
        let mut seen = vec![false; self.node_count];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            for &e in &self.in_adj[v] {
                if !keep(e) {
                    continue;
                }
                let u = self.tail(e);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Serializes the graph in the edge-list file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.node_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list graph format.
///
/// Line 1 is `n m`; the next `m` lines are `u v` with 0-based node ids.
/// `#` starts a comment; blank lines are ignored. Duplicate edges are
/// deduplicated (the declared `m` counts the lines as written).
pub fn load_graph<R: BufRead>(reader: R) -> Result<DirectedGraph> {
    let mut lines = significant_lines(reader);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(1, "empty input, expected header \"n m\""))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(&mut it, line_no, "n")?;
    let m: usize = parse_field(&mut it, line_no, "m")?;
    expect_end(&mut it, line_no)?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::parse(0, format!("expected {m} edge lines, input ended early")))?;
        let mut it = line.split_whitespace();
        let u: usize = parse_field(&mut it, line_no, "tail")?;
        let v: usize = parse_field(&mut it, line_no, "head")?;
        expect_end(&mut it, line_no)?;
        if u >= n || v >= n {
            return Err(Error::parse(line_no, format!("node-id out of range: edge ({u}, {v}) with n = {n}")));
        }
        edges.push((u, v));
    }
    DirectedGraph::from_edges(n, edges)
}

/// A demand set: pairs whose reachability must be preserved, with an optional
/// declared source set establishing the `P ⊆ S × V` contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSet {
    pairs: Vec<(NodeId, NodeId)>,
    sources: Option<Vec<NodeId>>,
}

impl DemandSet {
    /// Builds a demand set. Duplicate pairs are dropped (keeping first
    /// occurrence), `s = t` pairs are dropped with a warning, and if sources
    /// are declared every pair must originate in the source set.
    pub fn new(pairs: Vec<(NodeId, NodeId)>, sources: Option<Vec<NodeId>>) -> Result<Self> {
        let mut dedup_sources = None;
        if let Some(src) = sources {
            let mut seen = HashSet::new();
            let mut list = Vec::new();
            for s in src {
                if seen.insert(s) {
                    list.push(s);
                }
            }
            dedup_sources = Some(list);
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (s, t) in pairs {
            if s == t {
                log::warn!("dropping trivial demand pair ({s}, {t})");
                continue;
            }
            if !seen.insert((s, t)) {
                continue;
            }
            if let Some(ref src) = dedup_sources {
                if !src.contains(&s) {
                    return Err(Error::params(format!(
                        "pair ({s}, {t}) does not originate in the declared source set"
                    )));
                }
            }
            kept.push((s, t));
        }
        Ok(DemandSet {
            pairs: kept,
            sources: dedup_sources,
        })
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The declared source list, if any.
    pub fn declared_sources(&self) -> Option<&[NodeId]> {
        self.sources.as_deref()
    }

    /// Distinct sources: the declared list if present, otherwise the distinct
    /// first components of the pairs in first-occurrence order.
    pub fn distinct_sources(&self) -> Vec<NodeId> {
        if let Some(ref s) = self.sources {
            return s.clone();
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &(s, _) in &self.pairs {
            if seen.insert(s) {
                out.push(s);
            }
        }
        out
    }

    /// Checks that all node ids fit a graph on `node_count` nodes.
    pub fn validate_for(&self, node_count: usize) -> Result<()> {
        for &(s, t) in &self.pairs {
            if s >= node_count || t >= node_count {
                return Err(Error::params(format!(
                    "demand pair ({s}, {t}): node-id out of range (n = {node_count})"
                )));
            }
        }
        if let Some(ref src) = self.sources {
            for &s in src {
                if s >= node_count {
                    return Err(Error::params(format!(
                        "source {s}: node-id out of range (n = {node_count})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serializes in the demand file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.sources {
            Some(src) => {
                let _ = writeln!(out, "{} {}", self.pairs.len(), src.len());
                for &(s, t) in &self.pairs {
                    let _ = writeln!(out, "{s} {t}");
                }
                for &s in src {
                    let _ = writeln!(out, "{s}");
                }
            }
            None => {
                let _ = writeln!(out, "{}", self.pairs.len());
                for &(s, t) in &self.pairs {
                    let _ = writeln!(out, "{s} {t}");
                }
            }
        }
        out
    }
}

/// Parses the demand file format.
///
/// Line 1 is `p` or `p s`; the next `p` lines are `u v` pairs; if `s` is
/// present, the following `s` lines each hold one source id.
pub fn load_demands<R: BufRead>(reader: R, node_count: usize) -> Result<DemandSet> {
    let mut lines = significant_lines(reader);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(1, "empty input, expected header \"p [s]\""))?;
    let mut it = header.split_whitespace();
    let p: usize = parse_field(&mut it, line_no, "p")?;
    let s_count: Option<usize> = match it.next() {
        Some(tok) => Some(tok.parse().map_err(|_| {
            Error::parse(line_no, format!("invalid source count {tok:?}"))
        })?),
        None => None,
    };
    expect_end(&mut it, line_no)?;

    let mut pairs = Vec::with_capacity(p);
    for _ in 0..p {
        let (line_no, line) = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::parse(0, format!("expected {p} pair lines, input ended early")))?;
        let mut it = line.split_whitespace();
        let u: usize = parse_field(&mut it, line_no, "s")?;
        let v: usize = parse_field(&mut it, line_no, "t")?;
        expect_end(&mut it, line_no)?;
        pairs.push((u, v));
    }
    let sources = match s_count {
        None => None,
        Some(k) => {
            let mut src = Vec::with_capacity(k);
            for _ in 0..k {
                let (line_no, line) = lines.next().transpose()?.ok_or_else(|| {
                    Error::parse(0, format!("expected {k} source lines, input ended early"))
                })?;
                let mut it = line.split_whitespace();
                let s: usize = parse_field(&mut it, line_no, "source")?;
                expect_end(&mut it, line_no)?;
                src.push(s);
            }
            Some(src)
        }
    };
    let demands = DemandSet::new(pairs, sources)?;
    demands.validate_for(node_count)?;
    Ok(demands)
}

/// Checks whether the edge subset `kept` preserves every demand: for each
/// `(s, t)`, `s` reaches `t` in the subgraph iff it does in `g`. Returns the
/// first violating pair in demand order, or `None` when `kept` is a preserver.
///
/// Since the subgraph cannot create paths, only the `g`-reachable pairs are
/// actually at risk; unreachable demands are preserved vacuously.
pub fn first_violation(
    g: &DirectedGraph,
    kept: &[EdgeId],
    demands: &DemandSet,
) -> Option<(NodeId, NodeId)> {
    let mut mask = vec![false; g.edge_count()];
    for &e in kept {
        mask[e] = true;
    }
    // One search per distinct source, lazily.
    let mut full: Vec<Option<Vec<bool>>> = vec![None; g.node_count()];
    let mut sub: Vec<Option<Vec<bool>>> = vec![None; g.node_count()];
    for &(s, t) in demands.pairs() {
        let reach_full =
            full[s].get_or_insert_with(|| g.reachable_set(s));
        if !reach_full[t] {
            continue;
        }
        let reach_sub = sub[s].get_or_insert_with(|| g.reachable_with(s, |e| mask[e]));
        if !reach_sub[t] {
            return Some((s, t));
        }
    }
    None
}

/// True iff `kept` is a reachability preserver of `(g, demands)`.
pub fn is_preserver(g: &DirectedGraph, kept: &[EdgeId], demands: &DemandSet) -> bool {
    first_violation(g, kept, demands).is_none()
}

/// Iterator over `(line_number, trimmed_content)` of non-blank, non-comment
/// lines. `#` starts a comment anywhere in a line.
fn significant_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = std::io::Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(e)),
            Ok(raw) => {
                let content = match raw.find('#') {
                    Some(pos) => &raw[..pos],
                    None => &raw[..],
                };
                let trimmed = content.trim();
                if trimmed.is_empty() {
                    None
                } else {
                    Some(Ok((i + 1, trimmed.to_string())))
                }
            }
        })
}

fn parse_field<'a>(
    it: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<usize> {
    let tok = it
        .next()
        .ok_or_else(|| Error::parse(line, format!("missing field {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} value {tok:?}")))
}

fn expect_end<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match it.next() {
        None => Ok(()),
        Some(tok) => Err(Error::parse(line, format!("unexpected trailing token {tok:?}"))),
    }
}
