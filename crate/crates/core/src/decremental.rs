//! Decremental single-source reachability on a DAG.
//!
//! Each node keeps a *hook*: an alive in-edge from a reachable node that
//! certifies its own reachability. Hooks form a tree rooted at the source
//! spanning exactly the reachable set. When a hook dies, the node scans its
//! in-edge list forward from a monotone cursor for a replacement; if none
//! exists the node flips unreachable and its dependents are re-examined.
//! Cursors never rewind (except via undo), which bounds the total scan work
//! over any deletion sequence by the number of edges.
//!
//! Every mutation is journaled, grouped into one transaction per deletion, so
//! a deletion — even a partially executed one — can be rolled back exactly.
//! Deletions execute as a resumable state machine: `begin_delete` arms the
//! transaction and each `step` performs O(1) work, which is what lets the
//! multi-universe construction interleave many speculative deletions fairly.

use std::collections::VecDeque;

use crate::error::Error;
use crate::graph::{DirectedGraph, EdgeId, NodeId};
use crate::Result;

/// Token for one deletion transaction. Undo must respect LIFO order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Txn(u64);

/// One primitive journaled mutation.
#[derive(Debug, Clone, Copy)]
enum Mutation {
    EdgeKilled(EdgeId),
    HookSet { node: NodeId, prev: Option<EdgeId> },
    CursorSet { node: NodeId, prev: u32 },
    Flipped(NodeId),
}

/// Progress report from one primitive step of a pending deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepEvent {
    /// Work was done; the deletion is still in progress.
    Progress,
    /// `node` just became unreachable.
    Unreachable(NodeId),
    /// The deletion has fully propagated.
    Finished,
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    Idle,
    Kill(EdgeId),
    NextInvalid,
    Scan(NodeId),
    Notify { node: NodeId, pos: usize },
}

/// Decremental single-source reachability over a fixed DAG.
pub struct DecrementalReach<'g> {
    graph: &'g DirectedGraph,
    source: NodeId,
    hook: Vec<Option<EdgeId>>,
    cursor: Vec<u32>,
    alive: Vec<bool>,
    reachable: Vec<bool>,
    journal: Vec<Mutation>,
    /// Open transactions: (token, journal mark at open).
    txns: Vec<(u64, usize)>,
    next_txn: u64,
    phase: Phase,
    worklist: VecDeque<NodeId>,
    cursor_moves: u64,
}

impl<'g> DecrementalReach<'g> {
    /// Initializes the structure for `source` on an acyclic `graph`.
    ///
    /// Acyclicity is the caller's contract; debug builds verify it.
    pub fn new(graph: &'g DirectedGraph, source: NodeId) -> Result<Self> {
        if source >= graph.node_count() {
            return Err(Error::contract(format!(
                "source {source} out of range for n = {}",
                graph.node_count()
            )));
        }
        debug_assert!(graph.is_acyclic(), "decremental reachability requires a DAG");
        let n = graph.node_count();
        let mut d = DecrementalReach {
            graph,
            source,
            hook: vec![None; n],
            cursor: vec![0; n],
            alive: vec![true; graph.edge_count()],
            reachable: graph.reachable_set(source),
            journal: Vec::new(),
            txns: Vec::new(),
            next_txn: 0,
            phase: Phase::Idle,
            worklist: VecDeque::new(),
            cursor_moves: 0,
        };
        // Hook every reachable node to its first in-edge with a reachable
        // tail; the probes before that position count as scan work.
        for v in 0..n {
            if v == source || !d.reachable[v] {
                continue;
            }
            let in_edges = graph.in_edges(v);
            let mut pos = 0;
            while pos < in_edges.len() {
                let e = in_edges[pos];
                if d.reachable[graph.tail(e)] {
                    break;
                }
                pos += 1;
                d.cursor_moves += 1;
            }
            debug_assert!(pos < in_edges.len(), "reachable node must have support");
            d.hook[v] = Some(in_edges[pos]);
            d.cursor[v] = pos as u32;
        }
        Ok(d)
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    /// O(1) reachability lookup.
    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.reachable[v]
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive[e]
    }

    /// Total cursor advances performed over the structure's lifetime,
    /// including initialization. Never decreases, not even on undo.
    pub fn scan_work(&self) -> u64 {
        self.cursor_moves
    }

    pub fn reachable_mask(&self) -> &[bool] {
        &self.reachable
    }

    fn has_pending(&self) -> bool {
        !matches!(self.phase, Phase::Idle)
    }

    /// Opens a deletion transaction for edge `e`. The kill itself and all
    /// propagation happen in subsequent `step` calls.
    pub fn begin_delete(&mut self, e: EdgeId) -> Result<Txn> {
        if self.has_pending() {
            return Err(Error::contract(
                "begin_delete while another deletion is pending".to_string(),
            ));
        }
        if e >= self.alive.len() || !self.alive[e] {
            return Err(Error::contract(format!("edge {e} is not alive")));
        }
        let token = self.next_txn;
        self.next_txn += 1;
        self.txns.push((token, self.journal.len()));
        self.phase = Phase::Kill(e);
        Ok(Txn(token))
    }

    /// Performs one O(1) unit of the pending deletion.
    pub fn step(&mut self) -> StepEvent {
        match self.phase {
            Phase::Idle => panic!("step called with no pending deletion"),
            Phase::Kill(e) => {
                self.journal.push(Mutation::EdgeKilled(e));
                self.alive[e] = false;
                let head = self.graph.head(e);
                if self.reachable[head] && self.hook[head] == Some(e) {
                    self.worklist.push_back(head);
                }
                self.phase = Phase::NextInvalid;
                StepEvent::Progress
            }
            Phase::NextInvalid => match self.worklist.pop_front() {
                None => {
                    self.phase = Phase::Idle;
                    StepEvent::Finished
                }
                Some(v) => {
                    self.phase = Phase::Scan(v);
                    StepEvent::Progress
                }
            },
            Phase::Scan(v) => {
                let in_edges = self.graph.in_edges(v);
                let pos = self.cursor[v] as usize;
                if pos >= in_edges.len() {
                    // No support left: v flips unreachable.
                    self.journal.push(Mutation::Flipped(v));
                    self.reachable[v] = false;
                    self.journal.push(Mutation::HookSet {
                        node: v,
                        prev: self.hook[v],
                    });
                    self.hook[v] = None;
                    self.phase = Phase::Notify { node: v, pos: 0 };
                    return StepEvent::Unreachable(v);
                }
                let e = in_edges[pos];
                if self.alive[e] && self.reachable[self.graph.tail(e)] {
                    self.journal.push(Mutation::HookSet {
                        node: v,
                        prev: self.hook[v],
                    });
                    self.hook[v] = Some(e);
                    self.phase = Phase::NextInvalid;
                } else {
                    self.journal.push(Mutation::CursorSet {
                        node: v,
                        prev: pos as u32,
                    });
                    self.cursor[v] = (pos + 1) as u32;
                    self.cursor_moves += 1;
                }
                StepEvent::Progress
            }
            Phase::Notify { node, pos } => {
                let out_edges = self.graph.out_edges(node);
                if pos >= out_edges.len() {
                    self.phase = Phase::NextInvalid;
                } else {
                    let e = out_edges[pos];
                    if self.alive[e] && self.hook[self.graph.head(e)] == Some(e) {
                        self.worklist.push_back(self.graph.head(e));
                    }
                    self.phase = Phase::Notify {
                        node,
                        pos: pos + 1,
                    };
                }
                StepEvent::Progress
            }
        }
    }

    /// Deletes edge `e`, driving the propagation to completion. Returns the
    /// nodes that became unreachable, in flip order, and the transaction.
    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(Vec<NodeId>, Txn)> {
        let txn = self.begin_delete(e)?;
        let mut flipped = Vec::new();
        loop {
            match self.step() {
                StepEvent::Progress => {}
                StepEvent::Unreachable(v) => flipped.push(v),
                StepEvent::Finished => break,
            }
        }
        Ok((flipped, txn))
    }

    /// Rolls back the transaction `txn`, which must be the most recent one
    /// still open (LIFO discipline). A partially executed deletion is
    /// aborted and unwound the same way.
    pub fn undo(&mut self, txn: Txn) -> Result<()> {
        match self.txns.last() {
            Some(&(token, _)) if token == txn.0 => {}
            _ => {
                return Err(Error::contract(format!(
                    "out-of-order undo of transaction {}",
                    txn.0
                )))
            }
        }
        let (_, mark) = self.txns.pop().unwrap();
        self.phase = Phase::Idle;
        self.worklist.clear();
        while self.journal.len() > mark {
            match self.journal.pop().unwrap() {
                Mutation::EdgeKilled(e) => self.alive[e] = true,
                Mutation::HookSet { node, prev } => self.hook[node] = prev,
                Mutation::CursorSet { node, prev } => self.cursor[node] = prev,
                Mutation::Flipped(v) => self.reachable[v] = true,
            }
        }
        Ok(())
    }

    /// Seals all completed transactions and truncates the journal. No
    /// pending deletion may exist. After this call the sealed deletions can
    /// no longer be undone.
    pub fn commit_all(&mut self) -> Result<()> {
        if self.has_pending() {
            return Err(Error::contract(
                "commit_all while a deletion is pending".to_string(),
            ));
        }
        self.txns.clear();
        self.journal.clear();
        Ok(())
    }

    /// Deterministic text dump of hooks, cursors, and flags, used by the
    /// undo-exactness tests. Excludes the work counter and journal.
    pub fn debug_dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "source {}", self.source);
        for v in 0..self.graph.node_count() {
            let _ = writeln!(
                out,
                "node {v} reachable {} cursor {} hook {:?}",
                self.reachable[v] as u8, self.cursor[v], self.hook[v]
            );
        }
        for (e, &a) in self.alive.iter().enumerate() {
            let _ = writeln!(out, "edge {e} alive {}", a as u8);
        }
        out
    }

    /// Structural state equality (hooks, cursors, alive flags, reachability).
    pub fn state_eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.hook == other.hook
            && self.cursor == other.cursor
            && self.alive == other.alive
            && self.reachable == other.reachable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedGraph;

    fn path(n: usize) -> DirectedGraph {
        DirectedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn init_matches_bfs() {
        let g = path(3);
        let d = DecrementalReach::new(&g, 0).unwrap();
        assert!(d.is_reachable(0) && d.is_reachable(1) && d.is_reachable(2));
        let d = DecrementalReach::new(&g, 1).unwrap();
        assert!(!d.is_reachable(0) && d.is_reachable(1) && d.is_reachable(2));
    }

    #[test]
    fn delete_tail_edge_on_path() {
        let g = path(3);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let (flipped, _) = d.delete_edge(1).unwrap();
        assert_eq!(flipped, vec![2]);
        assert!(d.is_reachable(1));
        assert!(!d.is_reachable(2));
    }

    #[test]
    fn diamond_alternate_support() {
        let g = DirectedGraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let (flipped, _) = d.delete_edge(2).unwrap();
        assert!(flipped.is_empty());
        assert!(d.is_reachable(3));
    }

    #[test]
    fn undo_restores_exact_state() {
        let g = path(3);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let before = d.debug_dump();
        let (_, txn) = d.delete_edge(1).unwrap();
        assert!(!d.is_reachable(2));
        d.undo(txn).unwrap();
        assert_eq!(d.debug_dump(), before);
    }

    #[test]
    fn lifo_undo_of_two_deletions() {
        let g = path(4);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let before = d.debug_dump();
        let (_, t1) = d.delete_edge(2).unwrap();
        let (_, t2) = d.delete_edge(0).unwrap();
        assert!(d.undo(t1).is_err()); // out of order
        d.undo(t2).unwrap();
        d.undo(t1).unwrap();
        assert_eq!(d.debug_dump(), before);
    }

    #[test]
    fn delete_dead_edge_is_contract_violation() {
        let g = path(3);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        d.delete_edge(0).unwrap();
        assert!(d.delete_edge(0).is_err());
    }

    #[test]
    fn after_killing_root_edge_path_unreachable() {
        let g = path(3);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let (flipped, _) = d.delete_edge(0).unwrap();
        assert_eq!(flipped, vec![1, 2]);
        assert!(!d.is_reachable(2));
    }

    #[test]
    fn abort_partial_deletion() {
        let g = path(4);
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        let before = d.debug_dump();
        let txn = d.begin_delete(0).unwrap();
        // Two steps in: kill plus part of the cascade.
        d.step();
        d.step();
        d.undo(txn).unwrap();
        assert_eq!(d.debug_dump(), before);
        // The structure is usable again.
        let (flipped, _) = d.delete_edge(2).unwrap();
        assert_eq!(flipped, vec![3]);
    }

    #[test]
    fn scan_work_bounded_by_edges_on_full_teardown() {
        let g = DirectedGraph::from_edges(
            6,
            [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (4, 5)],
        )
        .unwrap();
        let mut d = DecrementalReach::new(&g, 0).unwrap();
        for e in 0..g.edge_count() {
            d.delete_edge(e).unwrap();
        }
        assert!(d.scan_work() <= g.edge_count() as u64);
    }
}
