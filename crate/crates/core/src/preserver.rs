//! Construction of sparse reachability preservers.
//!
//! [`build_preserver`] is the randomized multi-universe construction: after
//! condensing to a DAG, it runs speculative edge deletions in several
//! "universes" at once — one decremental structure per source per universe —
//! advancing them in deterministic round-robin, one primitive step per
//! universe per turn. The first universe whose deletion completes without
//! disconnecting any demand wins the round; the losers unwind their journals
//! and replay the winning deletion. When sampling stops finding deletable
//! edges, a deterministic scan over the remaining edges either finds one or
//! certifies that the current edge set is minimal.
//!
//! [`greedy_prune`] is the deterministic single-pass variant and
//! [`brute_force_opt`] an exact optimum oracle for small instances.

use std::collections::HashSet;

use itertools::Itertools;
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::bounds::BoundSpec;
use crate::decremental::{DecrementalReach, StepEvent, Txn};
use crate::error::Error;
use crate::graph::{is_preserver, DemandSet, DirectedGraph, EdgeId, NodeId};
use crate::rng::substream;
use crate::scc::{condense, expand_preserver};
use crate::Result;

/// Which size bound steers the construction target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundChoice {
    /// Source-restricted when the demand set declares sources, else pairwise.
    #[default]
    Auto,
    SourceRestricted,
    Pairwise,
}

/// Tunables of the randomized construction.
#[derive(Debug, Clone)]
pub struct AlgoConfig {
    /// Universes per round; `None` derives `⌈8·ln n⌉` (min 1) from the
    /// instance.
    pub universes_per_round: Option<usize>,
    /// Failed sampling rounds tolerated before the deterministic scan.
    pub max_resamples_per_round: usize,
    pub seed: u64,
    /// Loop threshold multiplier on the bound (the classical exit is
    /// "more than target_factor·f edges remain").
    pub target_factor: Ratio<u64>,
    pub bound_choice: BoundChoice,
    /// Leading constant of the bound formula.
    pub bound_constant: Ratio<u64>,
}

impl AlgoConfig {
    pub fn new(seed: u64) -> Self {
        AlgoConfig {
            universes_per_round: None,
            max_resamples_per_round: 20,
            seed,
            target_factor: Ratio::new(2, 1),
            bound_choice: BoundChoice::Auto,
            bound_constant: Ratio::new(1, 1),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.universes_per_round == Some(0) {
            return Err(Error::params("universes_per_round must be at least 1"));
        }
        if self.target_factor <= Ratio::new(1, 1) {
            return Err(Error::params("target_factor must exceed 1"));
        }
        if self.max_resamples_per_round == 0 {
            return Err(Error::params("max_resamples_per_round must be at least 1"));
        }
        Ok(())
    }

    /// Default universe count for an `n`-node instance: `⌈8·ln n⌉`, min 1.
    pub fn default_universes(n: usize) -> usize {
        if n < 2 {
            return 1;
        }
        (8.0 * (n as f64).ln()).ceil() as usize
    }
}

/// Output of [`build_preserver`]: the kept edges plus provenance counters.
#[derive(Debug, Clone, Serialize)]
pub struct PreserverResult {
    /// Kept original edge ids, sorted.
    pub kept_edges: Vec<EdgeId>,
    /// Edges surviving the condensed DAG phase (before skeleton expansion).
    pub condensed_kept: usize,
    /// Sampling rounds attempted (successful and failed).
    pub rounds: u64,
    /// Failed sampling rounds.
    pub resample_retries: u64,
    /// Deterministic fallback scans performed.
    pub fallback_scans: u64,
    /// True when the run ended because no single edge was deletable.
    pub ended_minimal: bool,
    /// Universes per round actually used.
    pub universes: usize,
    /// Total scan-cursor advances across all decremental structures.
    pub work_scanned: u64,
    /// The bound formula evaluated on the condensed parameters.
    pub bound_used: BoundSpec,
    /// Condensed instance parameters (n', p', s') the bound was applied to.
    pub condensed_params: (u64, u64, u64),
    pub seed: u64,
}

fn resolve_bound(
    choice: BoundChoice,
    c: Ratio<u64>,
    n: u64,
    p: u64,
    s: u64,
    has_sources: bool,
) -> BoundSpec {
    match choice {
        BoundChoice::SourceRestricted => BoundSpec::source_restricted(n, p, s, c),
        BoundChoice::Pairwise => BoundSpec::pairwise(n, p, c),
        BoundChoice::Auto => {
            if has_sources {
                BoundSpec::source_restricted(n, p, s, c)
            } else {
                BoundSpec::pairwise(n, p, c)
            }
        }
    }
}

/// One speculative universe: a full set of per-source decremental structures
/// plus the state of its in-flight candidate deletion.
struct Universe<'g> {
    structures: Vec<DecrementalReach<'g>>,
    candidate: Option<EdgeId>,
    src_idx: usize,
    open: Vec<Txn>,
    failed: bool,
    finished: bool,
}

impl<'g> Universe<'g> {
    fn assign(&mut self, candidate: Option<EdgeId>) {
        self.candidate = candidate;
        self.src_idx = 0;
        self.open.clear();
        // A universe with no candidate this round sits out as failed.
        self.failed = candidate.is_none();
        self.finished = self.structures.is_empty() && candidate.is_some();
    }

    fn active(&self) -> bool {
        !self.failed && !self.finished
    }

    /// One primitive step of this universe's candidate deletion.
    fn step(&mut self, targets: &[Vec<bool>]) {
        debug_assert!(self.active());
        let e = self.candidate.expect("active universe has a candidate");
        if self.open.len() == self.src_idx {
            // Arm the deletion in the next source structure.
            let txn = self.structures[self.src_idx]
                .begin_delete(e)
                .expect("candidate edge is alive in every universe");
            self.open.push(txn);
            return;
        }
        match self.structures[self.src_idx].step() {
            StepEvent::Progress => {}
            StepEvent::Unreachable(v) => {
                if targets[self.src_idx][v] {
                    self.failed = true;
                }
            }
            StepEvent::Finished => {
                self.src_idx += 1;
                if self.src_idx == self.structures.len() {
                    self.finished = true;
                }
            }
        }
    }

    /// Rolls back everything done for the current candidate.
    fn unwind(&mut self) {
        for (i, txn) in self.open.drain(..).enumerate().rev() {
            let (i, txn) = (i, txn);
            self.structures[i].undo(txn).expect("LIFO unwind");
        }
        self.candidate = None;
        self.failed = false;
        self.finished = false;
    }

    /// Applies a committed deletion to every structure, to completion.
    fn replay(&mut self, e: EdgeId, targets: &[Vec<bool>]) {
        for (i, st) in self.structures.iter_mut().enumerate() {
            let (flipped, _) = st.delete_edge(e).expect("replay of committed edge");
            debug_assert!(
                flipped.iter().all(|&v| !targets[i][v]),
                "committed deletion must not disconnect a demand"
            );
        }
        self.candidate = None;
        self.open.clear();
        self.failed = false;
        self.finished = false;
    }

    fn seal(&mut self) {
        self.candidate = None;
        self.open.clear();
        self.failed = false;
        self.finished = false;
        for st in &mut self.structures {
            st.commit_all().expect("no pending deletion at seal time");
        }
    }

    fn work(&self) -> u64 {
        self.structures.iter().map(|s| s.scan_work()).sum()
    }
}

/// Builds a reachability preserver of `(g, demands)`.
///
/// Pipeline: condense to a DAG, prune the condensed instance with the
/// multi-universe deletion loop until no single edge is deletable, then
/// expand through the per-SCC skeletons. The output always satisfies the
/// preserver property; the condensed phase is additionally expected to land
/// within `target_factor·f` of the applicable bound.
pub fn build_preserver(
    g: &DirectedGraph,
    demands: &DemandSet,
    cfg: &AlgoConfig,
) -> Result<PreserverResult> {
    cfg.validate()?;
    demands.validate_for(g.node_count())?;

    let universes_n = cfg
        .universes_per_round
        .unwrap_or_else(|| AlgoConfig::default_universes(g.node_count()));

    let (cond, mapped) = condense(g, demands)?;
    let dag = &cond.dag;
    let n_c = dag.node_count() as u64;
    let p_c = mapped.len() as u64;
    let sources = mapped.distinct_sources();
    let s_c = sources.len() as u64;
    let bound = resolve_bound(
        cfg.bound_choice,
        cfg.bound_constant,
        n_c,
        p_c,
        s_c,
        mapped.declared_sources().is_some(),
    );

    // Empty demand set: the empty graph preserves everything vacuously.
    if demands.is_empty() {
        return Ok(PreserverResult {
            kept_edges: Vec::new(),
            condensed_kept: 0,
            rounds: 0,
            resample_retries: 0,
            fallback_scans: 0,
            ended_minimal: true,
            universes: universes_n,
            work_scanned: 0,
            bound_used: bound,
            condensed_params: (n_c, p_c, s_c),
            seed: cfg.seed,
        });
    }

    // Demanded targets per source index, restricted to pairs that are
    // actually reachable (unreachable demands are preserved vacuously).
    let mut targets: Vec<Vec<bool>> = Vec::with_capacity(sources.len());
    for &s in &sources {
        let reach = dag.reachable_set(s);
        let mut mask = vec![false; dag.node_count()];
        for &(ps, pt) in mapped.pairs() {
            if ps == s && reach[pt] {
                mask[pt] = true;
            }
        }
        targets.push(mask);
    }

    let mut universes: Vec<Universe> = (0..universes_n)
        .map(|_| {
            let structures = sources
                .iter()
                .map(|&s| DecrementalReach::new(dag, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(Universe {
                structures,
                candidate: None,
                src_idx: 0,
                open: Vec::new(),
                failed: false,
                finished: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Alive condensed edges, with O(1) removal.
    let m_c = dag.edge_count();
    let mut alive = vec![true; m_c];
    let mut alive_list: Vec<EdgeId> = (0..m_c).collect();
    let mut pos_of: Vec<usize> = (0..m_c).collect();
    let remove_alive = move |alive_list: &mut Vec<EdgeId>,
                                 pos_of: &mut Vec<usize>,
                                 e: EdgeId| {
        let pos = pos_of[e];
        let last = alive_list.pop().expect("edge present");
        if last != e {
            alive_list[pos] = last;
            pos_of[last] = pos;
        }
    };

    let mut rounds: u64 = 0;
    let mut retries: u64 = 0;
    let mut fallback_scans: u64 = 0;
    let mut ended_minimal = false;
    let mut round_counter: u64 = 0;

    'outer: while !alive_list.is_empty() {
        // Sampling phase: up to max_resamples rounds of speculative parallel
        // deletion.
        let mut committed: Option<EdgeId> = None;
        for _ in 0..cfg.max_resamples_per_round {
            rounds += 1;
            let mut rng = substream(cfg.seed, "round", round_counter);
            round_counter += 1;
            let sample = sample_distinct(&mut rng, &alive_list, universes.len());
            for (i, u) in universes.iter_mut().enumerate() {
                u.assign(sample.get(i).copied());
            }
            let mut winner: Option<usize> = None;
            'steps: loop {
                let mut any_active = false;
                for i in 0..universes.len() {
                    if !universes[i].active() {
                        continue;
                    }
                    any_active = true;
                    universes[i].step(&targets);
                    if universes[i].finished && !universes[i].failed {
                        winner = Some(i);
                        break 'steps;
                    }
                }
                if !any_active {
                    break;
                }
            }
            match winner {
                Some(w) => {
                    let e = universes[w].candidate.expect("winner has candidate");
                    for (i, u) in universes.iter_mut().enumerate() {
                        if i == w {
                            continue;
                        }
                        u.unwind();
                        u.replay(e, &targets);
                    }
                    for u in universes.iter_mut() {
                        u.seal();
                    }
                    alive[e] = false;
                    remove_alive(&mut alive_list, &mut pos_of, e);
                    committed = Some(e);
                    break;
                }
                None => {
                    for u in universes.iter_mut() {
                        u.unwind();
                    }
                    retries += 1;
                }
            }
        }
        if committed.is_some() {
            continue 'outer;
        }

        // Deterministic fallback: scan all alive edges in id order for any
        // deletable one.
        fallback_scans += 1;
        let mut scan_order: Vec<EdgeId> = alive_list.clone();
        scan_order.sort_unstable();
        let mut found = None;
        for &e in &scan_order {
            let (u0, rest) = universes.split_first_mut().expect("at least one universe");
            let mut open: Vec<Txn> = Vec::new();
            let mut ok = true;
            'srcs: for (i, st) in u0.structures.iter_mut().enumerate() {
                let txn = st.begin_delete(e).expect("edge alive");
                open.push(txn);
                loop {
                    match st.step() {
                        StepEvent::Progress => {}
                        StepEvent::Unreachable(v) => {
                            if targets[i][v] {
                                ok = false;
                            }
                        }
                        StepEvent::Finished => continue 'srcs,
                    }
                }
            }
            if ok {
                for u in rest.iter_mut() {
                    u.replay(e, &targets);
                }
                u0.open.clear();
                found = Some(e);
                break;
            } else {
                for (i, txn) in open.into_iter().enumerate().rev() {
                    u0.structures[i].undo(txn).expect("LIFO unwind");
                }
            }
        }
        match found {
            Some(e) => {
                for u in universes.iter_mut() {
                    u.seal();
                }
                alive[e] = false;
                remove_alive(&mut alive_list, &mut pos_of, e);
            }
            None => {
                ended_minimal = true;
                break;
            }
        }
    }

    let work_scanned: u64 = universes.iter().map(|u| u.work()).sum();
    let mut condensed_edges: Vec<EdgeId> = alive_list.clone();
    condensed_edges.sort_unstable();
    let condensed_kept = condensed_edges.len();
    let kept_edges = expand_preserver(&cond, &condensed_edges)?;

    debug_assert!(is_preserver(g, &kept_edges, demands));

    Ok(PreserverResult {
        kept_edges,
        condensed_kept,
        rounds,
        resample_retries: retries,
        fallback_scans,
        ended_minimal,
        universes: universes_n,
        work_scanned,
        bound_used: bound,
        condensed_params: (n_c, p_c, s_c),
        seed: cfg.seed,
    })
}

/// Samples up to `k` distinct edges from the alive list. When the list is
/// small, a partial Fisher-Yates over a scratch copy; otherwise rejection.
fn sample_distinct(rng: &mut impl Rng, alive_list: &[EdgeId], k: usize) -> Vec<EdgeId> {
    let k = k.min(alive_list.len());
    if k == 0 {
        return Vec::new();
    }
    if alive_list.len() <= 4 * k {
        let mut scratch = alive_list.to_vec();
        for i in 0..k {
            let j = rng.gen_range(i..scratch.len());
            scratch.swap(i, j);
        }
        scratch.truncate(k);
        scratch
    } else {
        let mut seen = HashSet::with_capacity(k);
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let e = alive_list[rng.gen_range(0..alive_list.len())];
            if seen.insert(e) {
                out.push(e);
            }
        }
        out
    }
}

/// Deterministic single-pass pruner: scans edges once in id order and deletes
/// each whose removal keeps every demand reachable. The result is minimal —
/// no single remaining edge is deletable.
pub fn greedy_prune(g: &DirectedGraph, demands: &DemandSet) -> Result<Vec<EdgeId>> {
    demands.validate_for(g.node_count())?;
    if demands.is_empty() {
        return Ok(Vec::new());
    }
    if g.is_acyclic() {
        greedy_prune_dag(g, demands)
    } else {
        greedy_prune_general(g, demands)
    }
}

fn greedy_prune_dag(g: &DirectedGraph, demands: &DemandSet) -> Result<Vec<EdgeId>> {
    let sources = demands.distinct_sources();
    let mut structures: Vec<DecrementalReach> = sources
        .iter()
        .map(|&s| DecrementalReach::new(g, s))
        .collect::<Result<Vec<_>>>()?;
    let mut targets: Vec<Vec<bool>> = Vec::with_capacity(sources.len());
    for (i, &s) in sources.iter().enumerate() {
        let mut mask = vec![false; g.node_count()];
        for &(ps, pt) in demands.pairs() {
            if ps == s && structures[i].is_reachable(pt) {
                mask[pt] = true;
            }
        }
        targets.push(mask);
        let _ = s;
    }

    let mut kept = vec![true; g.edge_count()];
    for e in 0..g.edge_count() {
        let mut open: Vec<Txn> = Vec::new();
        let mut ok = true;
        for (i, st) in structures.iter_mut().enumerate() {
            let (flipped, txn) = st.delete_edge(e)?;
            open.push(txn);
            if flipped.iter().any(|&v| targets[i][v]) {
                ok = false;
                break;
            }
        }
        if ok {
            kept[e] = false;
            for st in structures.iter_mut() {
                st.commit_all()?;
            }
        } else {
            for (i, txn) in open.into_iter().enumerate().rev() {
                structures[i].undo(txn)?;
            }
        }
    }
    Ok((0..g.edge_count()).filter(|&e| kept[e]).collect())
}

fn greedy_prune_general(g: &DirectedGraph, demands: &DemandSet) -> Result<Vec<EdgeId>> {
    let mut kept: Vec<EdgeId> = (0..g.edge_count()).collect();
    for e in 0..g.edge_count() {
        let trial: Vec<EdgeId> = kept.iter().copied().filter(|&x| x != e).collect();
        if trial.len() < kept.len() && is_preserver(g, &trial, demands) {
            kept = trial;
        }
    }
    Ok(kept)
}

/// Exact minimum-cardinality preserver by subset search with required-edge
/// pruning. Refuses instances above `budget` edges (default 22).
pub const DEFAULT_OPT_BUDGET: usize = 22;

pub fn brute_force_opt(
    g: &DirectedGraph,
    demands: &DemandSet,
    budget: usize,
) -> Result<Vec<EdgeId>> {
    demands.validate_for(g.node_count())?;
    let m = g.edge_count();
    if m > budget {
        return Err(Error::Budget { edges: m, budget });
    }

    // Only pairs reachable in g constrain the preserver.
    let live_pairs: Vec<(NodeId, NodeId)> = demands
        .pairs()
        .iter()
        .copied()
        .filter(|&(s, t)| g.reachable_set(s)[t])
        .collect();
    if live_pairs.is_empty() {
        return Ok(Vec::new());
    }
    let live = DemandSet::new(live_pairs.clone(), None)?;

    // Forced edges: removing the edge alone already breaks some pair.
    let all: Vec<EdgeId> = (0..m).collect();
    let mut forced: Vec<EdgeId> = Vec::new();
    for e in 0..m {
        let without: Vec<EdgeId> = all.iter().copied().filter(|&x| x != e).collect();
        if !is_preserver(g, &without, &live) {
            forced.push(e);
        }
    }

    // Free edges must lie on some s ⇝ t path of a live pair to be useful.
    let mut relevant = vec![false; m];
    for &(s, t) in live.pairs() {
        let reach = g.reachable_set(s);
        let coreach = g.coreachable_with(t, |_| true);
        for e in 0..m {
            let (u, v) = g.edge(e);
            if reach[u] && coreach[v] {
                relevant[e] = true;
            }
        }
    }
    let free: Vec<EdgeId> = (0..m)
        .filter(|&e| relevant[e] && !forced.contains(&e))
        .collect();

    if is_preserver(g, &forced, &live) {
        return Ok(forced);
    }
    for k in 1..=free.len() {
        for combo in free.iter().copied().combinations(k) {
            let mut candidate = forced.clone();
            candidate.extend(combo);
            if is_preserver(g, &candidate, &live) {
                candidate.sort_unstable();
                return Ok(candidate);
            }
        }
    }
    unreachable!("forced ∪ relevant edges always form a preserver");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::first_violation;

    fn diamond() -> DirectedGraph {
        DirectedGraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn path_keeps_every_edge() {
        let g = DirectedGraph::from_edges(10, (0..9).map(|i| (i, i + 1))).unwrap();
        let d = DemandSet::new(vec![(0, 9)], None).unwrap();
        let r = build_preserver(&g, &d, &AlgoConfig::new(1)).unwrap();
        assert_eq!(r.kept_edges, (0..9).collect::<Vec<_>>());
        assert!(r.ended_minimal);
    }

    #[test]
    fn diamond_keeps_one_branch() {
        let g = diamond();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        let r = build_preserver(&g, &d, &AlgoConfig::new(5)).unwrap();
        assert_eq!(r.kept_edges.len(), 2);
        assert!(is_preserver(&g, &r.kept_edges, &d));
    }

    #[test]
    fn empty_demands_keep_nothing() {
        let g = diamond();
        let d = DemandSet::new(vec![], None).unwrap();
        let r = build_preserver(&g, &d, &AlgoConfig::new(9)).unwrap();
        assert!(r.kept_edges.is_empty());
    }

    #[test]
    fn build_is_deterministic() {
        let g = crate::gen::random_digraph(12, 30, 77);
        let d = crate::gen::random_demands(&g, 4, Some(2), true, 78).unwrap();
        let cfg = AlgoConfig::new(1234);
        let r1 = build_preserver(&g, &d, &cfg).unwrap();
        let r2 = build_preserver(&g, &d, &cfg).unwrap();
        assert_eq!(r1.kept_edges, r2.kept_edges);
        assert_eq!(r1.rounds, r2.rounds);
        assert_eq!(r1.work_scanned, r2.work_scanned);
        let r3 = build_preserver(&g, &d, &AlgoConfig::new(4321)).unwrap();
        assert!(is_preserver(&g, &r3.kept_edges, &d));
    }

    #[test]
    fn cyclic_input_goes_through_condensation() {
        // Two 2-cycles joined; demand crosses both.
        let g = DirectedGraph::from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        let r = build_preserver(&g, &d, &AlgoConfig::new(2)).unwrap();
        assert!(is_preserver(&g, &r.kept_edges, &d));
        assert!(first_violation(&g, &r.kept_edges, &d).is_none());
    }

    #[test]
    fn greedy_on_diamond() {
        let g = diamond();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        let kept = greedy_prune(&g, &d).unwrap();
        assert_eq!(kept.len(), 2);
        assert!(is_preserver(&g, &kept, &d));
    }

    #[test]
    fn greedy_on_empty_demands() {
        let g = diamond();
        let d = DemandSet::new(vec![], None).unwrap();
        assert!(greedy_prune(&g, &d).unwrap().is_empty());
    }

    #[test]
    fn greedy_outputs_are_minimal() {
        for seed in 0..10 {
            let g = crate::gen::random_dag(8, 16, seed);
            let d = crate::gen::random_demands(&g, 3, None, true, seed + 100).unwrap();
            let kept = greedy_prune(&g, &d).unwrap();
            assert!(is_preserver(&g, &kept, &d));
            for &e in &kept {
                let without: Vec<EdgeId> = kept.iter().copied().filter(|&x| x != e).collect();
                assert!(
                    !is_preserver(&g, &without, &d),
                    "edge {e} deletable in seed {seed}"
                );
            }
        }
    }

    #[test]
    fn brute_force_on_path_and_diamond() {
        let g = DirectedGraph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        let d = DemandSet::new(vec![(0, 4)], None).unwrap();
        assert_eq!(brute_force_opt(&g, &d, 22).unwrap().len(), 4);

        let g = diamond();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        assert_eq!(brute_force_opt(&g, &d, 22).unwrap().len(), 2);
    }

    #[test]
    fn brute_force_prefers_shortcut() {
        // 0→1→3 and 0→2→3 plus the direct edge 0→3.
        let g =
            DirectedGraph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)]).unwrap();
        let d = DemandSet::new(vec![(0, 3)], None).unwrap();
        let opt = brute_force_opt(&g, &d, 22).unwrap();
        assert_eq!(opt, vec![4]);
    }

    #[test]
    fn brute_force_refuses_over_budget() {
        let g = crate::gen::random_digraph(10, 30, 5);
        let d = DemandSet::new(vec![(0, 1)], None).unwrap();
        assert!(matches!(
            brute_force_opt(&g, &d, 22),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn build_matches_oracle_scale() {
        for seed in [11u64, 12, 13] {
            let g = crate::gen::random_dag(8, 16, seed);
            let d = crate::gen::random_demands(&g, 3, None, true, seed + 1).unwrap();
            let r = build_preserver(&g, &d, &AlgoConfig::new(seed)).unwrap();
            assert!(is_preserver(&g, &r.kept_edges, &d));
            let opt = brute_force_opt(&g, &d, 22).unwrap();
            assert!(r.kept_edges.len() >= opt.len());
        }
    }
}
