//! Unweighted Directed Steiner Network approximation at desk scale.
//!
//! Demand pairs are split by thickness: a pair is k-thick when the node set
//! union of all its s-to-t paths has at least k nodes. Thick pairs are served
//! through a sampled hitting set — connect every thick terminal to and from
//! every hit node with a reachability preserver — while thin pairs get one
//! shortest path each, jointly pruned. A second candidate solution routes
//! every pair the thin way; the sparser feasible candidate wins. No
//! approximation factor is claimed for the thin step; the report labels its
//! cost separately.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::Error;
use crate::graph::{is_preserver, DemandSet, DirectedGraph, EdgeId, NodeId};
use crate::preserver::{brute_force_opt, AlgoConfig};
use crate::rng::substream;
use crate::Result;

/// A feasibility-checked UDSN instance with its thickness parameters.
#[derive(Debug, Clone)]
pub struct UdsnInstance {
    pub graph: DirectedGraph,
    pub demands: DemandSet,
    /// Thickness threshold (node count).
    pub k: usize,
    /// Regime exponent, in [0, 3/45].
    pub alpha: Ratio<i64>,
    pub epsilon: Ratio<i64>,
    pub seed: u64,
    /// Leading constant of the hitting-set size `⌈c·n·ln n / k⌉`.
    pub hitting_constant: Ratio<i64>,
    /// Resampling attempts before failing pairs demote to thin.
    pub hitting_retries: usize,
}

impl UdsnInstance {
    /// Builds an instance with default parameters (`α = 3/45`,
    /// `k = ⌈n^{3/5 - α/3}⌉`). Rejects demands whose target is unreachable:
    /// the problem presumes feasibility.
    pub fn new(graph: DirectedGraph, demands: DemandSet, seed: u64) -> Result<Self> {
        demands.validate_for(graph.node_count())?;
        for &(s, t) in demands.pairs() {
            if !graph.reachable_set(s)[t] {
                return Err(Error::InfeasibleDemand(s, t));
            }
        }
        let alpha = Ratio::new(3, 45);
        let k = default_thickness(graph.node_count(), alpha);
        Ok(UdsnInstance {
            graph,
            demands,
            k,
            alpha,
            epsilon: Ratio::new(1, 10),
            seed,
            hitting_constant: Ratio::new(2, 1),
            hitting_retries: 5,
        })
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self
    }

    pub fn with_alpha(mut self, alpha: Ratio<i64>) -> Result<Self> {
        if alpha < Ratio::new(0, 1) || alpha > Ratio::new(3, 45) {
            return Err(Error::params("alpha must lie in [0, 3/45]"));
        }
        self.alpha = alpha;
        self.k = default_thickness(self.graph.node_count(), alpha);
        Ok(self)
    }
}

/// Default thickness threshold `⌈n^{3/5 - α/3}⌉`, at least 1.
pub fn default_thickness(n: usize, alpha: Ratio<i64>) -> usize {
    if n <= 1 {
        return 1;
    }
    let a = *alpha.numer() as f64 / *alpha.denom() as f64;
    let exponent = 3.0 / 5.0 - a / 3.0;
    ((n as f64).powf(exponent).ceil() as usize).max(1)
}

/// Hitting-set size target `⌈c·n·ln n / k⌉`, clamped to [1, n].
pub fn hitting_set_size(n: usize, k: usize, c: Ratio<i64>) -> usize {
    if n <= 1 {
        return 1;
    }
    let c = *c.numer() as f64 / *c.denom() as f64;
    let raw = (c * n as f64 * (n as f64).ln() / k as f64).ceil() as usize;
    raw.clamp(1, n)
}

/// Number of nodes on some `s ⇝ t` path: forward ∩ backward reachability.
pub fn path_node_count(g: &DirectedGraph, s: NodeId, t: NodeId) -> usize {
    let fwd = g.reachable_with(s, |_| true);
    let bwd = g.coreachable_with(t, |_| true);
    fwd.iter().zip(bwd.iter()).filter(|&(&a, &b)| a && b).count()
}

/// Splits demand indices into (k-thick, k-thin).
pub fn classify_pairs(inst: &UdsnInstance) -> (Vec<usize>, Vec<usize>) {
    let mut thick = Vec::new();
    let mut thin = Vec::new();
    for (i, &(s, t)) in inst.demands.pairs().iter().enumerate() {
        if path_node_count(&inst.graph, s, t) >= inst.k {
            thick.push(i);
        } else {
            thin.push(i);
        }
    }
    (thick, thin)
}

/// Samples the hitting set and post-checks it against every thick pair's
/// path-node set; pairs still unhit after the retry cap are demoted.
/// Returns `(hit set, demoted pair indices)`.
pub fn sample_hitting_set(inst: &UdsnInstance, thick: &[usize]) -> (Vec<NodeId>, Vec<usize>) {
    let n = inst.graph.node_count();
    let size = hitting_set_size(n, inst.k, inst.hitting_constant);

    // Path-node masks of the thick pairs.
    let masks: Vec<Vec<bool>> = thick
        .iter()
        .map(|&i| {
            let (s, t) = inst.demands.pairs()[i];
            let fwd = inst.graph.reachable_with(s, |_| true);
            let bwd = inst.graph.coreachable_with(t, |_| true);
            fwd.iter().zip(bwd.iter()).map(|(&a, &b)| a && b).collect()
        })
        .collect();

    let mut best: Option<(usize, Vec<NodeId>, Vec<usize>)> = None;
    for attempt in 0..inst.hitting_retries.max(1) as u64 {
        let mut rng = substream(inst.seed, "hitting-set", attempt);
        let mut nodes: Vec<NodeId> = (0..n).collect();
        nodes.shuffle(&mut rng);
        nodes.truncate(size);
        let mut hit_mask = vec![false; n];
        for &v in &nodes {
            hit_mask[v] = true;
        }
        let missed: Vec<usize> = thick
            .iter()
            .enumerate()
            .filter(|&(mi, _)| !masks[mi].iter().zip(&hit_mask).any(|(&m, &h)| m && h))
            .map(|(_, &i)| i)
            .collect();
        if missed.is_empty() {
            return (nodes, Vec::new());
        }
        if best.as_ref().map_or(true, |(c, _, _)| missed.len() < *c) {
            best = Some((missed.len(), nodes, missed));
        }
    }
    let (_, nodes, missed) = best.expect("at least one attempt runs");
    (nodes, missed)
}

/// Statistics of the thick-pair connection step.
#[derive(Debug, Clone, Serialize)]
pub struct ThickStats {
    pub terminals: usize,
    pub hit_pairs: usize,
    /// `sqrt(n · |S|² · |T|)`, the size the bound formula predicts.
    pub bound_estimate: f64,
    pub preserver_edges: usize,
}

/// Connects all thick terminals to and from the hit set with one preserver
/// over the reachable pairs of `(S × T) ∪ (T × S)`.
pub fn connect_thick(
    inst: &UdsnInstance,
    thick: &[usize],
    hitset: &[NodeId],
) -> Result<(Vec<EdgeId>, ThickStats)> {
    if thick.is_empty() {
        return Ok((
            Vec::new(),
            ThickStats {
                terminals: 0,
                hit_pairs: 0,
                bound_estimate: 0.0,
                preserver_edges: 0,
            },
        ));
    }
    if hitset.is_empty() {
        return Err(Error::contract("thick pairs present but hitting set empty"));
    }
    let g = &inst.graph;

    // Terminals of thick pairs, first occurrence order.
    let mut terminals: Vec<NodeId> = Vec::new();
    for &i in thick {
        let (s, t) = inst.demands.pairs()[i];
        for v in [s, t] {
            if !terminals.contains(&v) {
                terminals.push(v);
            }
        }
    }

    // P' = reachable pairs of (S × T) ∪ (T × S).
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    for &h in hitset {
        let reach = g.reachable_set(h);
        for &t in &terminals {
            if h != t && reach[t] {
                pairs.push((h, t));
            }
        }
    }
    for &t in &terminals {
        let reach = g.reachable_set(t);
        for &h in hitset {
            if t != h && reach[h] {
                pairs.push((t, h));
            }
        }
    }
    let mut sources: Vec<NodeId> = hitset.to_vec();
    for &t in &terminals {
        if !sources.contains(&t) {
            sources.push(t);
        }
    }
    let demands = DemandSet::new(pairs, Some(sources))?;
    let hit_pairs = demands.len();

    let cfg = AlgoConfig::new(crate::rng::derive_seed(inst.seed, "connect-thick"));
    let result = crate::preserver::build_preserver(g, &demands, &cfg)?;

    let n = g.node_count() as f64;
    let bound_estimate =
        (n * (hitset.len() as f64).powi(2) * terminals.len() as f64).sqrt();
    let stats = ThickStats {
        terminals: terminals.len(),
        hit_pairs,
        bound_estimate,
        preserver_edges: result.kept_edges.len(),
    };
    Ok((result.kept_edges, stats))
}

/// Serves each listed pair with one shortest path (by edge count), then
/// prunes the union jointly. Heuristic: no approximation factor claimed.
pub fn connect_thin(inst: &UdsnInstance, thin: &[usize]) -> Result<Vec<EdgeId>> {
    let g = &inst.graph;
    let mut mask = vec![false; g.edge_count()];
    for &i in thin {
        let (s, t) = inst.demands.pairs()[i];
        let path = shortest_path_edges(g, s, t)
            .ok_or(Error::InfeasibleDemand(s, t))?;
        for e in path {
            mask[e] = true;
        }
    }
    // Joint greedy prune within the union, demands restricted to the thin list.
    let union: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| mask[e]).collect();
    let thin_pairs: Vec<(NodeId, NodeId)> = thin
        .iter()
        .map(|&i| inst.demands.pairs()[i])
        .collect();
    if thin_pairs.is_empty() {
        return Ok(Vec::new());
    }
    let mut kept = mask;
    for &e in &union {
        kept[e] = false;
        let ok = thin_pairs.iter().all(|&(s, t)| {
            let reach = g.reachable_with(s, |x| kept[x]);
            reach[t]
        });
        if !ok {
            kept[e] = true;
        }
    }
    Ok((0..g.edge_count()).filter(|&e| kept[e]).collect())
}

/// BFS shortest path from `s` to `t` as edge ids; deterministic tie-break by
/// edge insertion order.
pub fn shortest_path_edges(g: &DirectedGraph, s: NodeId, t: NodeId) -> Option<Vec<EdgeId>> {
    let n = g.node_count();
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            break;
        }
        for &e in g.out_edges(u) {
            let v = g.head(e);
            if !seen[v] {
                seen[v] = true;
                parent_edge[v] = Some(e);
                queue.push_back(v);
            }
        }
    }
    if !seen[t] {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = t;
    while cur != s {
        let e = parent_edge[cur].expect("parent chain reaches source");
        path.push(e);
        cur = g.tail(e);
    }
    path.reverse();
    Some(path)
}

/// A UDSN solution with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct UdsnSolution {
    pub kept_edges: Vec<EdgeId>,
    pub thick_pairs: Vec<usize>,
    /// Thin plus demoted pair indices.
    pub thin_pairs: Vec<usize>,
    pub demoted_pairs: Vec<usize>,
    pub hitting_set: Vec<NodeId>,
    pub thick_cost: usize,
    pub thin_cost: usize,
    /// Terminal-degree lower bound on OPT.
    pub opt_lower_bound: usize,
    /// True when the all-pairs thin candidate was sparser.
    pub all_thin_won: bool,
    pub thick_stats: Option<ThickStats>,
    /// |kept| / OPT, exact, when the oracle has been run.
    pub measured_ratio: Option<Ratio<u64>>,
}

impl UdsnSolution {
    /// Fills the measured ratio from an oracle optimum size.
    pub fn attach_oracle(&mut self, opt_edges: usize) {
        if opt_edges > 0 {
            self.measured_ratio = Some(Ratio::new(
                self.kept_edges.len() as u64,
                opt_edges as u64,
            ));
        }
    }
}

/// Runs the full pipeline: classify, sample, connect thick and thin, then
/// compare against the all-thin candidate and return the sparser solution.
/// Feasibility of the result is unconditional.
pub fn solve_udsn(inst: &UdsnInstance) -> Result<UdsnSolution> {
    let (thick, thin) = classify_pairs(inst);
    let (hitset, demoted) = sample_hitting_set(inst, &thick);
    let thick_final: Vec<usize> = thick
        .iter()
        .copied()
        .filter(|i| !demoted.contains(i))
        .collect();
    let mut thin_final: Vec<usize> = thin.clone();
    thin_final.extend(demoted.iter().copied());
    thin_final.sort_unstable();

    let (thick_edges, thick_stats) = connect_thick(inst, &thick_final, &hitset)?;
    let thin_edges = connect_thin(inst, &thin_final)?;
    let mut combined: Vec<EdgeId> = thick_edges.clone();
    combined.extend(&thin_edges);
    combined.sort_unstable();
    combined.dedup();

    let all: Vec<usize> = (0..inst.demands.len()).collect();
    let all_thin = connect_thin(inst, &all)?;

    let feasible = |edges: &[EdgeId]| is_preserver(&inst.graph, edges, &inst.demands);
    let combined_ok = feasible(&combined);
    let all_thin_ok = feasible(&all_thin);
    if !combined_ok && !all_thin_ok {
        return Err(Error::contract(
            "no candidate solution satisfied all demands".to_string(),
        ));
    }
    let all_thin_won = !combined_ok || (all_thin_ok && all_thin.len() < combined.len());
    let kept = if all_thin_won { all_thin } else { combined };

    // OPT ≥ half the terminal out/in needs.
    let mut need_out = std::collections::HashSet::new();
    let mut need_in = std::collections::HashSet::new();
    for &(s, t) in inst.demands.pairs() {
        need_out.insert(s);
        need_in.insert(t);
    }
    let opt_lower_bound = (need_out.len() + need_in.len()).div_ceil(2).max(1);

    Ok(UdsnSolution {
        kept_edges: kept,
        thick_pairs: thick_final,
        thin_pairs: thin_final,
        demoted_pairs: demoted,
        hitting_set: hitset,
        thick_cost: thick_edges.len(),
        thin_cost: thin_edges.len(),
        opt_lower_bound,
        all_thin_won,
        thick_stats: Some(thick_stats),
        measured_ratio: None,
    })
}

/// Exact minimum feasible edge set. For a feasibility-checked instance this
/// coincides with the minimum preserver, so the same subset search applies.
pub fn brute_force_udsn(inst: &UdsnInstance, budget: usize) -> Result<Vec<EdgeId>> {
    brute_force_opt(&inst.graph, &inst.demands, budget)
}

/// `1/2 + 5α/6`, the exponent of the thick-step cost.
pub fn thick_exponent(alpha: Ratio<i64>) -> Ratio<i64> {
    Ratio::new(1, 2) + Ratio::new(5, 6) * alpha
}

/// `3/5 − α/3`, the approximation-factor exponent.
pub fn factor_exponent(alpha: Ratio<i64>) -> Ratio<i64> {
    Ratio::new(3, 5) - alpha / 3
}

/// Whether the thick-step cost stays within the factor: `1/2 + 5α/6 ≤ 3/5 − α/3`.
pub fn exponent_inequality_holds(alpha: Ratio<i64>) -> bool {
    thick_exponent(alpha) <= factor_exponent(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_instance(n: usize) -> UdsnInstance {
        let g = DirectedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        let d = DemandSet::new(vec![(0, n - 1)], None).unwrap();
        UdsnInstance::new(g, d, 7).unwrap()
    }

    #[test]
    fn thickness_classification_on_path() {
        // s→a→t: the path-node set has 3 nodes.
        let inst = path_instance(3).with_k(3);
        let (thick, thin) = classify_pairs(&inst);
        assert_eq!(thick, vec![0]);
        assert!(thin.is_empty());

        let inst = path_instance(3).with_k(4);
        let (thick, thin) = classify_pairs(&inst);
        assert!(thick.is_empty());
        assert_eq!(thin, vec![0]);
    }

    #[test]
    fn classification_matches_enumeration_oracle() {
        for seed in 0..8 {
            let g = crate::gen::random_dag(10, 22, seed);
            let d = crate::gen::random_demands(&g, 4, None, true, seed + 50).unwrap();
            if d.is_empty() {
                continue;
            }
            let inst = UdsnInstance::new(g, d, seed).unwrap().with_k(4);
            let (thick, thin) = classify_pairs(&inst);
            for (list, is_thick) in [(&thick, true), (&thin, false)] {
                for &i in list.iter() {
                    let (s, t) = inst.demands.pairs()[i];
                    // Oracle: enumerate nodes v with s⇝v and v⇝t directly.
                    let mut on_path = 0;
                    for v in 0..inst.graph.node_count() {
                        let sv = inst.graph.reachable_set(s)[v];
                        let vt = inst.graph.reachable_set(v)[t];
                        if sv && vt {
                            on_path += 1;
                        }
                    }
                    assert_eq!(on_path >= inst.k, is_thick, "pair {i} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn infeasible_demand_rejected_at_load() {
        let g = DirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let d = DemandSet::new(vec![(0, 2)], None).unwrap();
        assert!(matches!(
            UdsnInstance::new(g, d, 1),
            Err(Error::InfeasibleDemand(0, 2))
        ));
    }

    #[test]
    fn hitting_set_size_formula() {
        // k = n: ⌈c·ln n⌉ nodes.
        let n = 100;
        let size = hitting_set_size(n, n, Ratio::new(2, 1));
        assert_eq!(size, (2.0 * (n as f64).ln()).ceil() as usize);
    }

    #[test]
    fn whole_graph_path_set_is_always_hit() {
        let inst = path_instance(6).with_k(6);
        let (thick, _) = classify_pairs(&inst);
        assert_eq!(thick.len(), 1);
        let (hitset, demoted) = sample_hitting_set(&inst, &thick);
        assert!(!hitset.is_empty());
        assert!(demoted.is_empty());
    }

    #[test]
    fn thin_connection_keeps_single_path() {
        let inst = path_instance(5);
        let edges = connect_thin(&inst, &[0]).unwrap();
        assert_eq!(edges, vec![0, 1, 2, 3]);
        assert!(connect_thin(&inst, &[]).unwrap().is_empty());
    }

    #[test]
    fn connect_thick_empty_cases() {
        let inst = path_instance(4);
        let (edges, stats) = connect_thick(&inst, &[], &[1]).unwrap();
        assert!(edges.is_empty());
        assert_eq!(stats.terminals, 0);
    }

    #[test]
    fn solve_on_path_is_exact() {
        let inst = path_instance(6);
        let sol = solve_udsn(&inst).unwrap();
        assert_eq!(sol.kept_edges.len(), 5);
        assert!(is_preserver(&inst.graph, &sol.kept_edges, &inst.demands));
        let opt = brute_force_udsn(&inst, 22).unwrap();
        assert_eq!(opt.len(), 5);
    }

    #[test]
    fn solutions_feasible_on_random_fixtures() {
        let mut checked = 0;
        for seed in 0..12 {
            let g = crate::gen::random_digraph(10, 18, seed);
            let d = crate::gen::random_demands(&g, 4, None, true, seed + 30).unwrap();
            if d.is_empty() {
                continue;
            }
            let inst = UdsnInstance::new(g, d, seed).unwrap();
            let sol = solve_udsn(&inst).unwrap();
            assert!(is_preserver(&inst.graph, &sol.kept_edges, &inst.demands));
            let opt = brute_force_udsn(&inst, 22).unwrap();
            assert!(sol.kept_edges.len() >= opt.len());
            checked += 1;
        }
        assert!(checked >= 8);
    }

    #[test]
    fn exponent_identity_exact() {
        // The paper's choice α ≤ 3/45 is sufficient.
        for alpha in [Ratio::new(0, 1), Ratio::new(1, 45), Ratio::new(2, 45), Ratio::new(3, 45)] {
            assert!(exponent_inequality_holds(alpha), "alpha = {alpha}");
        }
        // Exact boundary of the inequality itself: equality at α = 3/35.
        let boundary = Ratio::new(3, 35);
        assert_eq!(thick_exponent(boundary), factor_exponent(boundary));
        assert!(exponent_inequality_holds(boundary));
        assert!(!exponent_inequality_holds(Ratio::new(1, 10)));
        // Sanity of the paper values: lhs(3/45) = 5/9, rhs = 26/45.
        assert_eq!(thick_exponent(Ratio::new(3, 45)), Ratio::new(5, 9));
        assert_eq!(factor_exponent(Ratio::new(3, 45)), Ratio::new(26, 45));
    }

    #[test]
    fn thickness_monotone_in_k() {
        let g = crate::gen::random_dag(10, 20, 2);
        let d = crate::gen::random_demands(&g, 5, None, true, 3).unwrap();
        let inst = UdsnInstance::new(g, d, 2).unwrap();
        let mut prev: Option<Vec<usize>> = None;
        for k in 1..=10 {
            let (thick, _) = classify_pairs(&inst.clone().with_k(k));
            if let Some(p) = prev {
                assert!(thick.iter().all(|i| p.contains(i)), "k = {k}");
            }
            prev = Some(thick);
        }
    }
}
