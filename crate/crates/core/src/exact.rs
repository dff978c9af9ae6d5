//! Exact influence spread for small graphs.
//!
//! Two independent routes are provided:
//!
//! * the subnetwork recursion `σ(N, i) = 1 + Σ_{j≠i} w_ij σ(N∖{i}, j)`,
//!   combined over a seed set by evaluating each seed on the subnetwork that
//!   excludes the other seeds, memoized on `(excluded mask, node)`;
//! * first-hit probabilities along self-avoiding paths of the reversed chain
//!   `P = Wᵀ`, where `σ(A₀) = |A₀| + Σ_{j∉A₀} c(j → A₀)`.
//!
//! Both are exponential in the worst case and refuse inputs above a size cap
//! instead of truncating.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{make_transition_matrix, InfluenceGraph, SeedSet, TransitionMatrix};

/// Largest graph representable by a [`NodeMask`].
pub const MAX_EXACT_NODES: usize = 64;
pub const DEFAULT_RECURSION_CAP: usize = 20;
pub const DEFAULT_PATH_CAP: usize = 12;
pub const DEFAULT_SUBSET_BUDGET: u128 = 1_000_000;

/// Bitset over node ids `< 64`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct NodeMask(u64);

impl NodeMask {
    pub const fn empty() -> Self {
        NodeMask(0)
    }

    /// Nodes `0..n`.
    pub fn all(n: usize) -> Self {
        assert!(n <= MAX_EXACT_NODES);
        if n == 64 {
            NodeMask(u64::MAX)
        } else {
            NodeMask((1u64 << n) - 1)
        }
    }

    pub fn single(v: usize) -> Self {
        NodeMask(1u64 << v)
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        NodeMask(nodes.into_iter().fold(0, |m, v| m | (1u64 << v)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[must_use]
    pub fn with(self, v: usize) -> Self {
        NodeMask(self.0 | (1u64 << v))
    }

    #[must_use]
    pub fn without(self, v: usize) -> Self {
        NodeMask(self.0 & !(1u64 << v))
    }

    #[must_use]
    pub fn union(self, other: NodeMask) -> Self {
        NodeMask(self.0 | other.0)
    }

    #[must_use]
    pub fn minus(self, other: NodeMask) -> Self {
        NodeMask(self.0 & !other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl From<&SeedSet> for NodeMask {
    fn from(set: &SeedSet) -> Self {
        NodeMask::from_nodes(set.iter())
    }
}

fn check_mask_size(n: usize) -> Result<()> {
    if n > MAX_EXACT_NODES {
        return Err(Error::TooLarge {
            size: n,
            cap: MAX_EXACT_NODES,
        });
    }
    Ok(())
}

/// Memoized subnetwork recursion over one graph.
///
/// With no target the recursion yields `σ`; with a target `t` every node
/// contributes `[node = t]` instead of one, which yields the probability that
/// `t` ends up active.
pub struct ExactEngine<'g> {
    g: &'g InfluenceGraph,
    cap: usize,
    target: Option<usize>,
    memo: HashMap<(u64, u32), f64>,
}

impl<'g> ExactEngine<'g> {
    pub fn new(g: &'g InfluenceGraph, cap: usize) -> Result<Self> {
        check_mask_size(g.node_count())?;
        g.ensure_valid()?;
        Ok(ExactEngine {
            g,
            cap,
            target: None,
            memo: HashMap::new(),
        })
    }

    /// Engine computing activation probabilities of `target`.
    pub fn for_target(g: &'g InfluenceGraph, cap: usize, target: usize) -> Result<Self> {
        g.check_node(target)?;
        let mut e = Self::new(g, cap)?;
        e.target = Some(target);
        Ok(e)
    }

    fn check_size(&self, excluded: NodeMask) -> Result<()> {
        let size = self.g.node_count() - excluded.len();
        if size > self.cap {
            return Err(Error::TooLarge { size, cap: self.cap });
        }
        Ok(())
    }

    fn recurse(&mut self, excluded: u64, i: usize) -> f64 {
        if let Some(&v) = self.memo.get(&(excluded, i as u32)) {
            return v;
        }
        let own = match self.target {
            None => 1.0,
            Some(t) if t == i => 1.0,
            Some(_) => 0.0,
        };
        let next = excluded | (1u64 << i);
        let mut total = own;
        if !matches!(self.target, Some(t) if next >> t & 1 == 1) {
            let g = self.g;
            for &(j, w) in g.out_edges(i) {
                if next >> j & 1 == 0 {
                    total += w * self.recurse(next, j);
                }
            }
        }
        self.memo.insert((excluded, i as u32), total);
        total
    }

    /// `σ(N ∖ excluded, i)`.
    pub fn sigma_node(&mut self, i: usize, excluded: NodeMask) -> Result<f64> {
        self.g.check_node(i)?;
        if excluded.contains(i) {
            return Err(Error::InvalidArgument(format!("node {i} is excluded")));
        }
        self.check_size(excluded)?;
        Ok(self.recurse(excluded.bits(), i))
    }

    /// `σ(N, A₀) = Σ_{i∈A₀} σ((N ∖ A₀) ∪ {i}, i)`, with `extra` nodes deleted
    /// from the network beforehand.
    pub fn sigma_set_within(&mut self, a0: &SeedSet, extra: NodeMask) -> Result<f64> {
        a0.check_nonempty(self.g.node_count())?;
        let seeds = NodeMask::from(a0);
        if let Some(v) = a0.iter().find(|&v| extra.contains(v)) {
            return Err(Error::InvalidArgument(format!("seed {v} is excluded")));
        }
        self.check_size(extra.union(seeds).without(a0.as_slice()[0]))?;
        let mut total = 0.0;
        for i in a0.iter() {
            total += self.recurse(seeds.without(i).union(extra).bits(), i);
        }
        Ok(total)
    }

    pub fn sigma_set(&mut self, a0: &SeedSet) -> Result<f64> {
        self.sigma_set_within(a0, NodeMask::empty())
    }
}

/// `σ(N ∖ excluded, i)` by the subnetwork recursion.
pub fn sigma_node_exact(g: &InfluenceGraph, i: usize, excluded: NodeMask) -> Result<f64> {
    ExactEngine::new(g, DEFAULT_RECURSION_CAP)?.sigma_node(i, excluded)
}

/// `σ(N, A₀)` by the subnetwork recursion.
pub fn sigma_set_exact(g: &InfluenceGraph, a0: &SeedSet) -> Result<f64> {
    ExactEngine::new(g, DEFAULT_RECURSION_CAP)?.sigma_set(a0)
}

/// Exact `g_j = P(j ∈ A_S)` by the target-weighted recursion.
pub fn activation_prob_exact(g: &InfluenceGraph, a0: &SeedSet, j: usize) -> Result<f64> {
    ExactEngine::for_target(g, DEFAULT_RECURSION_CAP, j)?.sigma_set(a0)
}

/// Exact activation probabilities of every node.
pub fn activation_probs_exact(g: &InfluenceGraph, a0: &SeedSet, cap: usize) -> Result<Vec<f64>> {
    (0..g.node_count())
        .map(|j| {
            if a0.contains(j) {
                Ok(1.0)
            } else {
                ExactEngine::for_target(g, cap, j)?.sigma_set(a0)
            }
        })
        .collect()
}

/// First-hit query `c^W(j →v→ D)` on the reversed chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProbQuery {
    pub start: usize,
    pub target: NodeMask,
    pub via: Option<usize>,
    /// Nodes usable as intermediates (`W`).
    pub allowed: NodeMask,
}

impl PathProbQuery {
    /// `c(j → D)` with every node allowed.
    pub fn new(n: usize, start: usize, target: NodeMask) -> Self {
        PathProbQuery {
            start,
            target,
            via: None,
            allowed: NodeMask::all(n),
        }
    }

    #[must_use]
    pub fn via(mut self, v: usize) -> Self {
        self.via = Some(v);
        self
    }

    #[must_use]
    pub fn allowed(mut self, allowed: NodeMask) -> Self {
        self.allowed = allowed;
        self
    }
}

/// Enumeration settings for [`acyclic_hit_prob_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    pub cap: usize,
    /// Drop partial paths whose probability falls below this value. Neighbors
    /// are then visited in descending probability order. `None` enumerates
    /// every path, which is what the oracle comparisons need.
    pub prune_below: Option<f64>,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            cap: DEFAULT_PATH_CAP,
            prune_below: None,
        }
    }
}

struct PathWalk<'p> {
    p: &'p TransitionMatrix,
    target: u64,
    allowed: u64,
    via: Option<usize>,
    prune_below: Option<f64>,
}

impl PathWalk<'_> {
    fn walk(&self, cur: usize, visited: u64, prob: f64, seen_via: bool) -> f64 {
        let mut total = 0.0;
        let step = |l: usize, p: f64, total: &mut f64| {
            if l == cur || visited >> l & 1 == 1 || p == 0.0 {
                return;
            }
            let q = prob * p;
            if let Some(floor) = self.prune_below {
                if q < floor {
                    return;
                }
            }
            if self.target >> l & 1 == 1 {
                if seen_via {
                    *total += q;
                }
            } else if self.allowed >> l & 1 == 1 {
                let seen = seen_via || self.via == Some(l);
                *total += self.walk(l, visited | (1u64 << l), q, seen);
            }
        };
        if self.prune_below.is_some() {
            let mut row = self.p.row(cur).to_vec();
            row.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            for (l, p) in row {
                step(l, p, &mut total);
            }
        } else {
            for &(l, p) in self.p.row(cur) {
                step(l, p, &mut total);
            }
        }
        total
    }
}

/// `c^W(j →v→ D)` with default options (full enumeration).
pub fn acyclic_hit_prob(p: &TransitionMatrix, q: &PathProbQuery) -> Result<f64> {
    acyclic_hit_prob_with(p, q, PathOptions::default())
}

/// Probability that the reversed chain started at `q.start` first enters
/// `q.target` along a self-avoiding path whose intermediate states lie in
/// `q.allowed`, and (when `q.via` is set) which passes through `q.via`
/// before arriving.
pub fn acyclic_hit_prob_with(p: &TransitionMatrix, q: &PathProbQuery, opts: PathOptions) -> Result<f64> {
    let n = p.node_count();
    check_mask_size(n)?;
    if q.start >= n {
        return Err(Error::NodeOutOfRange { node: q.start, n });
    }
    if let Some(v) = q.via {
        if v >= n {
            return Err(Error::NodeOutOfRange { node: v, n });
        }
        if q.target.contains(v) {
            return Err(Error::InvalidArgument(format!("via node {v} lies in the target set")));
        }
    }
    let size = q.allowed.minus(q.target).len();
    if size > opts.cap {
        return Err(Error::TooLarge { size, cap: opts.cap });
    }
    if q.target.contains(q.start) {
        return Ok(if q.via.is_none() { 1.0 } else { 0.0 });
    }
    if !q.allowed.contains(q.start) {
        return Ok(0.0);
    }
    let walk = PathWalk {
        p,
        target: q.target.bits(),
        allowed: q.allowed.bits(),
        via: q.via,
        prune_below: opts.prune_below,
    };
    let seen_via = q.via.is_none() || q.via == Some(q.start);
    Ok(walk.walk(q.start, 1u64 << q.start, 1.0, seen_via))
}

/// `σ(N, A₀) = |A₀| + Σ_{j∉A₀} c(j → A₀)` on the reversed chain.
pub fn sigma_via_paths(g: &InfluenceGraph, a0: &SeedSet) -> Result<f64> {
    let n = g.node_count();
    a0.check_nonempty(n)?;
    check_mask_size(n)?;
    let p = make_transition_matrix(g)?;
    let target = NodeMask::from(a0);
    let mut total = a0.len() as f64;
    for j in (0..n).filter(|&j| !a0.contains(j)) {
        total += acyclic_hit_prob(&p, &PathProbQuery::new(n, j, target))?;
    }
    Ok(total)
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Best `K`-subset by exhaustive search, with the default budget.
pub fn optimal_seed_exhaustive(g: &InfluenceGraph, k: usize) -> Result<(SeedSet, f64)> {
    optimal_seed_exhaustive_with(g, k, DEFAULT_SUBSET_BUDGET, DEFAULT_RECURSION_CAP)
}

/// Best `K`-subset by exhaustive search. Subsets are visited in
/// lexicographic order and only a strictly larger value replaces the
/// incumbent, so ties resolve to the lexicographically smallest set.
pub fn optimal_seed_exhaustive_with(
    g: &InfluenceGraph,
    k: usize,
    budget: u128,
    cap: usize,
) -> Result<(SeedSet, f64)> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("K = {k} must lie in 1..={n}")));
    }
    let count = binomial(n, k);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut engine = ExactEngine::new(g, cap)?;
    let mut best: Option<(SeedSet, f64)> = None;
    for combo in (0..n).combinations(k) {
        let set = SeedSet::new(combo);
        let value = engine.sigma_set(&set)?;
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((set, value));
        }
    }
    Ok(best.expect("at least one subset"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> InfluenceGraph {
        InfluenceGraph::from_edges(2, [(0, 1, 0.5)]).unwrap()
    }

    #[test]
    fn single_node_has_unit_influence() {
        let g = InfluenceGraph::empty(1);
        assert_eq!(sigma_node_exact(&g, 0, NodeMask::empty()).unwrap(), 1.0);
    }

    #[test]
    fn two_node_example() {
        let g = two_node();
        assert_eq!(sigma_node_exact(&g, 0, NodeMask::empty()).unwrap(), 1.5);
        assert_eq!(sigma_via_paths(&g, &SeedSet::new([0])).unwrap(), 1.5);
        assert_eq!(activation_prob_exact(&g, &SeedSet::new([0]), 1).unwrap(), 0.5);
        assert_eq!(activation_prob_exact(&g, &SeedSet::new([0]), 0).unwrap(), 1.0);
    }

    #[test]
    fn three_cycle_example() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5), (2, 0, 0.5)]).unwrap();
        let s = sigma_node_exact(&g, 0, NodeMask::empty()).unwrap();
        // 1 + w01 + w01 w12, the self-avoiding path sum from node 0.
        assert_eq!(s, 1.0 + 0.5 * (1.0 + 0.5));
        assert_eq!(s, 1.0 + 0.5 + 0.5 * 0.5);
        assert_eq!(s, 1.75);
    }

    #[test]
    fn full_seed_set_gives_n() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        assert_eq!(sigma_set_exact(&g, &SeedSet::full(3)).unwrap(), 3.0);
        assert_eq!(sigma_via_paths(&g, &SeedSet::full(3)).unwrap(), 3.0);
    }

    #[test]
    fn disjoint_components_add() {
        let g = InfluenceGraph::from_edges(4, [(0, 1, 0.3), (2, 3, 0.8)]).unwrap();
        let pair = sigma_set_exact(&g, &SeedSet::new([0, 2])).unwrap();
        let a = sigma_set_exact(&g, &SeedSet::new([0])).unwrap();
        let b = sigma_set_exact(&g, &SeedSet::new([2])).unwrap();
        assert!((pair - (a + b)).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_graph() {
        let g = InfluenceGraph::empty(4);
        assert_eq!(sigma_via_paths(&g, &SeedSet::new([1, 3])).unwrap(), 2.0);
        assert_eq!(activation_prob_exact(&g, &SeedSet::new([1]), 0).unwrap(), 0.0);
    }

    #[test]
    fn hit_prob_basics() {
        let g = InfluenceGraph::from_edges(2, [(0, 1, 0.4)]).unwrap();
        let p = make_transition_matrix(&g).unwrap();
        let q = PathProbQuery::new(2, 1, NodeMask::single(0));
        assert_eq!(acyclic_hit_prob(&p, &q).unwrap(), 0.4);
        let q = PathProbQuery::new(2, 0, NodeMask::single(0));
        assert_eq!(acyclic_hit_prob(&p, &q).unwrap(), 1.0);
        assert!(acyclic_hit_prob(&p, &PathProbQuery::new(2, 1, NodeMask::single(0)).via(0)).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let edges: Vec<_> = (0..24).map(|i| (i, i + 1, 0.5)).collect();
        let g = InfluenceGraph::from_edges(25, edges).unwrap();
        assert!(matches!(
            sigma_set_exact(&g, &SeedSet::new([0])),
            Err(Error::TooLarge { size: 25, cap: 20 })
        ));
        assert!(matches!(
            sigma_via_paths(&g, &SeedSet::new([0])),
            Err(Error::TooLarge { .. })
        ));
        let big = InfluenceGraph::empty(65);
        assert!(matches!(
            sigma_set_exact(&big, &SeedSet::new([0])),
            Err(Error::TooLarge { size: 65, cap: 64 })
        ));
        assert!(matches!(
            optimal_seed_exhaustive_with(&InfluenceGraph::empty(30), 10, 1000, 30),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exhaustive_full_set() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let (set, value) = optimal_seed_exhaustive(&g, 3).unwrap();
        assert_eq!(set, SeedSet::full(3));
        assert_eq!(value, 3.0);
    }

    #[test]
    fn exhaustive_ties_pick_smallest_set() {
        let g = InfluenceGraph::empty(4);
        let (set, value) = optimal_seed_exhaustive(&g, 2).unwrap();
        assert_eq!(set, SeedSet::new([0, 1]));
        assert_eq!(value, 2.0);
    }

    #[test]
    fn pruning_only_drops_small_paths() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 1e-9), (0, 2, 0.3)]).unwrap();
        let p = make_transition_matrix(&g).unwrap();
        let q = PathProbQuery::new(3, 2, NodeMask::single(0));
        let full = acyclic_hit_prob(&p, &q).unwrap();
        let pruned = acyclic_hit_prob_with(&p, &q, PathOptions { cap: 12, prune_below: Some(1e-6) }).unwrap();
        assert!((full - (0.3 + 1e-9 * 0.5)).abs() < 1e-15);
        assert_eq!(pruned, 0.3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }
}
