//! Influence graphs, seed sets and the reversed transition matrix.
//!
//! An [`InfluenceGraph`] stores the weight `w_ij` of node `i` on node `j` as a
//! sparse out-adjacency list. Under the Linear Threshold model the weights
//! entering any node must sum to at most one; [`InfluenceGraph::validate`]
//! reports every place where that (or the `[0, 1]` range) fails, and every
//! operation that needs a well-formed instance calls
//! [`InfluenceGraph::ensure_valid`] first.
//!
//! The [`TransitionMatrix`] is the transpose of the weight matrix with each
//! row completed by a self-loop so that it becomes row-stochastic: walking
//! this chain moves *against* the direction of influence.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for stochasticity and feasibility checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Weighted directed influence graph.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceGraph {
    n: usize,
    out: Vec<Vec<(usize, f64)>>,
    labels: Option<Vec<String>>,
}

impl InfluenceGraph {
    /// Builds a graph from `(src, dst, weight)` triples.
    ///
    /// Exact-zero weights are dropped. Weights are otherwise stored as given,
    /// even out of range, so that [`validate`](Self::validate) can report them.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut out = vec![Vec::new(); n];
        for (src, dst, w) in edges {
            if src >= n {
                return Err(Error::NodeOutOfRange { node: src, n });
            }
            if dst >= n {
                return Err(Error::NodeOutOfRange { node: dst, n });
            }
            if src == dst {
                return Err(Error::SelfLoop(src));
            }
            if w == 0.0 {
                continue;
            }
            out[src].push((dst, w));
        }
        for (src, list) in out.iter_mut().enumerate() {
            list.sort_by_key(|&(dst, _)| dst);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::DuplicateEdge { src, dst: pair[0].0 });
            }
        }
        Ok(InfluenceGraph { n, out, labels: None })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        InfluenceGraph {
            n,
            out: vec![Vec::new(); n],
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} labels given for {} nodes",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Out-edges of `i` as `(target, weight)`, sorted by target.
    pub fn out_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.out[i]
    }

    /// `w_ij`, zero when no edge is stored.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.out[i]
            .binary_search_by_key(&j, |&(dst, _)| dst)
            .map(|k| self.out[i][k].1)
            .unwrap_or(0.0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&(j, w)| (i, j, w)))
    }

    /// In-edges of every node as `(source, weight)`, sorted by source.
    pub fn in_edges(&self) -> Vec<Vec<(usize, f64)>> {
        let mut ins = vec![Vec::new(); self.n];
        for (i, j, w) in self.edges() {
            ins[j].push((i, w));
        }
        ins
    }

    /// `Σ_{i≠j} w_ij` for every node `j`.
    pub fn in_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for (_, j, w) in self.edges() {
            sums[j] += w;
        }
        sums
    }

    /// Total influence `b_j(A) = Σ_{i∈A} w_ij` flowing into `j` from `set`.
    pub fn influence_into(&self, j: usize, set: &SeedSet) -> f64 {
        set.iter()
            .filter(|&i| i != j)
            .map(|i| self.weight(i, j))
            .sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of node `i`, falling back to its id.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, j, w) in self.edges() {
            if !(0.0..=1.0).contains(&w) {
                violations.push(Violation::WeightOutOfRange { src: i, dst: j, weight: w });
            }
        }
        for (j, s) in self.in_sums().into_iter().enumerate() {
            if !(s <= 1.0 + FEASIBILITY_TOL) {
                violations.push(Violation::InSumExceeded { node: j, in_sum: s });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(report))
        }
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node, n: self.n })
        }
    }

    /// `P = Wᵀ` with each row completed by a self-loop.
    pub fn transition_matrix(&self) -> Result<TransitionMatrix> {
        make_transition_matrix(self)
    }
}

/// One broken invariant of an [`InfluenceGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WeightOutOfRange { src: usize, dst: usize, weight: f64 },
    InSumExceeded { node: usize, in_sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WeightOutOfRange { src, dst, weight } => {
                write!(f, "edge ({src}, {dst}) has weight {weight} outside [0, 1]")
            }
            Violation::InSumExceeded { node, in_sum } => {
                write!(f, "node {node} has incoming weight {in_sum} > 1")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Validates `g`; a free-function form of [`InfluenceGraph::validate`].
pub fn validate_graph(g: &InfluenceGraph) -> ValidationReport {
    g.validate()
}

/// Initial active set. Stored sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeedSet(Vec<usize>);

impl SeedSet {
    pub fn new<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        let set: BTreeSet<usize> = nodes.into_iter().collect();
        SeedSet(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        SeedSet(Vec::new())
    }

    /// Every node of an `n`-node graph.
    pub fn full(n: usize) -> Self {
        SeedSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Copy of the set with `node` added.
    pub fn with(&self, node: usize) -> SeedSet {
        let mut nodes = self.0.clone();
        if let Err(pos) = nodes.binary_search(&node) {
            nodes.insert(pos, node);
        }
        SeedSet(nodes)
    }

    /// Copy of the set with `node` removed.
    pub fn without(&self, node: usize) -> SeedSet {
        SeedSet(self.0.iter().copied().filter(|&v| v != node).collect())
    }

    /// Checks every id against an `n`-node graph.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&v| v >= n) {
            Some(&node) => Err(Error::NodeOutOfRange { node, n }),
            None => Ok(()),
        }
    }

    /// Checks ids and rejects the empty set.
    pub fn check_nonempty(&self, n: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySeedSet);
        }
        self.check(n)
    }
}

impl FromIterator<usize> for SeedSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        SeedSet::new(iter)
    }
}

impl fmt::Display for SeedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Per-node influence level `α_i` and susceptance `β_i` of a complete UISLT graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UisltParams {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl UisltParams {
    /// Checks `α_i ≥ 0`, `β_i > 0` and `Σ_{j≠i} α_j ≤ 1/β_i` for every node.
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::InvalidArgument(format!(
                "{} alphas but {} betas",
                alphas.len(),
                betas.len()
            )));
        }
        let total: f64 = alphas.iter().sum();
        for (i, (&a, &b)) in alphas.iter().zip(&betas).enumerate() {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::InfeasibleParams {
                    node: i,
                    detail: format!("alpha {a} must be non-negative"),
                });
            }
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::InfeasibleParams {
                    node: i,
                    detail: format!("beta {b} must be positive"),
                });
            }
            let others = total - a;
            if b * others > 1.0 + FEASIBILITY_TOL {
                return Err(Error::InfeasibleParams {
                    node: i,
                    detail: format!("sum of other alphas {others} exceeds 1/beta = {}", 1.0 / b),
                });
            }
        }
        Ok(UisltParams { alphas, betas })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

/// Complete graph with `w_ij = α_i β_j` for `i ≠ j`.
pub fn build_uislt(params: &UisltParams) -> Result<InfluenceGraph> {
    let n = params.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1));
    for (i, &a) in params.alphas.iter().enumerate() {
        for (j, &b) in params.betas.iter().enumerate() {
            if i != j {
                edges.push((i, j, a * b));
            }
        }
    }
    InfluenceGraph::from_edges(n, edges)
}

/// Row-stochastic matrix of the reversed chain: `p_jl = w_lj` for `l ≠ j`,
/// `p_jj = 1 − Σ_{i≠j} w_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl TransitionMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Nonzero entries of row `j` as `(column, probability)`, sorted by column.
    pub fn row(&self, j: usize) -> &[(usize, f64)] {
        &self.rows[j]
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.rows[j]
            .binary_search_by_key(&l, |&(c, _)| c)
            .map(|k| self.rows[j][k].1)
            .unwrap_or(0.0)
    }

    /// Dense copy; only sensible for small graphs.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (j, row) in self.rows.iter().enumerate() {
            for &(l, p) in row {
                m[j][l] = p;
            }
        }
        m
    }
}

pub fn make_transition_matrix(g: &InfluenceGraph) -> Result<TransitionMatrix> {
    g.ensure_valid()?;
    let mut rows = g.in_edges();
    for (j, row) in rows.iter_mut().enumerate() {
        let in_sum: f64 = row.iter().map(|&(_, w)| w).sum();
        let self_loop = (1.0 - in_sum).max(0.0);
        if self_loop > 0.0 {
            let pos = row.partition_point(|&(c, _)| c < j);
            row.insert(pos, (j, self_loop));
        }
    }
    Ok(TransitionMatrix { n: g.node_count(), rows })
}

/// Simple undirected graph given as symmetric adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    neighbors: Vec<BTreeSet<usize>>,
}

impl Adjacency {
    /// Builds from undirected edges; each edge is stored in both directions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut neighbors = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            neighbors[u].insert(v);
            neighbors[v].insert(u);
        }
        Ok(Adjacency { neighbors })
    }

    /// Builds from a dense 0/1 matrix, rejecting asymmetry and a nonzero diagonal.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut neighbors = vec![BTreeSet::new(); n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &a) in row.iter().enumerate() {
                if a > 1 {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) is {a}, expected 0 or 1")));
                }
                if a == 1 {
                    if i == j {
                        return Err(Error::SelfLoop(i));
                    }
                    if rows[j][i] != 1 {
                        return Err(Error::AsymmetricAdjacency(i, j));
                    }
                    neighbors[i].insert(j);
                }
            }
        }
        Ok(Adjacency { neighbors })
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[i].iter().copied()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }
}

/// Degree-normalized influence: `w_ij = a_ij / d_j`, so every column sums to one.
pub fn normalize_adjacency(adj: &Adjacency) -> Result<InfluenceGraph> {
    let n = adj.node_count();
    if let Some(j) = (0..n).find(|&j| adj.degree(j) == 0) {
        return Err(Error::IsolatedNode(j));
    }
    let edges = (0..n).flat_map(|i| {
        adj.neighbors(i)
            .map(move |j| (i, j, 1.0 / adj.degree(j) as f64))
    });
    InfluenceGraph::from_edges(n, edges)
}
