//! Node rankings: stationary distribution of the reversed chain, degree
//! heuristics and individual influence (the G1 list).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{Evaluator, Session};
use crate::graph::{InfluenceGraph, SeedSet, TransitionMatrix};

pub const TIE_BREAK: &str = "ascending_node_id";
pub const DEFAULT_DAMPING: f64 = 1.0;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Nodes ordered by descending score, ties by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankList {
    pub entries: Vec<(usize, f64)>,
    pub method: String,
    pub tie_break: String,
    pub metadata: BTreeMap<String, String>,
}

/// Descending score, then ascending id.
pub fn rank_order(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

impl RankList {
    pub fn from_scores(scores: Vec<f64>, method: &str) -> Self {
        let mut entries: Vec<(usize, f64)> = scores.into_iter().enumerate().collect();
        entries.sort_by(rank_order);
        RankList {
            entries,
            method: method.to_string(),
            tie_break: TIE_BREAK.to_string(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn top(&self, k: usize) -> SeedSet {
        self.nodes().take(k).collect()
    }

    /// Scores indexed by node id.
    pub fn scores_by_node(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.entries.len()];
        for &(v, x) in &self.entries {
            s[v] = x;
        }
        s
    }
}

/// Stationary distribution of `damping · P + (1 − damping) · uniform`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub pi: Vec<f64>,
    pub iterations: usize,
    /// `‖π P_d − π‖₁` at the returned `π`.
    pub residual: f64,
}

fn step(p: &TransitionMatrix, pi: &[f64], damping: f64, out: &mut [f64]) {
    let n = pi.len();
    out.fill((1.0 - damping) / n as f64);
    for (j, &mass) in pi.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for &(l, w) in p.row(j) {
            out[l] += damping * mass * w;
        }
    }
}

/// Power iteration for the stationary distribution.
///
/// Iterates the lazy chain `(I + P_d) / 2`, which has the same fixed points
/// but also converges when `P_d` is periodic (degree-normalized trees are
/// bipartite and have no self-loops). Convergence is tested on the L1
/// residual of `P_d` itself.
pub fn stationary_distribution(p: &TransitionMatrix, damping: f64, tol: f64, max_iter: usize) -> Result<Stationary> {
    let n = p.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::InvalidArgument(format!("damping {damping} must lie in (0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 0..=max_iter {
        step(p, &pi, damping, &mut next);
        residual = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        if residual <= tol {
            let total: f64 = pi.iter().sum();
            pi.iter_mut().for_each(|x| *x /= total);
            return Ok(Stationary {
                pi,
                iterations: it,
                residual,
            });
        }
        for (x, y) in pi.iter_mut().zip(&next) {
            *x = 0.5 * (*x + y);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual,
    })
}

/// Nodes ranked by stationary probability of the reversed chain.
pub fn pagerank(p: &TransitionMatrix, damping: f64, tol: f64, max_iter: usize) -> Result<RankList> {
    let st = stationary_distribution(p, damping, tol, max_iter)?;
    let mut list = RankList::from_scores(st.pi, "pagerank");
    list.metadata.insert("damping".into(), damping.to_string());
    list.metadata.insert("tol".into(), tol.to_string());
    list.metadata.insert("max_iter".into(), max_iter.to_string());
    list.metadata.insert("iterations".into(), st.iterations.to_string());
    list.metadata.insert("residual".into(), st.residual.to_string());
    Ok(list)
}

/// Nodes ranked by number of outgoing edges.
pub fn rank_by_degree(g: &InfluenceGraph) -> RankList {
    let scores = (0..g.node_count()).map(|i| g.out_edges(i).len() as f64).collect();
    RankList::from_scores(scores, "degree")
}

/// Nodes ranked by total outgoing weight.
pub fn rank_by_weighted_outdegree(g: &InfluenceGraph) -> RankList {
    let scores = (0..g.node_count())
        .map(|i| g.out_edges(i).iter().map(|e| e.1).sum())
        .collect();
    RankList::from_scores(scores, "wdegree")
}

/// G1: nodes ranked by individual influence `σ(i)`.
pub fn build_g1(g: &InfluenceGraph, evaluator: Evaluator) -> Result<RankList> {
    let mut session = Session::new(g, evaluator)?;
    build_g1_in(&mut session)
}

/// G1 using an existing session; costs one evaluator call per node.
pub fn build_g1_in(session: &mut Session<'_>) -> Result<RankList> {
    let nodes: Vec<usize> = (0..session.graph().node_count()).collect();
    let (_, scores) = session.extensions(&SeedSet::empty(), &nodes, 0)?;
    let mut list = RankList::from_scores(scores, "g1");
    list.metadata = session.evaluator().describe();
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_uislt, make_transition_matrix, normalize_adjacency, Adjacency, UisltParams};

    #[test]
    fn uniform_uislt_gives_uniform_pi() {
        let p = UisltParams::new(vec![0.2; 4], vec![1.0; 4]).unwrap();
        let t = make_transition_matrix(&build_uislt(&p).unwrap()).unwrap();
        let r = pagerank(&t, 1.0, 1e-12, 1000).unwrap();
        for &(_, s) in &r.entries {
            assert!((s - 0.25).abs() < 1e-12);
        }
        assert_eq!(r.nodes().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn uislt_closed_form_pi() {
        let alphas = vec![0.1, 0.3, 0.2, 0.15];
        let betas = vec![1.2, 1.0, 0.9, 1.1];
        let p = UisltParams::new(alphas.clone(), betas.clone()).unwrap();
        let t = make_transition_matrix(&build_uislt(&p).unwrap()).unwrap();
        let st = stationary_distribution(&t, 1.0, 1e-14, 100_000).unwrap();
        let z: f64 = alphas.iter().zip(&betas).map(|(a, b)| a / b).sum();
        for i in 0..4 {
            assert!((st.pi[i] - alphas[i] / betas[i] / z).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_tree_chain_converges() {
        let g = normalize_adjacency(&Adjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let t = make_transition_matrix(&g).unwrap();
        let st = stationary_distribution(&t, 1.0, 1e-12, 100_000).unwrap();
        assert!((st.pi[1] - 0.5).abs() < 1e-11);
        assert!((st.pi[0] - 0.25).abs() < 1e-11);
    }

    #[test]
    fn non_convergence_reports_residual() {
        let g = normalize_adjacency(&Adjacency::from_edges(3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let t = make_transition_matrix(&g).unwrap();
        match stationary_distribution(&t, 1.0, 1e-15, 0) {
            Err(Error::NotConverged { iterations: 0, residual }) => assert!(residual > 0.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(pagerank(&t, 0.0, 1e-12, 10).is_err());
    }

    #[test]
    fn degree_rankers() {
        let g = InfluenceGraph::from_edges(5, [(0, 1, 1.0 / 3.0), (0, 2, 1.0 / 3.0), (0, 3, 1.0 / 3.0)]).unwrap();
        let d = rank_by_degree(&g);
        assert_eq!(d.entries[0], (0, 3.0));
        assert_eq!(d.entries.last().unwrap(), &(4, 0.0));
        let w = rank_by_weighted_outdegree(&g);
        assert!((w.entries[0].1 - 1.0).abs() < 1e-15);
        assert_eq!(w.entries[0].0, 0);
    }

    #[test]
    fn g1_on_empty_graph_is_id_order() {
        let g = InfluenceGraph::empty(4);
        let r = build_g1(&g, Evaluator::exact()).unwrap();
        assert_eq!(r.entries, vec![(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)]);
        assert_eq!(r.metadata["evaluator"], "exact");
    }
}
