//! Closed-form influence on complete UISLT graphs and degree-normalized forests.
//!
//! On a complete graph with `w_ij = α_i β_j`, a seed reaches a non-seed node
//! only along self-avoiding paths through non-seeds, so
//! `σ(A₀) = |A₀| + α_{A₀} Σ_{m=0}^{k-1} h^m`, where `k` is the number of
//! non-seeds and `h^m` sums `β_{j_1} α_{j_1} ⋯ β_{j_m} α_{j_m} β_{j_{m+1}}`
//! over ordered sequences of `m + 1` distinct non-seeds. Only the last node
//! of a sequence is special, so `h^m = m! · E_{m+1}` with `E` computed by a
//! two-state elementary-symmetric recurrence instead of enumerating subsets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactEngine, NodeMask, DEFAULT_RECURSION_CAP};
use crate::graph::{InfluenceGraph, SeedSet, UisltParams, FEASIBILITY_TOL};

/// Elementary symmetric polynomials `e_0..=e_m` of `xs`.
fn elementary(xs: &[f64], m: usize) -> Vec<f64> {
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for (t, &x) in xs.iter().enumerate() {
        for c in (1..=m.min(t + 1)).rev() {
            e[c] += e[c - 1] * x;
        }
    }
    e
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|v| v as f64).product()
}

/// `f^m(xs) = m! e_m(xs)`; zero when `m > |xs|`.
pub fn f_m(xs: &[f64], m: usize) -> f64 {
    if m > xs.len() {
        log::debug!("f_m with m = {m} > {} arguments; using 0", xs.len());
        return 0.0;
    }
    factorial(m) * elementary(xs, m)[m]
}

/// `h^0..h^{k-1}` for non-seed pairs `(α_j, β_j)`.
fn h_terms(pairs: &[(f64, f64)]) -> Vec<f64> {
    let k = pairs.len();
    // e0[c]: c nodes chosen, none of them the last. e1[c]: last one chosen.
    let mut e0 = vec![0.0; k + 1];
    let mut e1 = vec![0.0; k + 1];
    e0[0] = 1.0;
    for (t, &(a, b)) in pairs.iter().enumerate() {
        for c in (0..=t).rev() {
            e1[c + 1] += e1[c] * b * a + e0[c] * b;
            e0[c + 1] += e0[c] * b * a;
        }
    }
    let mut fact = 1.0;
    (0..k)
        .map(|m| {
            if m > 0 {
                fact *= m as f64;
            }
            fact * e1[m + 1]
        })
        .collect()
}

/// Result of [`sigma_uislt`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UisltEvaluation {
    pub sigma: f64,
    /// `h^m` for `m = 0..k`, `k` the number of non-seeds.
    pub terms: Vec<f64>,
    /// `α_{A₀} = Σ_{i∈A₀} α_i`.
    pub alpha_seed: f64,
}

/// Closed-form `σ(A₀)` on the complete UISLT graph.
pub fn sigma_uislt(params: &UisltParams, a0: &SeedSet) -> Result<UisltEvaluation> {
    let n = params.len();
    a0.check_nonempty(n)?;
    let (alphas, betas) = (params.alphas(), params.betas());
    let alpha_seed: f64 = a0.iter().map(|i| alphas[i]).sum();
    if a0.len() == n {
        return Ok(UisltEvaluation {
            sigma: n as f64,
            terms: Vec::new(),
            alpha_seed,
        });
    }
    let pairs: Vec<(f64, f64)> = (0..n)
        .filter(|&j| !a0.contains(j))
        .map(|j| (alphas[j], betas[j]))
        .collect();
    let terms = h_terms(&pairs);
    let sigma = a0.len() as f64 + alpha_seed * terms.iter().sum::<f64>();
    Ok(UisltEvaluation {
        sigma,
        terms,
        alpha_seed,
    })
}

/// Closed-form `σ(A₀)` when every `α_i = 1`:
/// `|A₀| + |A₀| Σ_{m=0}^{k-1} f^{m+1}(β_nonseed)`. Zero susceptances are allowed.
pub fn sigma_uslt(betas: &[f64], a0: &SeedSet) -> Result<f64> {
    let n = betas.len();
    a0.check_nonempty(n)?;
    for (i, &b) in betas.iter().enumerate() {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InfeasibleParams {
                node: i,
                detail: format!("beta {b} must be non-negative"),
            });
        }
        if b * (n - 1) as f64 > 1.0 + FEASIBILITY_TOL {
            return Err(Error::InfeasibleParams {
                node: i,
                detail: format!("beta {b} exceeds 1/(n-1)"),
            });
        }
    }
    let rest: Vec<f64> = (0..n).filter(|&j| !a0.contains(j)).map(|j| betas[j]).collect();
    let k = rest.len();
    let e = elementary(&rest, k);
    let mut fact = 1.0;
    let mut sum = 0.0;
    for m in 0..k {
        fact *= (m + 1) as f64;
        sum += fact * e[m + 1];
    }
    Ok(a0.len() as f64 * (1.0 + sum))
}

/// Closed-form `σ(A₀)` when every `β_i = 1`:
/// `|A₀| + α_{A₀} Σ_{m=0}^{k-1} (k - m) f^m(α_nonseed)`.
pub fn sigma_uilt(alphas: &[f64], a0: &SeedSet) -> Result<f64> {
    let n = alphas.len();
    a0.check_nonempty(n)?;
    let total: f64 = alphas.iter().sum();
    for (i, &a) in alphas.iter().enumerate() {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InfeasibleParams {
                node: i,
                detail: format!("alpha {a} must be non-negative"),
            });
        }
        if total - a > 1.0 + FEASIBILITY_TOL {
            return Err(Error::InfeasibleParams {
                node: i,
                detail: format!("sum of other alphas {} exceeds 1", total - a),
            });
        }
    }
    let rest: Vec<f64> = (0..n).filter(|&j| !a0.contains(j)).map(|j| alphas[j]).collect();
    let k = rest.len();
    let e = elementary(&rest, k);
    let alpha_seed: f64 = a0.iter().map(|i| alphas[i]).sum();
    let mut fact = 1.0;
    let mut sum = 0.0;
    for m in 0..k {
        if m > 0 {
            fact *= m as f64;
        }
        sum += (k - m) as f64 * fact * e[m];
    }
    Ok(a0.len() as f64 + alpha_seed * sum)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks that `g` is the degree normalization of an undirected forest and
/// returns the degrees.
pub fn forest_degrees(g: &InfluenceGraph) -> Result<Vec<usize>> {
    let n = g.node_count();
    let degree: Vec<usize> = (0..n).map(|i| g.out_edges(i).len()).collect();
    for (i, j, w) in g.edges() {
        let back = g.weight(j, i);
        if back == 0.0 {
            return Err(Error::AsymmetricAdjacency(i, j));
        }
        let expected = 1.0 / degree[j] as f64;
        if (w - expected).abs() > FEASIBILITY_TOL {
            return Err(Error::NotDegreeNormalized {
                src: i,
                dst: j,
                weight: w,
                expected,
            });
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, j, _) in g.edges().filter(|&(i, j, _)| i < j) {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            return Err(Error::CycleDetected(j));
        }
        parent[ri] = rj;
    }
    Ok(degree)
}

/// `σ(i) = d_i + 1` on a degree-normalized forest.
pub fn sigma_degree_acyclic(g: &InfluenceGraph, i: usize) -> Result<f64> {
    g.check_node(i)?;
    let degree = forest_degrees(g)?;
    Ok(degree[i] as f64 + 1.0)
}

/// Exact values around a pair of nodes and the residuals of three identities:
///
/// 0. `σ(i ∪ j) = σ(N∖i, j) + σ(N∖j, i)`
/// 1. `σ(i) = σ(N∖j, i) + w_ij σ(N∖i, j)`
/// 2. `σ(j) = σ(N∖i, j) + w_ji σ(N∖j, i)`
///
/// The first always holds. The other two require that every influence
/// between `i` and `j` travels along the direct edge; an indirect path such
/// as `i → t → j` leaves a nonzero residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub sigma_pair: f64,
    pub sigma_i: f64,
    pub sigma_j: f64,
    /// `σ(N∖j, i)`.
    pub sigma_i_without_j: f64,
    /// `σ(N∖i, j)`.
    pub sigma_j_without_i: f64,
    pub residuals: [f64; 3],
}

pub fn pairwise_influence_identities(g: &InfluenceGraph, i: usize, j: usize) -> Result<PairwiseReport> {
    g.check_node(i)?;
    g.check_node(j)?;
    if i == j {
        return Err(Error::InvalidArgument("pairwise identities need two distinct nodes".into()));
    }
    let mut engine = ExactEngine::new(g, DEFAULT_RECURSION_CAP)?;
    let sigma_pair = engine.sigma_set(&SeedSet::new([i, j]))?;
    let sigma_i = engine.sigma_node(i, NodeMask::empty())?;
    let sigma_j = engine.sigma_node(j, NodeMask::empty())?;
    let sigma_i_without_j = engine.sigma_node(i, NodeMask::single(j))?;
    let sigma_j_without_i = engine.sigma_node(j, NodeMask::single(i))?;
    let residuals = [
        sigma_pair - (sigma_j_without_i + sigma_i_without_j),
        sigma_i - (sigma_i_without_j + g.weight(i, j) * sigma_j_without_i),
        sigma_j - (sigma_j_without_i + g.weight(j, i) * sigma_i_without_j),
    ];
    Ok(PairwiseReport {
        sigma_pair,
        sigma_i,
        sigma_j,
        sigma_i_without_j,
        sigma_j_without_i,
        residuals,
    })
}
