//! Random instances for tests, examples and experiments.
//!
//! Every generator takes an explicit seed and uses Xoshiro256++, so the same
//! seed gives the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, InfluenceGraph, UisltParams};

pub fn rng_from(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Random valid LT graph: each ordered pair is an edge with probability
/// `edge_prob`, and node `j`'s incoming weights are scaled to a total drawn
/// from `U(0, 1]`.
pub fn random_lt_graph(n: usize, edge_prob: f64, seed: u64) -> InfluenceGraph {
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    for j in 0..n {
        let mut incoming: Vec<(usize, f64)> = Vec::new();
        for i in (0..n).filter(|&i| i != j) {
            if rng.gen_bool(edge_prob) {
                incoming.push((i, rng.gen_range(0.05..1.0)));
            }
        }
        let raw: f64 = incoming.iter().map(|e| e.1).sum();
        let total = 1.0 - rng.gen::<f64>();
        edges.extend(incoming.into_iter().map(|(i, w)| (i, j, w / raw * total)));
    }
    InfluenceGraph::from_edges(n, edges).expect("generated edges are well formed")
}

/// Uniform random labelled tree on `n ≥ 1` nodes, decoded from a Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Adjacency {
    let mut rng = rng_from(seed);
    if n <= 1 {
        return Adjacency::from_edges(n, &[]).expect("no edges");
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &prufer {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &prufer {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Adjacency::from_edges(n, &edges).expect("tree edges are well formed")
}

/// Barabási–Albert preferential attachment: a clique on `m + 1` nodes, then
/// each new node links to `m` distinct existing nodes chosen with
/// probability proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Adjacency> {
    if m == 0 || n < m + 1 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and n >= m + 1, got n={n}, m={m}")));
    }
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    let mut ends: Vec<usize> = Vec::new();
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            ends.extend([u, v]);
        }
    }
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = *ends.choose(&mut rng).expect("nonempty");
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    Adjacency::from_edges(n, &edges)
}

/// UISLT parameters with `α_i ~ U[0, 1]` and
/// `β_i ~ U[0.5 / S_i, 1 / S_i]`, `S_i = Σ_{j≠i} α_j`.
pub fn random_uislt_params(n: usize, seed: u64) -> UisltParams {
    let mut rng = rng_from(seed);
    let alphas: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = alphas.iter().sum();
    let betas = alphas
        .iter()
        .map(|&a| {
            let s = (total - a).max(f64::MIN_POSITIVE);
            // Stay a hair inside the bound so rounding in S_i cannot trip the check.
            rng.gen_range(0.5 / s..=1.0 / s) * (1.0 - 1e-12)
        })
        .collect();
    UisltParams::new(alphas, betas).expect("sampled parameters are feasible")
}

/// Small feasible UISLT parameters for exact comparisons: `α` scaled to a
/// random total below one and `β_i ≤ 1 / S_i`.
pub fn random_small_uislt_params(n: usize, seed: u64) -> UisltParams {
    let mut rng = rng_from(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let scale = rng.gen_range(0.2..3.0) / raw.iter().sum::<f64>();
    let alphas: Vec<f64> = raw.iter().map(|a| a * scale).collect();
    let total: f64 = alphas.iter().sum();
    let betas = alphas
        .iter()
        .map(|&a| rng.gen_range(0.05..=1.0) / (total - a).max(1e-9) * (1.0 - 1e-12))
        .collect();
    UisltParams::new(alphas, betas).expect("sampled parameters are feasible")
}

/// Distinct susceptances in `(0, 1/(n−1)]`.
pub fn random_uslt_betas(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from(seed);
    let cap = 1.0 / n.saturating_sub(1).max(1) as f64;
    let mut betas: Vec<f64> = Vec::with_capacity(n);
    while betas.len() < n {
        let b = cap * (1.0 - rng.gen::<f64>());
        if !betas.contains(&b) {
            betas.push(b);
        }
    }
    betas
}

/// Distinct influence levels whose total is at most one.
pub fn random_uilt_alphas(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let scale = rng.gen_range(0.3..1.0) / raw.iter().sum::<f64>();
    raw.into_iter().map(|a| a * scale).collect()
}

/// Random subset of `0..n` with `1..=max_size` elements.
pub fn random_seed_set(n: usize, max_size: usize, seed: u64) -> Vec<usize> {
    let mut rng = rng_from(seed);
    let size = rng.gen_range(1..=max_size.min(n).max(1));
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(&mut rng);
    nodes.truncate(size);
    nodes.sort_unstable();
    nodes
}
