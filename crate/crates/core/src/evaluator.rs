//! Pluggable influence evaluators for the rankers and optimizers.
//!
//! An [`Evaluator`] is either the exact recursion or Monte Carlo with a fixed
//! run count and seed. A [`Session`] binds one to a graph, keeps the exact
//! memo alive between queries and counts evaluator calls. Monte Carlo queries
//! take a stream tag; queries sharing a tag see the same thresholds, which
//! makes differences between them low-variance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{activation_probs_exact, ExactEngine, NodeMask, DEFAULT_RECURSION_CAP};
use crate::graph::{InfluenceGraph, SeedSet};
use crate::montecarlo::{estimate_activation_probs, estimate_sigma, estimate_sigma_batch};
use crate::rng::{derive_seed, RNG_ALGORITHM};

pub const DEFAULT_MC_RUNS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evaluator {
    Exact { cap: usize },
    MonteCarlo { runs: usize, rng_seed: u64 },
}

impl Evaluator {
    pub fn exact() -> Self {
        Evaluator::Exact {
            cap: DEFAULT_RECURSION_CAP,
        }
    }

    pub fn monte_carlo(runs: usize, rng_seed: u64) -> Self {
        Evaluator::MonteCarlo { runs, rng_seed }
    }

    /// Parameters as string pairs, for rank-list metadata and manifests.
    pub fn describe(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        match *self {
            Evaluator::Exact { cap } => {
                m.insert("evaluator".into(), "exact".into());
                m.insert("cap".into(), cap.to_string());
            }
            Evaluator::MonteCarlo { runs, rng_seed } => {
                m.insert("evaluator".into(), "monte_carlo".into());
                m.insert("runs".into(), runs.to_string());
                m.insert("rng_seed".into(), rng_seed.to_string());
                m.insert("rng".into(), RNG_ALGORITHM.into());
            }
        }
        m
    }
}

/// An evaluator bound to one graph.
pub struct Session<'g> {
    g: &'g InfluenceGraph,
    evaluator: Evaluator,
    engine: Option<ExactEngine<'g>>,
    calls: u64,
}

impl<'g> Session<'g> {
    pub fn new(g: &'g InfluenceGraph, evaluator: Evaluator) -> Result<Self> {
        g.ensure_valid()?;
        let engine = match evaluator {
            Evaluator::Exact { cap } => Some(ExactEngine::new(g, cap)?),
            Evaluator::MonteCarlo { runs, .. } => {
                if runs == 0 {
                    return Err(Error::InvalidArgument("runs must be positive".into()));
                }
                None
            }
        };
        Ok(Session {
            g,
            evaluator,
            engine,
            calls: 0,
        })
    }

    pub fn graph(&self) -> &'g InfluenceGraph {
        self.g
    }

    pub fn evaluator(&self) -> Evaluator {
        self.evaluator
    }

    /// Number of σ or `g` evaluations issued so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn stream(&self, tag: u64) -> (usize, u64) {
        match self.evaluator {
            Evaluator::MonteCarlo { runs, rng_seed } => (runs, derive_seed(rng_seed, tag)),
            Evaluator::Exact { .. } => unreachable!("exact evaluator has no stream"),
        }
    }

    /// `σ(set)`, not counted as a call.
    pub fn sigma_uncounted(&mut self, set: &SeedSet, tag: u64) -> Result<f64> {
        match self.engine.as_mut() {
            Some(e) => e.sigma_set(set),
            None => {
                let (runs, seed) = self.stream(tag);
                Ok(estimate_sigma(self.g, set, runs, seed)?.mean)
            }
        }
    }

    /// `σ(set)`; one call.
    pub fn sigma(&mut self, set: &SeedSet, tag: u64) -> Result<f64> {
        self.calls += 1;
        self.sigma_uncounted(set, tag)
    }

    /// `σ(base)` and `σ(base ∪ {v})` for every candidate; one call per candidate.
    pub fn extensions(&mut self, base: &SeedSet, candidates: &[usize], tag: u64) -> Result<(f64, Vec<f64>)> {
        self.calls += candidates.len() as u64;
        match self.engine.as_mut() {
            Some(e) => {
                let base_value = if base.is_empty() { 0.0 } else { e.sigma_set(base)? };
                let values = candidates
                    .iter()
                    .map(|&v| e.sigma_set(&base.with(v)))
                    .collect::<Result<_>>()?;
                Ok((base_value, values))
            }
            None => {
                let (runs, seed) = self.stream(tag);
                let b = estimate_sigma_batch(self.g, base, &SeedSet::empty(), candidates, runs, seed)?;
                Ok((b.base.mean, b.candidates.into_iter().map(|c| c.mean).collect()))
            }
        }
    }

    /// `σ^(N∖X, i)` for every candidate; one call per candidate.
    pub fn restricted(&mut self, x: &SeedSet, candidates: &[usize], tag: u64) -> Result<Vec<f64>> {
        x.check(self.g.node_count())?;
        for &i in candidates {
            self.g.check_node(i)?;
            if x.contains(i) {
                return Err(Error::InvalidArgument(format!("node {i} is in the restricted set")));
            }
        }
        self.calls += candidates.len() as u64;
        match self.engine.as_mut() {
            Some(e) => {
                let mask = NodeMask::from(x);
                candidates.iter().map(|&i| e.sigma_node(i, mask)).collect()
            }
            None => {
                let (runs, seed) = self.stream(tag);
                let b = estimate_sigma_batch(self.g, &SeedSet::empty(), x, candidates, runs, seed)?;
                Ok(b.candidates.into_iter().map(|c| c.mean).collect())
            }
        }
    }

    /// `g_i^(N,X)` for every node; one call.
    pub fn activation_probs(&mut self, x: &SeedSet, tag: u64) -> Result<Vec<f64>> {
        self.calls += 1;
        match self.evaluator {
            Evaluator::Exact { cap } => activation_probs_exact(self.g, x, cap),
            Evaluator::MonteCarlo { .. } => {
                let (runs, seed) = self.stream(tag);
                Ok(estimate_activation_probs(self.g, x, runs, seed)?.probs)
            }
        }
    }
}
