//! Monte Carlo simulation of the Linear Threshold process.
//!
//! Every run draws one threshold `Θ_j ~ U(0, 1]` per node up front (through
//! [`RunKey`]) and activates `j` once the weight entering it from active
//! nodes reaches `Θ_j`. With thresholds fixed, the terminal set is the least
//! superset of the seeds closed under that rule, so counting estimators can
//! propagate activations in any order; only [`simulate_activation`] keeps
//! the synchronous step structure.
//!
//! Runs are grouped into chunks evaluated in parallel. Chunk results are
//! integer counts, so the reduction is exact and independent of scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{InfluenceGraph, SeedSet};
use crate::rng::RunKey;

const CHUNK_RUNS: usize = 128;

const INACTIVE: u8 = 0;
const ACTIVE: u8 = 1;
const BLOCKED: u8 = 2;
const TRIAL: u8 = 3;

/// One realized diffusion: `steps[k]` is `D_k`, with `D_0` the seed set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationTrace {
    pub steps: Vec<Vec<usize>>,
    /// First `k` with `A_k = A_{k-1}`; equals `steps.len()`.
    pub stop_time: usize,
    /// Terminal set `A_S`, sorted.
    pub final_set: Vec<usize>,
}

/// Monte Carlo estimate of the expected terminal-set size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaEstimate {
    pub mean: f64,
    pub runs: usize,
    /// Three sample standard deviations of the mean.
    pub half_width: f64,
    pub rng_seed: u64,
}

impl SigmaEstimate {
    fn from_counts(sum: u64, sum_sq: u128, runs: usize, rng_seed: u64) -> Self {
        let r = runs as u128;
        let mean = sum as f64 / runs as f64;
        let half_width = if runs > 1 {
            // Exact integer form of the unbiased variance numerator.
            let num = r * sum_sq - (sum as u128) * (sum as u128);
            let var = num as f64 / (r * (r - 1)) as f64;
            3.0 * (var / runs as f64).sqrt()
        } else {
            0.0
        };
        SigmaEstimate {
            mean,
            runs,
            half_width,
            rng_seed,
        }
    }
}

/// Activation probabilities together with the spread estimate from the same runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationEstimate {
    pub sigma: SigmaEstimate,
    /// `ĝ_j`: fraction of runs in which `j` ends up active.
    pub probs: Vec<f64>,
}

/// Spread of `base` and of `base ∪ {v}` for each candidate `v`, all from the same runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEstimate {
    pub base: SigmaEstimate,
    pub candidates: Vec<SigmaEstimate>,
}

/// Per-worker scratch state.
struct Simulator<'g> {
    g: &'g InfluenceGraph,
    state: Vec<u8>,
    input: Vec<f64>,
    touched: Vec<usize>,
    active: Vec<usize>,
    queue: Vec<usize>,
    journal: Vec<(usize, f64)>,
    trial_active: Vec<usize>,
    mark: Vec<u32>,
    epoch: u32,
}

impl<'g> Simulator<'g> {
    fn new(g: &'g InfluenceGraph, blocked: &SeedSet) -> Self {
        let n = g.node_count();
        let mut state = vec![INACTIVE; n];
        for b in blocked.iter() {
            state[b] = BLOCKED;
        }
        Simulator {
            g,
            state,
            input: vec![0.0; n],
            touched: Vec::new(),
            active: Vec::new(),
            queue: Vec::new(),
            journal: Vec::new(),
            trial_active: Vec::new(),
            mark: vec![0; n],
            epoch: 0,
        }
    }

    /// Terminal set of `seeds` for this run, left in `self.active`.
    fn closure(&mut self, key: RunKey, seeds: &SeedSet) {
        for s in seeds.iter() {
            if self.state[s] == INACTIVE {
                self.state[s] = ACTIVE;
                self.active.push(s);
                self.queue.push(s);
            }
        }
        while let Some(u) = self.queue.pop() {
            for &(t, w) in self.g.out_edges(u) {
                if self.state[t] != INACTIVE {
                    continue;
                }
                if self.input[t] == 0.0 {
                    self.touched.push(t);
                }
                self.input[t] += w;
                if self.input[t] >= key.threshold(t) {
                    self.state[t] = ACTIVE;
                    self.active.push(t);
                    self.queue.push(t);
                }
            }
        }
    }

    /// Number of nodes activated on top of the current terminal set by
    /// adding `v`; all trial changes are rolled back.
    fn trial(&mut self, key: RunKey, v: usize) -> usize {
        if self.state[v] != INACTIVE {
            return 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        self.state[v] = TRIAL;
        self.trial_active.push(v);
        self.queue.push(v);
        while let Some(u) = self.queue.pop() {
            for &(t, w) in self.g.out_edges(u) {
                if self.state[t] != INACTIVE {
                    continue;
                }
                if self.mark[t] != self.epoch {
                    self.mark[t] = self.epoch;
                    self.journal.push((t, self.input[t]));
                }
                self.input[t] += w;
                if self.input[t] >= key.threshold(t) {
                    self.state[t] = TRIAL;
                    self.trial_active.push(t);
                    self.queue.push(t);
                }
            }
        }
        let gained = self.trial_active.len();
        for (t, old) in self.journal.drain(..) {
            self.input[t] = old;
        }
        for t in self.trial_active.drain(..) {
            self.state[t] = INACTIVE;
        }
        gained
    }

    fn reset(&mut self) {
        for t in self.touched.drain(..) {
            self.input[t] = 0.0;
        }
        for t in self.active.drain(..) {
            self.state[t] = INACTIVE;
        }
    }
}

fn check_runs(runs: usize) -> Result<()> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    Ok(())
}

fn chunks(runs: usize) -> impl IndexedParallelIterator<Item = std::ops::Range<usize>> {
    let count = runs.div_ceil(CHUNK_RUNS);
    (0..count)
        .into_par_iter()
        .map(move |c| c * CHUNK_RUNS..((c + 1) * CHUNK_RUNS).min(runs))
}

/// Simulates one run (run index 0 of `rng_seed`) step by step.
pub fn simulate_activation(g: &InfluenceGraph, a0: &SeedSet, rng_seed: u64) -> Result<ActivationTrace> {
    a0.check_nonempty(g.node_count())?;
    g.ensure_valid()?;
    Ok(trace_run(g, a0, RunKey::new(rng_seed, 0)))
}

/// Synchronous simulation: at step `k` only out-neighbors of `D_{k−1}` are
/// re-examined, and every decision uses `A_{k−1}`.
pub fn trace_run(g: &InfluenceGraph, a0: &SeedSet, key: RunKey) -> ActivationTrace {
    let n = g.node_count();
    let mut active = vec![false; n];
    let mut input = vec![0.0; n];
    let mut seen = vec![false; n];
    for s in a0.iter() {
        active[s] = true;
    }
    let mut steps = vec![a0.as_slice().to_vec()];
    loop {
        let last = steps.last().unwrap();
        let mut examined = Vec::new();
        for &u in last {
            for &(t, w) in g.out_edges(u) {
                if active[t] {
                    continue;
                }
                input[t] += w;
                if !seen[t] {
                    seen[t] = true;
                    examined.push(t);
                }
            }
        }
        let mut next: Vec<usize> = examined
            .iter()
            .copied()
            .filter(|&t| input[t] >= key.threshold(t))
            .collect();
        for &t in &examined {
            seen[t] = false;
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        for &t in &next {
            active[t] = true;
        }
        steps.push(next);
    }
    let final_set = (0..n).filter(|&j| active[j]).collect();
    ActivationTrace {
        stop_time: steps.len(),
        steps,
        final_set,
    }
}

/// Averages `|A_S|` over `runs` runs.
pub fn estimate_sigma(g: &InfluenceGraph, a0: &SeedSet, runs: usize, rng_seed: u64) -> Result<SigmaEstimate> {
    Ok(estimate_activation_probs(g, a0, runs, rng_seed)?.sigma)
}

/// Estimates `g_j = P(j ∈ A_S)` for every node, along with `σ` from the same runs.
pub fn estimate_activation_probs(
    g: &InfluenceGraph,
    a0: &SeedSet,
    runs: usize,
    rng_seed: u64,
) -> Result<ActivationEstimate> {
    a0.check_nonempty(g.node_count())?;
    check_runs(runs)?;
    g.ensure_valid()?;
    let n = g.node_count();
    let none = SeedSet::empty();
    let (sum, sum_sq, counts) = chunks(runs)
        .map(|range| {
            let mut sim = Simulator::new(g, &none);
            let mut counts = vec![0u64; n];
            let (mut sum, mut sum_sq) = (0u64, 0u128);
            for run in range {
                sim.closure(RunKey::new(rng_seed, run as u64), a0);
                let size = sim.active.len() as u64;
                sum += size;
                sum_sq += (size as u128) * (size as u128);
                for &j in &sim.active {
                    counts[j] += 1;
                }
                sim.reset();
            }
            (sum, sum_sq, counts)
        })
        .reduce(
            || (0, 0, vec![0u64; n]),
            |mut a, b| {
                a.0 += b.0;
                a.1 += b.1;
                a.2.iter_mut().zip(&b.2).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ActivationEstimate {
        sigma: SigmaEstimate::from_counts(sum, sum_sq, runs, rng_seed),
        probs: counts.into_iter().map(|c| c as f64 / runs as f64).collect(),
    })
}

/// Estimates `σ(base)` and `σ(base ∪ {v})` for each candidate on the graph
/// with `blocked` nodes deleted, sharing thresholds across candidates.
///
/// Each candidate's estimate is identical to a direct
/// [`estimate_sigma`] call on `base ∪ {v}` with the same seed and runs (when
/// nothing is blocked): with thresholds fixed, the terminal set of
/// `base ∪ {v}` is the closure of `{v}` added to the terminal set of `base`.
pub fn estimate_sigma_batch(
    g: &InfluenceGraph,
    base: &SeedSet,
    blocked: &SeedSet,
    candidates: &[usize],
    runs: usize,
    rng_seed: u64,
) -> Result<BatchEstimate> {
    let n = g.node_count();
    base.check(n)?;
    blocked.check(n)?;
    check_runs(runs)?;
    g.ensure_valid()?;
    if let Some(b) = base.iter().find(|&b| blocked.contains(b)) {
        return Err(Error::InvalidArgument(format!("seed {b} is also blocked")));
    }
    for &v in candidates {
        g.check_node(v)?;
        if blocked.contains(v) {
            return Err(Error::InvalidArgument(format!("candidate {v} is blocked")));
        }
    }
    let m = candidates.len();
    let (base_sum, base_sq, sums, sqs) = chunks(runs)
        .map(|range| {
            let mut sim = Simulator::new(g, blocked);
            let mut sums = vec![0u64; m];
            let mut sqs = vec![0u128; m];
            let (mut base_sum, mut base_sq) = (0u64, 0u128);
            for run in range {
                let key = RunKey::new(rng_seed, run as u64);
                sim.closure(key, base);
                let size = sim.active.len();
                base_sum += size as u64;
                base_sq += (size as u128) * (size as u128);
                for (c, &v) in candidates.iter().enumerate() {
                    let total = (size + sim.trial(key, v)) as u64;
                    sums[c] += total;
                    sqs[c] += (total as u128) * (total as u128);
                }
                sim.reset();
            }
            (base_sum, base_sq, sums, sqs)
        })
        .reduce(
            || (0, 0, vec![0u64; m], vec![0u128; m]),
            |mut a, b| {
                a.0 += b.0;
                a.1 += b.1;
                a.2.iter_mut().zip(&b.2).for_each(|(x, y)| *x += y);
                a.3.iter_mut().zip(&b.3).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(BatchEstimate {
        base: SigmaEstimate::from_counts(base_sum, base_sq, runs, rng_seed),
        candidates: sums
            .into_iter()
            .zip(sqs)
            .map(|(s, q)| SigmaEstimate::from_counts(s, q, runs, rng_seed))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_chain_always_activates_everything() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        for seed in 0..50 {
            let t = simulate_activation(&g, &SeedSet::new([0]), seed).unwrap();
            assert_eq!(t.final_set, vec![0, 1, 2]);
            assert_eq!(t.steps, vec![vec![0], vec![1], vec![2]]);
            assert_eq!(t.stop_time, 3);
        }
    }

    #[test]
    fn zero_weights_stop_immediately() {
        let g = InfluenceGraph::empty(4);
        let t = simulate_activation(&g, &SeedSet::new([0]), 9).unwrap();
        assert_eq!(t.final_set, vec![0]);
        assert_eq!(t.stop_time, 1);
        let est = estimate_sigma(&g, &SeedSet::new([0, 2]), 1000, 1).unwrap();
        assert_eq!(est.mean, 2.0);
        assert_eq!(est.half_width, 0.0);
    }

    #[test]
    fn all_nodes_seeded() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let t = simulate_activation(&g, &SeedSet::full(3), 3).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.final_set, vec![0, 1, 2]);
    }

    #[test]
    fn empty_seed_set_is_an_error() {
        let g = InfluenceGraph::empty(2);
        assert!(matches!(
            simulate_activation(&g, &SeedSet::empty(), 0),
            Err(Error::EmptySeedSet)
        ));
        assert!(matches!(estimate_sigma(&g, &SeedSet::new([0]), 0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn two_node_half_spread() {
        let g = InfluenceGraph::from_edges(2, [(0, 1, 0.5)]).unwrap();
        let est = estimate_activation_probs(&g, &SeedSet::new([0]), 100_000, 11).unwrap();
        assert!((est.sigma.mean - 1.5).abs() <= est.sigma.half_width);
        assert_eq!(est.probs[0], 1.0);
        // Binomial 3-sigma bound for p = 0.5.
        let bound = 3.0 * (0.25f64 / 100_000.0).sqrt();
        assert!((est.probs[1] - 0.5).abs() <= bound);
    }

    #[test]
    fn isolated_node_is_never_activated() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 0.9)]).unwrap();
        let est = estimate_activation_probs(&g, &SeedSet::new([0]), 2000, 5).unwrap();
        assert_eq!(est.probs[2], 0.0);
    }

    #[test]
    fn probabilities_sum_to_sigma() {
        let g = InfluenceGraph::from_edges(4, [(0, 1, 0.3), (1, 2, 0.6), (2, 3, 0.5), (3, 0, 0.2)]).unwrap();
        let est = estimate_activation_probs(&g, &SeedSet::new([0]), 5000, 8).unwrap();
        let total: f64 = est.probs.iter().sum();
        assert!((total - est.sigma.mean).abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = InfluenceGraph::from_edges(4, [(0, 1, 0.3), (1, 2, 0.6), (2, 3, 0.5), (3, 1, 0.2)]).unwrap();
        let a = estimate_sigma(&g, &SeedSet::new([0]), 3000, 21).unwrap();
        let b = estimate_sigma(&g, &SeedSet::new([0]), 3000, 21).unwrap();
        assert_eq!(a, b);
        let c = estimate_sigma(&g, &SeedSet::new([0]), 3000, 22).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn batch_matches_direct_estimates() {
        let g = InfluenceGraph::from_edges(
            5,
            [(0, 1, 0.4), (1, 2, 0.5), (2, 3, 0.3), (3, 4, 0.6), (4, 0, 0.5), (2, 0, 0.2), (1, 4, 0.3)],
        )
        .unwrap();
        let base = SeedSet::new([1]);
        let cands = [0, 1, 2, 3, 4];
        let batch = estimate_sigma_batch(&g, &base, &SeedSet::empty(), &cands, 4000, 77).unwrap();
        assert_eq!(batch.base, estimate_sigma(&g, &base, 4000, 77).unwrap());
        for (c, &v) in cands.iter().enumerate() {
            assert_eq!(batch.candidates[c], estimate_sigma(&g, &base.with(v), 4000, 77).unwrap());
        }
    }

    #[test]
    fn blocked_nodes_neither_activate_nor_propagate() {
        let g = InfluenceGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let batch = estimate_sigma_batch(&g, &SeedSet::empty(), &SeedSet::new([1]), &[0, 2], 100, 3).unwrap();
        assert_eq!(batch.candidates[0].mean, 1.0);
        assert_eq!(batch.candidates[1].mean, 1.0);
        assert!(estimate_sigma_batch(&g, &SeedSet::empty(), &SeedSet::new([1]), &[1], 10, 3).is_err());
    }

    #[test]
    fn trace_final_set_matches_closure() {
        let g = InfluenceGraph::from_edges(
            6,
            [(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5), (3, 4, 0.7), (4, 5, 0.4), (5, 1, 0.3)],
        )
        .unwrap();
        let seeds = SeedSet::new([0]);
        for run in 0..200 {
            let key = RunKey::new(5, run);
            let trace = trace_run(&g, &seeds, key);
            let mut sim = Simulator::new(&g, &SeedSet::empty());
            sim.closure(key, &seeds);
            let mut closure = sim.active.clone();
            closure.sort_unstable();
            assert_eq!(trace.final_set, closure);
            let flat: usize = trace.steps.iter().map(Vec::len).sum();
            assert_eq!(flat, trace.final_set.len());
        }
    }
}
