//! Seed selection: hill-climbing greedy and G1-sieving.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{Evaluator, Session};
use crate::graph::{InfluenceGraph, SeedSet};
use crate::rank::build_g1_in;

pub const DEFAULT_ALPHA: f64 = 0.3;
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Stream tag for the evaluation of the final set.
const REPORT_TAG: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SievingConfig {
    /// Nodes activated by the current set more often than this are dropped.
    pub alpha: f64,
    /// Nodes whose influence on the rest of the network falls below this are dropped.
    pub epsilon: f64,
    pub k: usize,
}

impl SievingConfig {
    pub fn new(k: usize) -> Self {
        SievingConfig {
            alpha: DEFAULT_ALPHA,
            epsilon: DEFAULT_EPSILON,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha {} must lie in (0, 1]", self.alpha)));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon {} must be non-negative", self.epsilon)));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("K must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// Candidates evaluated this round.
    pub pool_size: usize,
    pub picked: usize,
    /// Greedy: `σ(X ∪ v) − σ(X)`. Sieving: `σ^(N∖X, v)`, the score it was picked by.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub chosen: SeedSet,
    /// Evaluator value of `chosen`.
    pub sigma: f64,
    pub per_round: Vec<RoundRecord>,
    /// Evaluations issued while selecting; the final report value is not counted.
    pub evaluator_calls: u64,
    pub warnings: Vec<String>,
}

impl SelectionResult {
    /// Chosen nodes in pick order.
    pub fn chosen_order(&self) -> Vec<usize> {
        self.per_round.iter().map(|r| r.picked).collect()
    }
}

/// Index of the maximum score, first index on ties. Callers pass candidates
/// in ascending id order so ties go to the smallest id.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn check_k(g: &InfluenceGraph, k: usize) -> Result<()> {
    if k == 0 || k > g.node_count() {
        return Err(Error::InvalidArgument(format!(
            "K = {k} must lie in 1..={}",
            g.node_count()
        )));
    }
    Ok(())
}

/// Hill climbing: each round adds `argmax_v σ(X ∪ v)`.
pub fn greedy(g: &InfluenceGraph, k: usize, evaluator: Evaluator) -> Result<SelectionResult> {
    check_k(g, k)?;
    let mut session = Session::new(g, evaluator)?;
    let mut x = SeedSet::empty();
    let mut per_round = Vec::with_capacity(k);
    let mut sigma = 0.0;
    for round in 0..k {
        let candidates: Vec<usize> = (0..g.node_count()).filter(|&v| !x.contains(v)).collect();
        let (base, values) = session.extensions(&x, &candidates, round as u64)?;
        let best = argmax(&values);
        let picked = candidates[best];
        per_round.push(RoundRecord {
            pool_size: candidates.len(),
            picked,
            gain: values[best] - base,
        });
        sigma = values[best];
        x = x.with(picked);
    }
    Ok(SelectionResult {
        chosen: x,
        sigma,
        per_round,
        evaluator_calls: session.calls(),
        warnings: Vec::new(),
    })
}

/// G1-sieving. Builds the G1 list once, takes its head, then each round
/// drops subordinates (`g_i > α`) and leechers (`σ^(N∖X, i) < ε`) from the
/// list for good and picks the survivor with the largest `σ^(N∖X, i)`.
/// Stops early if the list runs out.
pub fn g1_sieving(g: &InfluenceGraph, config: SievingConfig, evaluator: Evaluator) -> Result<SelectionResult> {
    config.validate()?;
    check_k(g, config.k)?;
    let mut session = Session::new(g, evaluator)?;
    let g1 = build_g1_in(&mut session)?;
    let (head, head_score) = g1.entries[0];
    let mut x = SeedSet::new([head]);
    let mut per_round = vec![RoundRecord {
        pool_size: g1.len(),
        picked: head,
        gain: head_score,
    }];
    let mut list: Vec<usize> = g1.nodes().skip(1).collect();
    let mut warnings = Vec::new();

    for round in 1..config.k {
        let tag = round as u64;
        let probs = session.activation_probs(&x, tag)?;
        // σ^(N∖X, i) is only needed for nodes passing the g test. Their
        // values share the round's stream, so one batch equals lazy calls.
        let unsubordinate: Vec<usize> = list.iter().copied().filter(|&i| probs[i] <= config.alpha).collect();
        let restricted = session.restricted(&x, &unsubordinate, tag)?;
        let (survivors, scores): (Vec<usize>, Vec<f64>) = unsubordinate
            .into_iter()
            .zip(restricted)
            .filter(|&(_, s)| s >= config.epsilon)
            .unzip();
        list = survivors.clone();
        if survivors.is_empty() {
            let msg = format!(
                "candidate list exhausted after {} of {} picks",
                x.len(),
                config.k
            );
            log::warn!("{msg}");
            warnings.push(msg);
            break;
        }
        // Survivors are in G1 order; re-sort by id for the tie-break.
        let mut order: Vec<usize> = (0..survivors.len()).collect();
        order.sort_by_key(|&t| survivors[t]);
        let sorted_scores: Vec<f64> = order.iter().map(|&t| scores[t]).collect();
        let best = order[argmax(&sorted_scores)];
        let picked = survivors[best];
        per_round.push(RoundRecord {
            pool_size: survivors.len(),
            picked,
            gain: scores[best],
        });
        x = x.with(picked);
        list.retain(|&v| v != picked);
    }

    let evaluator_calls = session.calls();
    let sigma = session.sigma_uncounted(&x, REPORT_TAG)?;
    Ok(SelectionResult {
        chosen: x,
        sigma,
        per_round,
        evaluator_calls,
        warnings,
    })
}

/// `σ^(N∖X, i)`: influence of `i` once the nodes of `X` are deleted.
pub fn evaluate_restricted(g: &InfluenceGraph, x: &SeedSet, i: usize, evaluator: Evaluator) -> Result<f64> {
    let mut session = Session::new(g, evaluator)?;
    Ok(session.restricted(x, &[i], 0)?[0])
}

/// Subordinates and leechers with respect to `X`, plus the leecher residual
/// `σ(i) − 1 − Σ_{j∈X} w_ij σ^(N∖i, j)` for every node outside `X`. The
/// residual measures what `i` contributes beyond its own activation and its
/// direct push into `X`; it is near zero for nodes that only feed `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DummyReport {
    pub subordinates: Vec<usize>,
    pub leechers: Vec<usize>,
    /// `(node, g_i, σ^(N∖X, i), residual)` for every node outside `X`.
    pub details: Vec<(usize, f64, f64, f64)>,
}

pub fn classify_dummies(
    g: &InfluenceGraph,
    x: &SeedSet,
    config: &SievingConfig,
    evaluator: Evaluator,
) -> Result<DummyReport> {
    x.check_nonempty(g.node_count())?;
    let mut session = Session::new(g, evaluator)?;
    let probs = session.activation_probs(x, 0)?;
    let outside: Vec<usize> = (0..g.node_count()).filter(|&v| !x.contains(v)).collect();
    let restricted = session.restricted(x, &outside, 0)?;
    let (_, individual) = session.extensions(&SeedSet::empty(), &outside, 0)?;
    let mut report = DummyReport {
        subordinates: Vec::new(),
        leechers: Vec::new(),
        details: Vec::with_capacity(outside.len()),
    };
    for (t, &i) in outside.iter().enumerate() {
        let mut pushed = 0.0;
        for j in x.iter() {
            let w = g.weight(i, j);
            if w > 0.0 {
                pushed += w * session.restricted(&SeedSet::new([i]), &[j], 0)?[0];
            }
        }
        let residual = individual[t] - 1.0 - pushed;
        if probs[i] > config.alpha {
            report.subordinates.push(i);
        }
        if restricted[t] < config.epsilon {
            report.leechers.push(i);
        }
        report.details.push((i, probs[i], restricted[t], residual));
    }
    Ok(report)
}
