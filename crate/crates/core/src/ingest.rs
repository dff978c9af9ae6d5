//! Coauthorship networks as influence graphs.
//!
//! Each multi-author paper `r` with `n_r` authors adds `1 / (n_r − 1)` to the
//! collaboration strength of every pair of its authors. The symmetric
//! strengths are then turned into influence weights by normalizing each
//! author's outgoing strengths to sum to one, followed by a column pass that
//! rescales any node whose incoming weight would exceed one.
//!
//! Author ids follow the sorted order of author names, so the result does not
//! depend on the order of the input records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::warn;

use crate::error::Result;
use crate::graph::InfluenceGraph;
use crate::io::CoauthorRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestWarning {
    /// Record with fewer than two distinct authors; not counted.
    SkippedRecord { paper_id: String, distinct_authors: usize },
    /// Author listed more than once on a record; counted once.
    DuplicateAuthor { paper_id: String, author: String },
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestWarning::SkippedRecord { paper_id, distinct_authors } => write!(
                f,
                "skipping paper {paper_id:?}: {distinct_authors} distinct author(s)"
            ),
            IngestWarning::DuplicateAuthor { paper_id, author } => {
                write!(f, "paper {paper_id:?} lists author {author:?} more than once")
            }
        }
    }
}

/// Symmetric collaboration strengths between authors.
#[derive(Debug, Clone, PartialEq)]
pub struct CollaborationWeights {
    labels: Vec<String>,
    /// Keyed by `(i, j)` with `i < j`.
    pairs: BTreeMap<(usize, usize), f64>,
}

impl CollaborationWeights {
    /// Builds from explicit symmetric strengths; each pair may be given in either order.
    pub fn from_pairs(labels: Vec<String>, pairs: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let pairs = pairs
            .into_iter()
            .filter(|&(i, j, _)| i != j)
            .map(|(i, j, w)| ((i.min(j), i.max(j)), w))
            .collect();
        CollaborationWeights { labels, pairs }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Strength between `i` and `j`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.pairs.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    /// Every stored pair as `(i, j, strength)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.pairs.iter().map(|(&(i, j), &w)| (i, j, w))
    }
}

/// Accumulates collaboration strengths over all multi-author records.
pub fn collaboration_weights(records: &[CoauthorRecord]) -> (CollaborationWeights, Vec<IngestWarning>) {
    let mut warnings = Vec::new();
    let mut papers: Vec<BTreeSet<&str>> = Vec::new();
    for rec in records {
        let mut authors = BTreeSet::new();
        for a in &rec.authors {
            if !authors.insert(a.as_str()) {
                warnings.push(IngestWarning::DuplicateAuthor {
                    paper_id: rec.paper_id.clone(),
                    author: a.clone(),
                });
            }
        }
        if authors.len() < 2 {
            warnings.push(IngestWarning::SkippedRecord {
                paper_id: rec.paper_id.clone(),
                distinct_authors: authors.len(),
            });
            continue;
        }
        papers.push(authors);
    }
    for w in &warnings {
        warn!("{w}");
    }

    let names: BTreeSet<&str> = papers.iter().flatten().copied().collect();
    let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let id = |name: &str| labels.binary_search_by(|l| l.as_str().cmp(name)).unwrap();

    // Paper counts per (pair, author count); summed in ascending author count
    // so that the floating-point result is independent of record order.
    let mut counts: BTreeMap<(usize, usize), BTreeMap<usize, u64>> = BTreeMap::new();
    for authors in &papers {
        let ids: Vec<usize> = authors.iter().map(|a| id(a)).collect();
        for (x, &i) in ids.iter().enumerate() {
            for &j in &ids[x + 1..] {
                *counts
                    .entry((i.min(j), i.max(j)))
                    .or_default()
                    .entry(authors.len())
                    .or_default() += 1;
            }
        }
    }
    let pairs = counts
        .into_iter()
        .map(|(pair, by_size)| {
            let w = by_size
                .into_iter()
                .map(|(n_r, c)| c as f64 / (n_r - 1) as f64)
                .sum();
            (pair, w)
        })
        .collect();
    (CollaborationWeights { labels, pairs }, warnings)
}

/// Normalizes directed raw strengths `(src, dst, strength)` into a valid
/// influence graph: per-source normalization, then column rescaling.
fn normalize_directed(n: usize, raw: &[(usize, usize, f64)]) -> Vec<(usize, usize, f64)> {
    let mut out_total = vec![0.0; n];
    for &(i, _, w) in raw {
        out_total[i] += w;
    }
    let mut edges: Vec<(usize, usize, f64)> = raw
        .iter()
        .filter(|&&(i, _, w)| w > 0.0 && out_total[i] > 0.0)
        .map(|&(i, j, w)| (i, j, w / out_total[i]))
        .collect();
    let mut in_sum = vec![0.0; n];
    for &(_, j, w) in &edges {
        in_sum[j] += w;
    }
    for e in &mut edges {
        if in_sum[e.1] > 1.0 {
            e.2 /= in_sum[e.1];
        }
    }
    edges
}

/// Influence graph from symmetric collaboration strengths.
pub fn normalize_collaboration(raw: &CollaborationWeights) -> Result<InfluenceGraph> {
    let directed: Vec<_> = raw
        .pairs()
        .flat_map(|(i, j, w)| [(i, j, w), (j, i, w)])
        .collect();
    let edges = normalize_directed(raw.node_count(), &directed);
    InfluenceGraph::from_edges(raw.node_count(), edges)?.with_labels(raw.labels.clone())
}

/// Reads coauthorship records into an influence graph.
pub fn ingest_coauthorship(records: &[CoauthorRecord]) -> Result<(InfluenceGraph, Vec<IngestWarning>)> {
    let (raw, warnings) = collaboration_weights(records);
    Ok((normalize_collaboration(&raw)?, warnings))
}

/// Directed variant: each pair's strength goes entirely to the author with
/// the higher id, giving edges from higher to lower ids only.
pub fn direct_coauthorship(raw: &CollaborationWeights) -> Result<InfluenceGraph> {
    let directed: Vec<_> = raw.pairs().map(|(i, j, w)| (j, i, w)).collect();
    let edges = normalize_directed(raw.node_count(), &directed);
    InfluenceGraph::from_edges(raw.node_count(), edges)?.with_labels(raw.labels.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, authors: &[&str]) -> CoauthorRecord {
        CoauthorRecord {
            paper_id: id.into(),
            authors: authors.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn three_author_paper() {
        let (raw, warnings) = collaboration_weights(&[rec("p", &["a", "b", "c"])]);
        assert!(warnings.is_empty());
        assert_eq!(raw.get(0, 1), 0.5);
        assert_eq!(raw.get(0, 2), 0.5);
        assert_eq!(raw.get(1, 2), 0.5);
        assert_eq!(raw.get(1, 1), 0.0);
    }

    #[test]
    fn repeated_pair_accumulates() {
        let (raw, _) = collaboration_weights(&[rec("p", &["a", "b"]), rec("q", &["b", "a"])]);
        assert_eq!(raw.get(0, 1), 2.0);
    }

    #[test]
    fn normalized_three_author_example() {
        // a's unit total is split evenly between b and c; every in-sum is 1.
        let (g, _) = ingest_coauthorship(&[rec("p", &["a", "b", "c"])]).unwrap();
        assert_eq!(g.weight(0, 1), 0.5);
        assert_eq!(g.weight(0, 2), 0.5);
        assert!(g.validate().is_empty());
        for s in g.in_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn column_pass_rescales_overloaded_nodes() {
        // Star: hub h with leaves x, y. Each leaf gives all of its unit total
        // to h, so h's in-sum would be 2 before the column pass.
        let (g, _) = ingest_coauthorship(&[rec("1", &["h", "x"]), rec("2", &["h", "y"])]).unwrap();
        let h = 0;
        assert_eq!(g.labels().unwrap()[h], "h");
        assert!((g.in_sums()[h] - 1.0).abs() < 1e-12);
        assert_eq!(g.weight(1, h), 0.5);
        assert_eq!(g.weight(h, 1), 0.5);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn single_author_and_duplicates_warn() {
        let (raw, warnings) = collaboration_weights(&[
            rec("solo", &["a"]),
            rec("dup", &["a", "a", "b"]),
            rec("dup-only", &["c", "c"]),
        ]);
        assert_eq!(raw.node_count(), 2);
        assert_eq!(raw.get(0, 1), 1.0);
        assert_eq!(warnings.len(), 4);
        assert!(warnings.contains(&IngestWarning::SkippedRecord {
            paper_id: "solo".into(),
            distinct_authors: 1
        }));
        assert!(warnings.contains(&IngestWarning::DuplicateAuthor {
            paper_id: "dup".into(),
            author: "a".into()
        }));
    }

    #[test]
    fn directed_assignment_goes_to_higher_index() {
        let raw = CollaborationWeights::from_pairs(vec!["a".into(), "b".into()], [(0, 1, 2.0)]);
        let g = direct_coauthorship(&raw).unwrap();
        assert_eq!(g.weight(1, 0), 1.0);
        assert_eq!(g.weight(0, 1), 0.0);
    }

    #[test]
    fn directed_three_nodes_point_down() {
        let (raw, _) = collaboration_weights(&[rec("p", &["a", "b", "c"])]);
        let g = direct_coauthorship(&raw).unwrap();
        for (i, j, _) in g.edges() {
            assert!(i > j);
        }
        assert_eq!(g.edge_count(), 3);
        assert!(g.validate().is_empty());
    }
}
