//! Text formats: graph TSV, coauthorship records and undirected edge lists.
//!
//! Graph files hold one `src<TAB>dst<TAB>weight` line per edge. Lines starting
//! with `#` are comments, except for three directives:
//!
//! * `# nodes=N` fixes the node count (ids beyond the largest edge endpoint);
//! * `# ids=labels` forces label mode even when every token is numeric;
//! * `# node<TAB>LABEL` declares a label, so isolated nodes survive a round trip.
//!
//! Without `ids=labels`, a file whose endpoints all parse as non-negative
//! integers uses them as ids; otherwise every endpoint is a label and ids are
//! assigned in first-seen order.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::InfluenceGraph;

fn parse_directive_nodes(line: &str, lineno: usize) -> Result<Option<usize>> {
    let body = line.trim_start_matches('#').trim();
    if let Some(v) = body.strip_prefix("nodes=") {
        let n = v.trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad node count {v:?}"),
        })?;
        return Ok(Some(n));
    }
    Ok(None)
}

/// Parses the graph TSV format.
pub fn parse_graph_tsv(text: &str) -> Result<InfluenceGraph> {
    let mut declared_nodes: Option<usize> = None;
    let mut force_labels = false;
    let mut declared_labels: Vec<String> = Vec::new();
    let mut rows: Vec<(usize, String, String, f64)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(n) = parse_directive_nodes(line, lineno)? {
                declared_nodes = Some(n);
            } else if line.trim_start_matches('#').trim() == "ids=labels" {
                force_labels = true;
            } else if let Some(label) = line.strip_prefix("# node\t") {
                declared_labels.push(label.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let w: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad weight {:?}", fields[2]),
        })?;
        rows.push((lineno, fields[0].to_string(), fields[1].to_string(), w));
    }

    let numeric = !force_labels
        && declared_labels.is_empty()
        && rows
            .iter()
            .all(|(_, s, d, _)| s.parse::<usize>().is_ok() && d.parse::<usize>().is_ok());

    if numeric {
        let mut edges = Vec::with_capacity(rows.len());
        let mut n = declared_nodes.unwrap_or(0);
        for (_, s, d, w) in &rows {
            let (s, d): (usize, usize) = (s.parse().unwrap(), d.parse().unwrap());
            n = n.max(s + 1).max(d + 1);
            edges.push((s, d, *w));
        }
        if let Some(dn) = declared_nodes {
            if dn < n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("declared {dn} nodes but edges reference node {}", n - 1),
                });
            }
        }
        return InfluenceGraph::from_edges(n, edges);
    }

    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        ids.insert(label.to_string(), id);
        labels.push(label.to_string());
        id
    };
    for label in &declared_labels {
        intern(label);
    }
    let mut edges = Vec::with_capacity(rows.len());
    for (_, s, d, w) in &rows {
        let s = intern(s);
        let d = intern(d);
        edges.push((s, d, *w));
    }
    InfluenceGraph::from_edges(labels.len(), edges)?.with_labels(labels)
}

/// Writes the graph TSV format. Labeled graphs are written in label mode
/// with every node declared.
pub fn write_graph_tsv(g: &InfluenceGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# nodes={}", g.node_count());
    if let Some(labels) = g.labels() {
        let _ = writeln!(s, "# ids=labels");
        for l in labels {
            let _ = writeln!(s, "# node\t{l}");
        }
    }
    for (i, j, w) in g.edges() {
        let _ = writeln!(s, "{}\t{}\t{}", g.label(i), g.label(j), w);
    }
    s
}

/// One paper with its author list, as read from the coauthorship file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoauthorRecord {
    pub paper_id: String,
    pub authors: Vec<String>,
}

/// Parses `paper_id<TAB>author1,author2,...` lines.
pub fn parse_coauthorship(text: &str) -> Result<Vec<CoauthorRecord>> {
    let mut records = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (paper_id, authors) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: k + 1,
            msg: "expected paper_id<TAB>authors".to_string(),
        })?;
        let authors = authors
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(String::from)
            .collect();
        records.push(CoauthorRecord {
            paper_id: paper_id.trim().to_string(),
            authors,
        });
    }
    Ok(records)
}

/// Parses an undirected edge list of integer ids (`u<TAB>v` or whitespace
/// separated). Returns the node count and the edges.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n = 0usize;
    let mut declared = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(d) = parse_directive_nodes(line, k + 1)? {
                declared = Some(d);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let parse = |f: &str| {
            f.parse::<usize>().map_err(|_| Error::Parse {
                line: k + 1,
                msg: format!("bad node id {f:?}"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Ok((declared.map_or(n, |d| d.max(n)), edges))
}

/// Parses a comma-separated list of reals.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number {s:?}")))
        })
        .collect()
}

/// Parses a comma-separated list of node ids.
pub fn parse_node_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad node id {s:?}")))
        })
        .collect()
}
