//! Tab-separated node, scatter-edge and hyperlink files.
//!
//! `nodes.tsv` has a required header `id kind label topic site`; the edge
//! files have none. Optional fields are present but empty. Blank lines are
//! skipped; line numbers in errors are 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use scatter_core::surfer::HyperlinkOverlay;
use scatter_core::{BipartiteGraph, NodeDecl, NodeId, NodeKind, NodeMeta};
use thiserror::Error;

pub const NODES_HEADER: &str = "id\tkind\tlabel\ttopic\tsite";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected header `{}`", NODES_HEADER.replace('\t', "<TAB>"))]
    MissingHeader { line: usize },
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    MalformedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown node kind `{kind}` (expected `page` or `fact`)")]
    BadKind { line: usize, kind: String },
    #[error("line {line}: node `{id}` declared twice")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: invalid id `{id}`")]
    BadId { line: usize, id: String },
    #[error("line {line}: fact `{id}` has a site; only pages carry sites")]
    SiteOnFact { line: usize, id: String },
    #[error("line {line}: page `{id}` links to itself")]
    SelfLink { line: usize, id: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::MissingHeader { line }
            | ParseError::MalformedRow { line, .. }
            | ParseError::BadKind { line, .. }
            | ParseError::DuplicateId { line, .. }
            | ParseError::BadId { line, .. }
            | ParseError::SiteOnFact { line, .. }
            | ParseError::SelfLink { line, .. } => *line,
        }
    }
}

/// An id pair read from an edge file, with its source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRow {
    pub line: usize,
    pub from: NodeId,
    pub to: NodeId,
}

fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty())
}

fn fields(line: usize, row: &str, expected: usize) -> Result<Vec<&str>, ParseError> {
    let f: Vec<&str> = row.split('\t').collect();
    if f.len() != expected {
        return Err(ParseError::MalformedRow {
            line,
            expected,
            found: f.len(),
        });
    }
    Ok(f)
}

fn id(line: usize, raw: &str) -> Result<NodeId, ParseError> {
    NodeId::new(raw).map_err(|_| ParseError::BadId {
        line,
        id: raw.to_string(),
    })
}

fn optional(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

pub fn parse_nodes(text: &str) -> Result<Vec<NodeDecl>, ParseError> {
    let mut lines = rows(text);
    match lines.next() {
        Some((_, header)) if header == NODES_HEADER => {}
        Some((line, _)) => return Err(ParseError::MissingHeader { line }),
        None => return Err(ParseError::MissingHeader { line: 1 }),
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, row) in lines {
        let f = fields(line, row, 5)?;
        let node_id = id(line, f[0])?;
        let kind = match f[1] {
            "page" => NodeKind::Page,
            "fact" => NodeKind::Fact,
            other => {
                return Err(ParseError::BadKind {
                    line,
                    kind: other.to_string(),
                })
            }
        };
        if kind == NodeKind::Fact && !f[4].is_empty() {
            return Err(ParseError::SiteOnFact {
                line,
                id: f[0].to_string(),
            });
        }
        if !seen.insert(node_id.clone()) {
            return Err(ParseError::DuplicateId {
                line,
                id: f[0].to_string(),
            });
        }
        let meta = NodeMeta {
            label: f[2].to_string(),
            topic: optional(f[3]),
            site: optional(f[4]),
        };
        out.push(NodeDecl::new(node_id, kind, meta));
    }
    Ok(out)
}

/// `page_id<TAB>fact_id` rows in file order; duplicates are kept.
pub fn parse_scatter_edges(text: &str) -> Result<Vec<EdgeRow>, ParseError> {
    rows(text)
        .map(|(line, row)| {
            let f = fields(line, row, 2)?;
            Ok(EdgeRow {
                line,
                from: id(line, f[0])?,
                to: id(line, f[1])?,
            })
        })
        .collect()
}

/// Directed `src<TAB>dst` rows; repeated pairs keep their first occurrence.
pub fn parse_hyperlinks(text: &str) -> Result<Vec<EdgeRow>, ParseError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, row) in rows(text) {
        let f = fields(line, row, 2)?;
        let (from, to) = (id(line, f[0])?, id(line, f[1])?);
        if from == to {
            return Err(ParseError::SelfLink {
                line,
                id: f[0].to_string(),
            });
        }
        if seen.insert((from.clone(), to.clone())) {
            out.push(EdgeRow { line, from, to });
        }
    }
    Ok(out)
}

/// Tabs and line breaks cannot be represented inside a field.
fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

pub fn write_nodes(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    out.push_str(NODES_HEADER);
    out.push('\n');
    for v in 0..g.node_count() {
        let meta = g.meta(v);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            g.id(v),
            g.kind(v),
            clean(&meta.label),
            clean(meta.topic.as_deref().unwrap_or("")),
            clean(meta.site.as_deref().unwrap_or("")),
        );
    }
    out
}

pub fn write_scatter(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    for &(p, f) in g.edges() {
        let _ = writeln!(out, "{}\t{}", g.id(p), g.id(f));
    }
    out
}

pub fn write_hyperlinks(g: &BipartiteGraph, overlay: &HyperlinkOverlay) -> String {
    let mut out = String::new();
    for &(s, d) in overlay.links() {
        let _ = writeln!(out, "{}\t{}", g.id(s), g.id(d));
    }
    out
}
