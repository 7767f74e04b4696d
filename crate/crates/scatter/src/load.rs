//! Reads the input files into a graph, with line-accurate errors and
//! content digests for report provenance.

use std::fs;
use std::path::{Path, PathBuf};

use scatter_core::surfer::HyperlinkOverlay;
use scatter_core::{BipartiteGraph, NodeDecl, NodeKind};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::tsv::{self, EdgeRow, ParseError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: line {line}: {message}")]
    Invalid {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: BipartiteGraph,
    pub overlay: Option<HyperlinkOverlay>,
    pub inputs: Vec<InputDigest>,
}

fn read(
    path: &Path,
    role: &'static str,
    inputs: &mut Vec<InputDigest>,
) -> Result<String, LoadError> {
    let bytes = fs::read(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    inputs.push(InputDigest {
        role,
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })
}

pub fn load(nodes: &Path, scatter: &Path, hyperlinks: Option<&Path>) -> Result<Dataset, LoadError> {
    let mut inputs = Vec::new();
    let parse_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LoadError::Parse { path, source }
    };

    let decls = tsv::parse_nodes(&read(nodes, "nodes", &mut inputs)?).map_err(parse_err(nodes))?;
    let edges = tsv::parse_scatter_edges(&read(scatter, "scatter", &mut inputs)?)
        .map_err(parse_err(scatter))?;
    let graph = build(decls, &edges, scatter)?;

    let overlay = match hyperlinks {
        Some(path) => {
            let rows = tsv::parse_hyperlinks(&read(path, "hyperlinks", &mut inputs)?)
                .map_err(parse_err(path))?;
            Some(overlay(&graph, &rows, path)?)
        }
        None => None,
    };
    Ok(Dataset {
        graph,
        overlay,
        inputs,
    })
}

/// Validates each edge row against the declarations, so errors carry the
/// offending line, then builds the graph.
pub fn build(
    decls: Vec<NodeDecl>,
    edges: &[EdgeRow],
    path: &Path,
) -> Result<BipartiteGraph, LoadError> {
    let kinds: std::collections::BTreeMap<&str, NodeKind> =
        decls.iter().map(|d| (d.id.as_str(), d.kind)).collect();
    let invalid = |line, message: String| LoadError::Invalid {
        path: path.to_path_buf(),
        line,
        message,
    };
    for e in edges {
        let kind = |id: &str| {
            kinds
                .get(id)
                .copied()
                .ok_or_else(|| invalid(e.line, format!("unknown node `{id}`")))
        };
        let (a, b) = (kind(e.from.as_str())?, kind(e.to.as_str())?);
        if a != NodeKind::Page || b != NodeKind::Fact {
            return Err(invalid(
                e.line,
                format!(
                    "expected page then fact, got {a} `{}` and {b} `{}`",
                    e.from, e.to
                ),
            ));
        }
    }
    let pairs: Vec<(&str, &str)> = edges
        .iter()
        .map(|e| (e.from.as_str(), e.to.as_str()))
        .collect();
    BipartiteGraph::build(decls, &pairs).map_err(|e| invalid(0, e.to_string()))
}

pub fn overlay(
    g: &BipartiteGraph,
    rows: &[EdgeRow],
    path: &Path,
) -> Result<HyperlinkOverlay, LoadError> {
    let mut pairs = Vec::with_capacity(rows.len());
    for r in rows {
        for id in [&r.from, &r.to] {
            match g.index_of(id.as_str()) {
                None => {
                    return Err(LoadError::Invalid {
                        path: path.to_path_buf(),
                        line: r.line,
                        message: format!("unknown node `{id}`"),
                    })
                }
                Some(v) if g.kind(v) != NodeKind::Page => {
                    return Err(LoadError::Invalid {
                        path: path.to_path_buf(),
                        line: r.line,
                        message: format!("`{id}` is not a page"),
                    })
                }
                Some(_) => {}
            }
        }
        pairs.push((r.from.as_str(), r.to.as_str()));
    }
    HyperlinkOverlay::build(g, &pairs).map_err(|e| LoadError::Invalid {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })
}
