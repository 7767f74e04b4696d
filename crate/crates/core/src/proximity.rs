//! Cycle-free effective conductance (CFEC) between nodes.
//!
//! CFEC(s, t) is `degree(s)` times the probability that a walk from `s`,
//! stepping to a uniformly random neighbor each time, reaches `t` before
//! it revisits any node. Summed over simple paths `s = v1, .., vk = t`
//! that is `degree(s) * prod_{i<k} 1/degree(v_i)`, which only depends on
//! the interior vertices and is therefore symmetric in `s` and `t`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError};

pub const DEFAULT_MAX_PATH_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProximityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("source and target are the same node")]
    SameNode,
    #[error("node set is empty or yields no distinct pairs")]
    EmptySet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityResult {
    pub value: f64,
    pub paths_found: u64,
    /// Set when some path was cut off by the length cap.
    pub truncated: bool,
}

/// CFEC between two nodes given by id, over simple paths of at most
/// `max_len` edges.
pub fn cfec(
    g: &BipartiteGraph,
    s: &str,
    t: &str,
    max_len: usize,
) -> Result<ProximityResult, ProximityError> {
    let (s, t) = (g.require(s)?, g.require(t)?);
    cfec_index(g, s, t, max_len)
}

pub fn cfec_index(
    g: &BipartiteGraph,
    s: usize,
    t: usize,
    max_len: usize,
) -> Result<ProximityResult, ProximityError> {
    if s == t {
        return Err(ProximityError::SameNode);
    }
    let mut search = PathSearch {
        g,
        target: t,
        max_len,
        visited: vec![false; g.node_count()],
        sum: 0.0,
        paths: 0,
        truncated: false,
    };
    search.visited[s] = true;
    if max_len == 0 {
        search.truncated = g.degree_of(s) > 0;
    } else {
        search.extend(s, 0, 1.0);
    }
    Ok(ProximityResult {
        value: g.degree_of(s) as f64 * search.sum,
        paths_found: search.paths,
        truncated: search.truncated,
    })
}

struct PathSearch<'a> {
    g: &'a BipartiteGraph,
    target: usize,
    max_len: usize,
    visited: Vec<bool>,
    sum: f64,
    paths: u64,
    truncated: bool,
}

impl PathSearch<'_> {
    /// `weight` is the walk probability of the path so far, ending at `v`
    /// after `depth` edges.
    fn extend(&mut self, v: usize, depth: usize, weight: f64) {
        let step = weight / self.g.degree_of(v) as f64;
        for &w in self.g.neighbors(v) {
            if self.visited[w] {
                continue;
            }
            if w == self.target {
                self.sum += step;
                self.paths += 1;
                continue;
            }
            if depth + 1 >= self.max_len {
                if self.g.neighbors(w).iter().any(|&x| !self.visited[x]) {
                    self.truncated = true;
                }
                continue;
            }
            self.visited[w] = true;
            self.extend(w, depth + 1, step);
            self.visited[w] = false;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetProximity {
    pub mean: f64,
    pub pairs: usize,
    pub truncated: bool,
}

/// Mean CFEC over all ordered pairs `(a, b)` with `a != b`.
pub fn set_proximity(
    g: &BipartiteGraph,
    set_a: &[usize],
    set_b: &[usize],
    max_len: usize,
) -> Result<SetProximity, ProximityError> {
    if set_a.is_empty() || set_b.is_empty() {
        return Err(ProximityError::EmptySet);
    }
    let mut total = 0.0;
    let mut pairs = 0;
    let mut truncated = false;
    for &a in set_a {
        for &b in set_b {
            if a == b {
                continue;
            }
            let r = cfec_index(g, a, b, max_len)?;
            total += r.value;
            truncated |= r.truncated;
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(ProximityError::EmptySet);
    }
    Ok(SetProximity {
        mean: total / pairs as f64,
        pairs,
        truncated,
    })
}
