//! Modularity and greedy agglomerative community detection.
//!
//! The bipartite graph is treated as a plain undirected graph. All
//! bookkeeping is done in integers scaled by `4 M^2` (`M` = edge count), so
//! ties in ΔQ are exact and the merge order is reproducible.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommunityError {
    #[error("partition covers {got} nodes, graph has {expected}")]
    IncompletePartition { expected: usize, got: usize },
    #[error("graph has no edges")]
    NoEdges,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Smallest node index of each merged community.
    pub a: usize,
    pub b: usize,
    pub delta_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community id per node index, numbered `0..` by smallest member.
    pub community: Vec<usize>,
    pub modularity: f64,
    /// Every merge performed, including those after the maximum.
    pub merge_history: Vec<Merge>,
}

impl Partition {
    pub fn count(&self) -> usize {
        self.community.iter().max().map_or(0, |c| c + 1)
    }

    pub fn members(&self, community: usize) -> Vec<usize> {
        (0..self.community.len())
            .filter(|&v| self.community[v] == community)
            .collect()
    }
}

/// `Q = Σ_c (e_cc - a_c²)` for an arbitrary labelling of the nodes.
/// Defined as 0 on an edgeless graph.
pub fn modularity(g: &BipartiteGraph, assignment: &[usize]) -> Result<f64, CommunityError> {
    if assignment.len() != g.node_count() {
        return Err(CommunityError::IncompletePartition {
            expected: g.node_count(),
            got: assignment.len(),
        });
    }
    let m = g.edge_count() as i64;
    if m == 0 {
        return Ok(0.0);
    }
    let mut internal: BTreeMap<usize, i64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, i64> = BTreeMap::new();
    for &(p, f) in g.edges() {
        if assignment[p] == assignment[f] {
            *internal.entry(assignment[p]).or_insert(0) += 1;
        }
    }
    for (v, &c) in assignment.iter().enumerate() {
        *degree.entry(c).or_insert(0) += g.degree_of(v) as i64;
    }
    let scaled: i64 = degree
        .iter()
        .map(|(c, &d)| 4 * m * internal.get(c).copied().unwrap_or(0) - d * d)
        .sum();
    Ok(scaled as f64 / (4 * m * m) as f64)
}

struct Community {
    internal: i64,
    degree: i64,
    /// Neighboring community -> number of edges between.
    links: BTreeMap<usize, i64>,
}

/// Greedy agglomeration: start from singletons and repeatedly merge the
/// connected pair with the largest ΔQ (ties: smallest representative
/// pair), down to one community per connected component. Returns the
/// partition at the highest Q seen; among equal maxima the one reached
/// last (fewest communities) wins.
pub fn greedy_modularity(g: &BipartiteGraph) -> Result<Partition, CommunityError> {
    let m = g.edge_count() as i64;
    if m == 0 {
        return Err(CommunityError::NoEdges);
    }
    let n = g.node_count();
    let mut live: BTreeMap<usize, Community> = BTreeMap::new();
    for v in 0..n {
        let mut links = BTreeMap::new();
        for &w in g.neighbors(v) {
            links.insert(w, 1);
        }
        live.insert(
            v,
            Community {
                internal: 0,
                degree: g.degree_of(v) as i64,
                links,
            },
        );
    }
    let mut scaled_q: i64 = live.values().map(|c| -c.degree * c.degree).sum();
    let mut best_q = scaled_q;
    let mut best_step = 0;
    let mut history: Vec<(usize, usize, i64)> = Vec::new();

    loop {
        // ΔQ · 4M² = 4M·L_ab − 2·d_a·d_b
        let mut choice: Option<(i64, usize, usize)> = None;
        for (&a, ca) in &live {
            for (&b, &between) in ca.links.range(a + 1..) {
                let gain = 4 * m * between - 2 * ca.degree * live[&b].degree;
                if choice.is_none_or(|(best, _, _)| gain > best) {
                    choice = Some((gain, a, b));
                }
            }
        }
        let Some((gain, a, b)) = choice else { break };

        let cb = live.remove(&b).expect("live community");
        let between = cb.links.get(&a).copied().unwrap_or(0);
        for (&other, &count) in &cb.links {
            if other == a {
                continue;
            }
            let co = live.get_mut(&other).expect("linked community is live");
            co.links.remove(&b);
            *co.links.entry(a).or_insert(0) += count;
        }
        let ca = live.get_mut(&a).expect("live community");
        ca.links.remove(&b);
        for (&other, &count) in &cb.links {
            if other != a {
                *ca.links.entry(other).or_insert(0) += count;
            }
        }
        ca.internal += cb.internal + between;
        ca.degree += cb.degree;

        scaled_q += gain;
        history.push((a, b, gain));
        if scaled_q >= best_q {
            best_q = scaled_q;
            best_step = history.len();
        }
    }

    let mut labels: Vec<usize> = (0..n).collect();
    for &(a, b, _) in &history[..best_step] {
        for label in labels.iter_mut() {
            if *label == b {
                *label = a;
            }
        }
    }
    let mut renumber = BTreeMap::new();
    let community = labels
        .iter()
        .map(|&l| {
            let next = renumber.len();
            *renumber.entry(l).or_insert(next)
        })
        .collect();

    let scale = (4 * m * m) as f64;
    Ok(Partition {
        community,
        modularity: best_q as f64 / scale,
        merge_history: history
            .into_iter()
            .map(|(a, b, gain)| Merge {
                a,
                b,
                delta_q: gain as f64 / scale,
            })
            .collect(),
    })
}

/// Q after each prefix of the merge history, starting from singletons.
pub fn modularity_trajectory(g: &BipartiteGraph, partition: &Partition) -> Vec<f64> {
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut out = vec![modularity(g, &labels).unwrap_or(0.0)];
    for merge in &partition.merge_history {
        for label in labels.iter_mut() {
            if *label == merge.b {
                *label = merge.a;
            }
        }
        out.push(modularity(g, &labels).unwrap_or(0.0));
    }
    out
}
