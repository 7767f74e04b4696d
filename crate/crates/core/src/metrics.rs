//! Degree distributions, bipartite assortativity, the four-cycle
//! clustering coefficient and shortest-path betweenness.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::{BipartiteGraph, NodeKind};
use crate::null_model::NullSummary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("at least 2 edges are required, found {0}")]
    TooFewEdges(usize),
    #[error("correlation undefined: a series has zero variance")]
    ZeroVariance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeRow {
    pub degree: usize,
    pub count: usize,
    /// Fraction of nodes of this kind with degree `>= degree`.
    pub ccdf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    pub kind: NodeKind,
    pub rows: Vec<DegreeRow>,
}

/// Degree histogram and complementary cumulative distribution for one node
/// class, ascending by degree. Isolated nodes appear as `degree == 0`.
pub fn degree_distribution(g: &BipartiteGraph, kind: NodeKind) -> DegreeDistribution {
    let nodes = g.nodes_of(kind);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in nodes {
        *counts.entry(g.degree_of(v)).or_insert(0) += 1;
    }
    let total = nodes.len();
    let mut at_least = total;
    let rows = counts
        .into_iter()
        .map(|(degree, count)| {
            let row = DegreeRow {
                degree,
                count,
                ccdf: at_least as f64 / total as f64,
            };
            at_least -= count;
            row
        })
        .collect();
    DegreeDistribution { kind, rows }
}

/// Pearson correlation of integer pairs, computed from exact integer sums.
/// `None` when either marginal is constant or fewer than two pairs exist.
pub fn pearson_counts(pairs: &[(u64, u64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as i128;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for &(x, y) in pairs {
        let (x, y) = (x as i128, y as i128);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let cov = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx == 0 || vy == 0 {
        return None;
    }
    let r = cov as f64 / libm::sqrt(vx as f64 * vy as f64);
    Some(r.clamp(-1.0, 1.0))
}

/// Pearson correlation of real pairs. `None` on zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some((cov / libm::sqrt(vx * vy)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssortativityReport {
    /// `None` when either degree marginal has zero variance.
    pub r: Option<f64>,
    pub n_edges: usize,
    pub null: Option<NullSummary>,
}

/// Edge-wise Pearson correlation between page degree and fact degree.
pub fn bipartite_assortativity(g: &BipartiteGraph) -> Result<AssortativityReport, MetricsError> {
    if g.edge_count() < 2 {
        return Err(MetricsError::TooFewEdges(g.edge_count()));
    }
    Ok(AssortativityReport {
        r: assortativity_value(g),
        n_edges: g.edge_count(),
        null: None,
    })
}

pub(crate) fn assortativity_value(g: &BipartiteGraph) -> Option<f64> {
    let pairs: Vec<(u64, u64)> = g
        .edges()
        .iter()
        .map(|&(p, f)| (g.degree_of(p) as u64, g.degree_of(f) as u64))
        .collect();
    pearson_counts(&pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringReport {
    pub cycles4: u64,
    pub quadruples: u64,
    pub c4: f64,
    pub null: Option<NullSummary>,
}

/// `4 * cycles / quadruples`, or 0 when there are no quadruples.
pub fn c4_from_counts(cycles4: u64, quadruples: u64) -> f64 {
    if quadruples == 0 {
        0.0
    } else {
        4.0 * cycles4 as f64 / quadruples as f64
    }
}

/// Counts 4-cycles and connected quadruples (3-edge paths on 4 distinct
/// vertices) and forms the C4 ratio.
pub fn clustering_c4(g: &BipartiteGraph) -> ClusteringReport {
    let (cycles4, quadruples) = (count_cycles4(g), count_quadruples(g));
    ClusteringReport {
        cycles4,
        quadruples,
        c4: c4_from_counts(cycles4, quadruples),
        null: None,
    }
}

/// Every 4-cycle has exactly two pages; each page pair sharing `c` facts
/// closes `c choose 2` cycles.
fn count_cycles4(g: &BipartiteGraph) -> u64 {
    let mut shared = vec![0u64; g.node_count()];
    let mut touched = Vec::new();
    let mut total = 0;
    for &u in g.pages() {
        for &f in g.neighbors(u) {
            for &v in g.neighbors(f) {
                if v > u {
                    if shared[v] == 0 {
                        touched.push(v);
                    }
                    shared[v] += 1;
                }
            }
        }
        for v in touched.drain(..) {
            let c = shared[v];
            total += c * (c - 1) / 2;
            shared[v] = 0;
        }
    }
    total
}

/// A 3-edge path is fixed by its middle edge and one further neighbor at
/// each end; bipartite graphs have no triangles to subtract.
fn count_quadruples(g: &BipartiteGraph) -> u64 {
    g.edges()
        .iter()
        .map(|&(p, f)| (g.degree_of(p) as u64 - 1) * (g.degree_of(f) as u64 - 1))
        .sum()
}

/// Which node pairs count as path endpoints in betweenness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoints {
    #[default]
    All,
    FactsOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessScores {
    /// Unnormalized score per node index.
    pub scores: Vec<f64>,
}

impl BetweennessScores {
    pub fn get(&self, g: &BipartiteGraph, id: &str) -> Option<f64> {
        g.index_of(id).map(|v| self.scores[v])
    }
}

/// Exact shortest-path betweenness: for every unordered endpoint pair, the
/// fraction of its shortest paths through each interior vertex, summed.
pub fn betweenness(g: &BipartiteGraph, endpoints: Endpoints) -> BetweennessScores {
    let alive = vec![true; g.node_count()];
    BetweennessScores {
        scores: betweenness_within(g, &alive, endpoints),
    }
}

/// Betweenness on the subgraph induced by `alive` nodes (dead nodes score
/// 0). Sources are visited in index order and summed in that order.
pub(crate) fn betweenness_within(
    g: &BipartiteGraph,
    alive: &[bool],
    endpoints: Endpoints,
) -> Vec<f64> {
    let n = g.node_count();
    let is_endpoint = |v: usize| match endpoints {
        Endpoints::All => true,
        Endpoints::FactsOnly => g.kind(v) == NodeKind::Fact,
    };
    let mut score = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in 0..n {
        if !alive[s] || !is_endpoint(s) {
            continue;
        }
        for &v in &order {
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
        }
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if !alive[w] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        for &w in order.iter().rev() {
            let carry = if is_endpoint(w) { 1.0 } else { 0.0 } + delta[w];
            for &v in g.neighbors(w) {
                if alive[v] && dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * carry;
                }
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    // Each unordered pair was accumulated from both ends.
    for x in &mut score {
        *x /= 2.0;
    }
    score
}

/// Pearson correlation between degree and betweenness over all nodes.
pub fn degree_betweenness_correlation(g: &BipartiteGraph) -> Result<f64, MetricsError> {
    let between = betweenness(g, Endpoints::All);
    let degrees: Vec<f64> = (0..g.node_count()).map(|v| g.degree_of(v) as f64).collect();
    pearson(&degrees, &between.scores).ok_or(MetricsError::ZeroVariance)
}
