//! Slow, independent reference implementations used to check the fast
//! algorithms. Each works from the raw edge list, never from the
//! incremental formulas it is compared with.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scatter_core::{BipartiteGraph, NodeDecl, NodeKind};

/// Random bipartite graph with `pages + facts` nodes and edge probability
/// `p`. Ids are `P<i>` and `F<i>`.
pub fn random_graph(pages: usize, facts: usize, p: f64, seed: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<NodeDecl> = (0..pages)
        .map(|i| NodeDecl::page(&format!("P{i}")))
        .collect();
    nodes.extend((0..facts).map(|i| NodeDecl::fact(&format!("F{i}"))));
    let mut edges = Vec::new();
    for i in 0..pages {
        for j in 0..facts {
            if rng.random_bool(p) {
                edges.push((format!("P{i}"), format!("F{j}")));
            }
        }
    }
    BipartiteGraph::build(nodes, &edges).expect("valid random graph")
}

/// Random graph with at most `max_nodes` nodes, at least one of each kind,
/// and a random density.
pub fn random_small_graph(max_nodes: usize, seed: u64) -> BipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ee_d0f0_ac1e);
    let total = rng.random_range(2..=max_nodes);
    let pages = rng.random_range(1..total);
    let p = rng.random_range(0.15..0.8);
    random_graph(pages, total - pages, p, rng.random())
}

fn adjacent(g: &BipartiteGraph, a: usize, b: usize) -> bool {
    g.neighbors(a).contains(&b)
}

fn bfs_distances(g: &BipartiteGraph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Every shortest path from `s` to `t`, listed node by node.
pub fn all_shortest_paths(g: &BipartiteGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let dist = bfs_distances(g, s);
    let Some(d) = dist[t] else { return Vec::new() };
    let mut out = Vec::new();
    let mut path = vec![s];
    fn walk(
        g: &BipartiteGraph,
        dist: &[Option<usize>],
        t: usize,
        d: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if path.len() == d + 1 {
            if v == t {
                out.push(path.clone());
            }
            return;
        }
        for &w in g.neighbors(v) {
            if dist[w] == Some(path.len()) {
                path.push(w);
                walk(g, dist, t, d, path, out);
                path.pop();
            }
        }
    }
    walk(g, &dist, t, d, &mut path, &mut out);
    out
}

/// Betweenness by listing all shortest paths of every unordered pair.
/// With `facts_only`, only fact–fact pairs count as endpoints.
pub fn brute_betweenness(g: &BipartiteGraph, facts_only: bool) -> Vec<f64> {
    let n = g.node_count();
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if facts_only && (g.kind(s) != NodeKind::Fact || g.kind(t) != NodeKind::Fact) {
                continue;
            }
            let paths = all_shortest_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    score[v] += 1.0 / total;
                }
            }
        }
    }
    score
}

fn four_subsets(n: usize, mut f: impl FnMut([usize; 4])) {
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    f([a, b, c, d]);
                }
            }
        }
    }
}

const PERMS4: [[usize; 4]; 24] = {
    let mut out = [[0; 4]; 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    out[k] = [a, b, c, 6 - a - b - c];
                    k += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// Four-cycles and three-edge paths, counted over every 4-node subset.
pub fn brute_c4_counts(g: &BipartiteGraph) -> (u64, u64) {
    let (mut cycles, mut paths) = (0u64, 0u64);
    four_subsets(g.node_count(), |set| {
        let mut path_orders = 0u64;
        let mut cycle_orders = 0u64;
        for perm in PERMS4 {
            let v = perm.map(|i| set[i]);
            if adjacent(g, v[0], v[1]) && adjacent(g, v[1], v[2]) && adjacent(g, v[2], v[3]) {
                path_orders += 1;
                if adjacent(g, v[3], v[0]) {
                    cycle_orders += 1;
                }
            }
        }
        // A path is seen in both directions; a cycle from 4 starts × 2 directions.
        paths += path_orders / 2;
        cycles += cycle_orders / 8;
    });
    (cycles, paths)
}

/// Maximum modularity over all partitions of the non-isolated nodes
/// (isolated nodes contribute nothing). Partitions are enumerated as
/// restricted growth strings with the score kept in integers scaled by
/// `4M²`.
pub fn exhaustive_max_modularity(g: &BipartiteGraph) -> f64 {
    let m = g.edge_count() as i64;
    assert!(m > 0, "modularity needs edges");
    let nodes: Vec<usize> = (0..g.node_count())
        .filter(|&v| g.degree_of(v) > 0)
        .collect();
    let k = nodes.len();
    let deg: Vec<i64> = nodes.iter().map(|&v| g.degree_of(v) as i64).collect();
    // earlier[i] lists positions j < i adjacent to node i.
    let earlier: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..i)
                .filter(|&j| adjacent(g, nodes[i], nodes[j]))
                .collect()
        })
        .collect();

    struct State {
        label: Vec<usize>,
        internal: Vec<i64>,
        degree: Vec<i64>,
        best: i64,
    }
    fn rec(
        i: usize,
        blocks: usize,
        score: i64,
        m: i64,
        deg: &[i64],
        earlier: &[Vec<usize>],
        st: &mut State,
    ) {
        if i == deg.len() {
            st.best = st.best.max(score);
            return;
        }
        for c in 0..=blocks {
            let links = earlier[i].iter().filter(|&&j| st.label[j] == c).count() as i64;
            let (l, d) = (st.internal[c], st.degree[c]);
            let before = 4 * m * l - d * d;
            let after = 4 * m * (l + links) - (d + deg[i]) * (d + deg[i]);
            st.label[i] = c;
            st.internal[c] += links;
            st.degree[c] += deg[i];
            let next_blocks = if c == blocks { blocks + 1 } else { blocks };
            rec(
                i + 1,
                next_blocks,
                score - before + after,
                m,
                deg,
                earlier,
                st,
            );
            st.internal[c] -= links;
            st.degree[c] -= deg[i];
        }
    }
    let mut st = State {
        label: vec![0; k],
        internal: vec![0; k + 1],
        degree: vec![0; k + 1],
        best: i64::MIN,
    };
    rec(0, 0, 0, m, &deg, &earlier, &mut st);
    st.best as f64 / (4 * m * m) as f64
}

/// Monte-Carlo estimate of CFEC: a walker leaves `s`, steps to a uniformly
/// chosen neighbour each time, and fails on revisiting a node or reaching
/// a dead end. The estimate is `deg(s) · P(reach t)`, returned with its
/// standard error.
pub fn monte_carlo_cfec(
    g: &BipartiteGraph,
    s: usize,
    t: usize,
    walks: u64,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut visited = vec![false; g.node_count()];
    for _ in 0..walks {
        visited.iter_mut().for_each(|x| *x = false);
        let mut v = s;
        visited[s] = true;
        loop {
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                break;
            }
            let w = nbrs[rng.random_range(0..nbrs.len())];
            if w == t {
                hits += 1;
                break;
            }
            if visited[w] {
                break;
            }
            visited[w] = true;
            v = w;
        }
    }
    let p = hits as f64 / walks as f64;
    let d = g.degree_of(s) as f64;
    (d * p, d * (p * (1.0 - p) / walks as f64).sqrt())
}

/// Brute-force co-occurrence weight of `u` and `v` in a projection.
pub fn shared_neighbours(g: &BipartiteGraph, u: usize, v: usize) -> u32 {
    g.neighbors(u)
        .iter()
        .filter(|x| g.neighbors(v).contains(x))
        .count() as u32
}

/// Two complete page/fact blocks of 2–3 pages and 2–3 facts joined by a
/// single cross edge, at most 12 nodes. Returns the graph and the planted
/// block of every node.
pub fn planted_two_blocks(seed: u64) -> (BipartiteGraph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb10c);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut members: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for b in 0..2 {
        let pages: Vec<String> = (0..rng.random_range(2..=3))
            .map(|i| format!("P{b}{i}"))
            .collect();
        let facts: Vec<String> = (0..rng.random_range(2..=3))
            .map(|i| format!("F{b}{i}"))
            .collect();
        let mut block = Vec::new();
        for p in &pages {
            for f in &facts {
                block.push((p.clone(), f.clone()));
            }
        }
        edges.extend(block);
        nodes.extend(pages.iter().map(|p| NodeDecl::page(p)));
        nodes.extend(facts.iter().map(|f| NodeDecl::fact(f)));
        members.push((pages, facts));
    }
    let (from, to) = if rng.random_bool(0.5) { (0, 1) } else { (1, 0) };
    let p = members[from].0[rng.random_range(0..members[from].0.len())].clone();
    let f = members[to].1[rng.random_range(0..members[to].1.len())].clone();
    edges.push((p, f));
    let g = BipartiteGraph::build(nodes, &edges).expect("valid planted graph");
    let block = (0..g.node_count())
        .map(|v| usize::from(g.id(v).as_str().as_bytes()[1] == b'1'))
        .collect();
    (g, block)
}

/// True when two assignments describe the same partition up to renaming.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
