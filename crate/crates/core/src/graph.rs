//! The bipartite scatter graph: pages, facts and the containment edges
//! between them.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("edge `{0}`-`{1}` joins two nodes of the same kind")]
    SameKindEdge(String, String),
    #[error("node `{0}` declared more than once")]
    DuplicateNode(String),
    #[error("invalid node id `{0}`: ids must be non-empty and contain no whitespace")]
    InvalidId(String),
    #[error("fact `{0}` carries a site; only pages have sites")]
    SiteOnFact(String),
}

/// Case-sensitive node identifier. Non-empty, no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(GraphError::InvalidId(id));
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Page,
    Fact,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Page => "page",
            NodeKind::Fact => "fact",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeMeta {
    pub label: String,
    pub topic: Option<String>,
    /// Host the page was retrieved from. Always `None` on facts.
    pub site: Option<String>,
}

impl NodeMeta {
    pub fn labelled(label: impl Into<String>) -> Self {
        NodeMeta {
            label: label.into(),
            ..NodeMeta::default()
        }
    }
}

/// One node declaration as accepted by [`BipartiteGraph::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDecl {
    pub id: NodeId,
    pub kind: NodeKind,
    pub meta: NodeMeta,
}

impl NodeDecl {
    pub fn new(id: NodeId, kind: NodeKind, meta: NodeMeta) -> Self {
        NodeDecl { id, kind, meta }
    }

    /// Shorthand for fixtures: panics on an invalid id.
    pub fn page(id: &str) -> Self {
        NodeDecl::new(
            NodeId::new(id).expect("valid id"),
            NodeKind::Page,
            NodeMeta::labelled(id),
        )
    }

    /// Shorthand for fixtures: panics on an invalid id.
    pub fn fact(id: &str) -> Self {
        NodeDecl::new(
            NodeId::new(id).expect("valid id"),
            NodeKind::Fact,
            NodeMeta::labelled(id),
        )
    }

    pub fn with_topic(mut self, topic: &str) -> Self {
        self.meta.topic = Some(topic.to_string());
        self
    }

    pub fn with_site(mut self, site: &str) -> Self {
        self.meta.site = Some(site.to_string());
        self
    }
}

/// Immutable bipartite graph.
///
/// Nodes are indexed `0..node_count()` in lexicographic id order; every
/// index-based accessor uses that numbering. Edges are stored once as
/// `(page, fact)` index pairs, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    ids: Vec<NodeId>,
    kinds: Vec<NodeKind>,
    meta: Vec<NodeMeta>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    pages: Vec<usize>,
    facts: Vec<usize>,
}

impl BipartiteGraph {
    /// Builds a graph from node declarations and `(a, b)` id pairs. Edge
    /// endpoints may be given in either order; duplicates collapse.
    pub fn build<A, B>(nodes: Vec<NodeDecl>, edges: &[(A, B)]) -> Result<Self, GraphError>
    where
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut nodes = nodes;
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in nodes.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(GraphError::DuplicateNode(pair[0].id.to_string()));
            }
        }
        for n in &nodes {
            if n.kind == NodeKind::Fact && n.meta.site.is_some() {
                return Err(GraphError::SiteOnFact(n.id.to_string()));
            }
        }

        let mut ids = Vec::with_capacity(nodes.len());
        let mut kinds = Vec::with_capacity(nodes.len());
        let mut meta = Vec::with_capacity(nodes.len());
        for n in nodes {
            ids.push(n.id);
            kinds.push(n.kind);
            meta.push(n.meta);
        }

        let lookup = |id: &str| -> Result<usize, GraphError> {
            ids.binary_search_by(|probe| probe.as_str().cmp(id))
                .map_err(|_| GraphError::UnknownNode(id.to_string()))
        };
        let mut index_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            let pair = match (kinds[ia], kinds[ib]) {
                (NodeKind::Page, NodeKind::Fact) => (ia, ib),
                (NodeKind::Fact, NodeKind::Page) => (ib, ia),
                _ => return Err(GraphError::SameKindEdge(a.to_string(), b.to_string())),
            };
            index_edges.push(pair);
        }
        Ok(Self::assemble(ids, kinds, meta, index_edges))
    }

    fn assemble(
        ids: Vec<NodeId>,
        kinds: Vec<NodeKind>,
        meta: Vec<NodeMeta>,
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); ids.len()];
        for &(p, f) in &edges {
            adj[p].push(f);
            adj[f].push(p);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let pages = (0..ids.len())
            .filter(|&i| kinds[i] == NodeKind::Page)
            .collect();
        let facts = (0..ids.len())
            .filter(|&i| kinds[i] == NodeKind::Fact)
            .collect();
        BipartiteGraph {
            ids,
            kinds,
            meta,
            adj,
            edges,
            pages,
            facts,
        }
    }

    /// Same node set and metadata, different containment edges given as
    /// `(page, fact)` index pairs.
    pub(crate) fn with_edges(&self, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(p, f)| self.kinds[p] == NodeKind::Page && self.kinds[f] == NodeKind::Fact));
        Self::assemble(
            self.ids.clone(),
            self.kinds.clone(),
            self.meta.clone(),
            edges,
        )
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of pages (`m`).
    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    /// Number of facts (`n`).
    pub fn fact_count(&self) -> usize {
        self.facts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize, GraphError> {
        self.index_of(id)
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    pub fn id(&self, v: usize) -> &NodeId {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn kind(&self, v: usize) -> NodeKind {
        self.kinds[v]
    }

    pub fn meta(&self, v: usize) -> &NodeMeta {
        &self.meta[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Degree of a node looked up by id.
    pub fn degree(&self, id: &str) -> Result<usize, GraphError> {
        Ok(self.degree_of(self.require(id)?))
    }

    pub fn pages(&self) -> &[usize] {
        &self.pages
    }

    pub fn facts(&self) -> &[usize] {
        &self.facts
    }

    pub fn nodes_of(&self, kind: NodeKind) -> &[usize] {
        match kind {
            NodeKind::Page => &self.pages,
            NodeKind::Fact => &self.facts,
        }
    }

    /// Containment edges as sorted `(page, fact)` index pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, page: usize, fact: usize) -> bool {
        self.edges.binary_search(&(page, fact)).is_ok()
    }

    /// Node declarations in index order; feeding them back to
    /// [`BipartiteGraph::build`] with [`Self::edge_ids`] rebuilds `self`.
    pub fn decls(&self) -> Vec<NodeDecl> {
        (0..self.node_count())
            .map(|v| NodeDecl::new(self.ids[v].clone(), self.kinds[v], self.meta[v].clone()))
            .collect()
    }

    pub fn edge_ids(&self) -> Vec<(NodeId, NodeId)> {
        self.edges
            .iter()
            .map(|&(p, f)| (self.ids[p].clone(), self.ids[f].clone()))
            .collect()
    }

    /// Collapses the graph onto one node class. Two nodes are linked iff
    /// they share at least one neighbor; the weight is the number shared.
    /// This loses information: different bipartite graphs can share a
    /// projection.
    pub fn one_mode_projection(&self, side: NodeKind) -> WeightedProjection {
        let nodes = self.nodes_of(side).to_vec();
        let mut weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for &u in &nodes {
            for &mid in &self.adj[u] {
                for &v in &self.adj[mid] {
                    if v > u {
                        *weights.entry((u, v)).or_insert(0) += 1;
                    }
                }
            }
        }
        WeightedProjection {
            side,
            nodes,
            edges: weights.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
        }
    }

    /// Breadth-first connected components over all nodes.
    pub fn connected_components(&self) -> ComponentAssignment {
        let n = self.node_count();
        let mut component = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            component[root] = id;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in &self.adj[v] {
                    if component[w] == usize::MAX {
                        component[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        // Components are numbered by their smallest member, so the first
        // maximum is the tie-break winner.
        let giant = sizes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, usize)>, (i, &s)| match best {
                Some((_, bs)) if bs >= s => best,
                _ => Some((i, s)),
            })
            .map(|(i, _)| i);
        ComponentAssignment {
            component,
            sizes,
            giant,
        }
    }

    /// Groups of facts that can reach one another through documents.
    /// Each group is sorted; groups are ordered by their first member.
    pub fn fact_connectivity(&self) -> Vec<Vec<usize>> {
        let alive = vec![true; self.node_count()];
        self.fact_groups_with(&alive)
    }

    /// Fact groups in the subgraph induced by pages with `page_alive[p]`
    /// set (indexed by node index; entries for facts are ignored).
    pub fn fact_groups_with(&self, page_alive: &[bool]) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.node_count());
        for &p in &self.pages {
            if !page_alive[p] {
                continue;
            }
            if let Some((&first, rest)) = self.adj[p].split_first() {
                for &f in rest {
                    dsu.union(first, f);
                }
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &f in &self.facts {
            by_root.entry(dsu.find(f)).or_default().push(f);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_unstable_by_key(|g| g[0]);
        groups
    }
}

/// Weighted co-occurrence graph over one node class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedProjection {
    pub side: NodeKind,
    /// Node indices (into the source graph) of the projected class.
    pub nodes: Vec<usize>,
    /// `(u, v, weight)` with `u < v`, sorted; `weight >= 1`.
    pub edges: Vec<(usize, usize, u32)>,
}

impl WeightedProjection {
    pub fn weight(&self, u: usize, v: usize) -> u32 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|i| self.edges[i].2)
            .unwrap_or(0)
    }

    /// Connected components of the projection, in the same form as
    /// [`BipartiteGraph::fact_connectivity`].
    pub fn components(&self) -> Vec<Vec<usize>> {
        let max = self.nodes.iter().copied().max().map_or(0, |m| m + 1);
        let mut dsu = Dsu::new(max);
        for &(u, v, _) in &self.edges {
            dsu.union(u, v);
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in &self.nodes {
            by_root.entry(dsu.find(v)).or_default().push(v);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_unstable_by_key(|g| g[0]);
        groups
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAssignment {
    /// Component id per node index.
    pub component: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Largest component; ties go to the one with the smallest member id.
    pub giant: Option<usize>,
}

impl ComponentAssignment {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
