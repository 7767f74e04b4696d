//! Navigation over the combined scatter + hyperlink network.
//!
//! Two user models are simulated: a random walker that lands on a random
//! matching page and follows links within the matching set, jumping to
//! another random result when stuck; and a smart surfer that starts on the
//! most fact-rich page, follows only links to fact-bearing pages and jumps
//! back to that page when stuck. A jump consumes one step, as does every
//! followed link. Step 0 is the landing page.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::graph::{BipartiteGraph, NodeKind};
use crate::rng::{child_seed, seeded, Rng};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurferError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("`{0}` is not a page")]
    NotAPage(String),
    #[error("self-link on `{0}`")]
    SelfLink(String),
    #[error("no matching pages")]
    EmptyMatchingSet,
}

/// Directed page-to-page hyperlinks over the pages of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperlinkOverlay {
    out: Vec<Vec<usize>>,
    links: Vec<(usize, usize)>,
}

impl HyperlinkOverlay {
    /// Validates and deduplicates `(src, dst)` id pairs.
    pub fn build<A: AsRef<str>, B: AsRef<str>>(
        g: &BipartiteGraph,
        links: &[(A, B)],
    ) -> Result<Self, SurferError> {
        let page = |id: &str| -> Result<usize, SurferError> {
            let v = g
                .index_of(id)
                .ok_or_else(|| SurferError::UnknownNode(id.to_string()))?;
            if g.kind(v) != NodeKind::Page {
                return Err(SurferError::NotAPage(id.to_string()));
            }
            Ok(v)
        };
        let mut pairs = Vec::with_capacity(links.len());
        for (a, b) in links {
            let (src, dst) = (page(a.as_ref())?, page(b.as_ref())?);
            if src == dst {
                return Err(SurferError::SelfLink(a.as_ref().to_string()));
            }
            pairs.push((src, dst));
        }
        Ok(Self::from_indices(g, pairs))
    }

    fn from_indices(g: &BipartiteGraph, mut links: Vec<(usize, usize)>) -> Self {
        links.sort_unstable();
        links.dedup();
        let mut out = vec![Vec::new(); g.node_count()];
        for &(s, d) in &links {
            out[s].push(d);
        }
        HyperlinkOverlay { out, links }
    }

    pub fn empty(g: &BipartiteGraph) -> Self {
        Self::from_indices(g, Vec::new())
    }

    /// Sorted, deduplicated `(src, dst)` index pairs.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn out_links(&self, page: usize) -> &[usize] {
        &self.out[page]
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Random overlay for fixtures: every ordered page pair is linked
/// independently with probability `link_prob`.
pub fn synth_overlay(g: &BipartiteGraph, link_prob: f64, seed: u64) -> HyperlinkOverlay {
    let mut rng = seeded(seed);
    let mut links = Vec::new();
    for &a in g.pages() {
        for &b in g.pages() {
            if a != b && rng.random::<f64>() < link_prob {
                links.push((a, b));
            }
        }
    }
    HyperlinkOverlay::from_indices(g, links)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    RandomWalker,
    /// Uniform choice among qualifying links.
    SmartSurfer,
    /// Smart surfer that always takes the link revealing the most new
    /// facts (ties by id).
    SmartSurferGreedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub mean_facts: f64,
    pub std_facts: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurferTrace {
    pub rows: Vec<TraceRow>,
    pub policy: Policy,
    pub trials: usize,
    pub seed: u64,
    pub matching_pages: Vec<usize>,
}

fn check_matching(g: &BipartiteGraph, matching: &[usize]) -> Result<Vec<usize>, SurferError> {
    let set: BTreeSet<usize> = matching.iter().copied().collect();
    if set.is_empty() {
        return Err(SurferError::EmptyMatchingSet);
    }
    for &p in &set {
        if g.kind(p) != NodeKind::Page {
            return Err(SurferError::NotAPage(g.id(p).to_string()));
        }
    }
    Ok(set.into_iter().collect())
}

/// Pages with at least one fact, the default matching set.
pub fn pages_with_facts(g: &BipartiteGraph) -> Vec<usize> {
    g.pages()
        .iter()
        .copied()
        .filter(|&p| g.degree_of(p) > 0)
        .collect()
}

/// Tracks distinct facts seen and pages visited during one trial.
struct Session<'a> {
    g: &'a BipartiteGraph,
    visited: Vec<bool>,
    seen: Vec<bool>,
    found: usize,
    curve: Vec<usize>,
}

impl<'a> Session<'a> {
    fn new(g: &'a BipartiteGraph) -> Self {
        Session {
            g,
            visited: vec![false; g.node_count()],
            seen: vec![false; g.node_count()],
            found: 0,
            curve: Vec::new(),
        }
    }

    fn visit(&mut self, page: usize) {
        self.visited[page] = true;
        for &f in self.g.neighbors(page) {
            if !self.seen[f] {
                self.seen[f] = true;
                self.found += 1;
            }
        }
    }

    fn new_facts(&self, page: usize) -> usize {
        self.g
            .neighbors(page)
            .iter()
            .filter(|&&f| !self.seen[f])
            .count()
    }

    fn record(&mut self) {
        self.curve.push(self.found);
    }
}

/// One random-walker trial landing on `start`; returns distinct facts seen
/// after each step `0..=steps`.
pub fn random_walk_trial(
    g: &BipartiteGraph,
    overlay: &HyperlinkOverlay,
    matching: &[usize],
    start: usize,
    steps: usize,
    rng: &mut Rng,
) -> Vec<usize> {
    let mut in_matching = vec![false; g.node_count()];
    for &p in matching {
        in_matching[p] = true;
    }
    let mut s = Session::new(g);
    let mut current = start;
    s.visit(current);
    s.record();
    let mut options = Vec::new();
    for _ in 0..steps {
        options.clear();
        options.extend(
            overlay
                .out_links(current)
                .iter()
                .copied()
                .filter(|&p| in_matching[p] && !s.visited[p]),
        );
        if options.is_empty() {
            options.extend(matching.iter().copied().filter(|&p| !s.visited[p]));
        }
        if let Some(&next) = options.choose(rng) {
            current = next;
            s.visit(current);
        }
        s.record();
    }
    s.curve
}

/// The smart surfer's landing page: most facts among `matching`, ties by id.
pub fn best_page(g: &BipartiteGraph, matching: &[usize]) -> Option<usize> {
    matching
        .iter()
        .copied()
        .fold(None, |best: Option<usize>, p| match best {
            Some(b) if g.degree_of(b) >= g.degree_of(p) => Some(b),
            _ => Some(p),
        })
}

/// One smart-surfer trial from `best`.
pub fn smart_surf_trial(
    g: &BipartiteGraph,
    overlay: &HyperlinkOverlay,
    best: usize,
    steps: usize,
    greedy: bool,
    rng: &mut Rng,
) -> Vec<usize> {
    let mut s = Session::new(g);
    let mut current = best;
    s.visit(current);
    s.record();
    let mut done = false;
    let mut options = Vec::new();
    for _ in 0..steps {
        if !done {
            options.clear();
            options.extend(
                overlay
                    .out_links(current)
                    .iter()
                    .copied()
                    .filter(|&p| g.degree_of(p) > 0 && !s.visited[p]),
            );
            if !options.is_empty() {
                let next = if greedy {
                    // First maximum in id order.
                    options.iter().copied().fold(options[0], |b, p| {
                        if s.new_facts(p) > s.new_facts(b) {
                            p
                        } else {
                            b
                        }
                    })
                } else {
                    *options.choose(rng).expect("non-empty")
                };
                current = next;
                s.visit(current);
            } else if current != best
                && overlay
                    .out_links(best)
                    .iter()
                    .any(|&p| g.degree_of(p) > 0 && !s.visited[p])
            {
                current = best;
            } else {
                done = true;
            }
        }
        s.record();
    }
    s.curve
}

/// Runs `trials` independent trials of `policy` and averages the curves.
pub fn simulate(
    g: &BipartiteGraph,
    overlay: &HyperlinkOverlay,
    policy: Policy,
    matching_pages: &[usize],
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<SurferTrace, SurferError> {
    let matching = check_matching(g, matching_pages)?;
    let best = best_page(g, &matching).expect("matching is non-empty");
    let curves: Vec<Vec<usize>> = (0..trials)
        .map(|t| {
            let mut rng = seeded(child_seed(seed, t as u64));
            match policy {
                Policy::RandomWalker => {
                    let start = *matching.choose(&mut rng).expect("matching is non-empty");
                    random_walk_trial(g, overlay, &matching, start, steps, &mut rng)
                }
                Policy::SmartSurfer => smart_surf_trial(g, overlay, best, steps, false, &mut rng),
                Policy::SmartSurferGreedy => {
                    smart_surf_trial(g, overlay, best, steps, true, &mut rng)
                }
            }
        })
        .collect();
    let rows = (0..=steps)
        .map(|step| {
            let n = trials as f64;
            let mean = curves.iter().map(|c| c[step] as f64).sum::<f64>() / n;
            let var = if trials > 1 {
                curves
                    .iter()
                    .map(|c| (c[step] as f64 - mean) * (c[step] as f64 - mean))
                    .sum::<f64>()
                    / (n - 1.0)
            } else {
                0.0
            };
            TraceRow {
                step,
                mean_facts: if trials == 0 { 0.0 } else { mean },
                std_facts: libm::sqrt(var),
            }
        })
        .collect();
    Ok(SurferTrace {
        rows,
        policy,
        trials,
        seed,
        matching_pages: matching,
    })
}

pub fn random_walker(
    g: &BipartiteGraph,
    overlay: &HyperlinkOverlay,
    matching_pages: &[usize],
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<SurferTrace, SurferError> {
    simulate(
        g,
        overlay,
        Policy::RandomWalker,
        matching_pages,
        steps,
        trials,
        seed,
    )
}

pub fn smart_surfer(
    g: &BipartiteGraph,
    overlay: &HyperlinkOverlay,
    matching_pages: &[usize],
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<SurferTrace, SurferError> {
    simulate(
        g,
        overlay,
        Policy::SmartSurfer,
        matching_pages,
        steps,
        trials,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::graph;

    fn chain() -> (BipartiteGraph, HyperlinkOverlay) {
        let g = graph(
            &["P1", "P2", "P3"],
            &["F1", "F2", "F3"],
            &[("P1", "F1"), ("P2", "F2"), ("P3", "F3")],
        );
        let o = HyperlinkOverlay::build(&g, &[("P1", "P2"), ("P2", "P3")]).unwrap();
        (g, o)
    }

    fn hub() -> (BipartiteGraph, HyperlinkOverlay) {
        let g = graph(
            &["H", "Q1", "Q2", "Q3"],
            &["A", "B", "C", "D", "X1", "X2", "X3"],
            &[
                ("H", "A"),
                ("H", "B"),
                ("H", "C"),
                ("H", "D"),
                ("Q1", "X1"),
                ("Q2", "X2"),
                ("Q3", "X3"),
            ],
        );
        let o = HyperlinkOverlay::build(&g, &[("H", "Q1"), ("H", "Q2"), ("H", "Q3")]).unwrap();
        (g, o)
    }

    #[test]
    fn overlay_validation() {
        let (g, _) = chain();
        assert_eq!(
            HyperlinkOverlay::build(&g, &[("P1", "P1")]),
            Err(SurferError::SelfLink("P1".into()))
        );
        assert_eq!(
            HyperlinkOverlay::build(&g, &[("P1", "F1")]),
            Err(SurferError::NotAPage("F1".into()))
        );
        assert_eq!(
            HyperlinkOverlay::build(&g, &[("P1", "Z")]),
            Err(SurferError::UnknownNode("Z".into()))
        );
        let o = HyperlinkOverlay::build(&g, &[("P1", "P2"), ("P1", "P2")]).unwrap();
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn single_page_is_flat() {
        let g = graph(&["P1"], &["F1", "F2"], &[("P1", "F1"), ("P1", "F2")]);
        let o = HyperlinkOverlay::empty(&g);
        let t = random_walker(&g, &o, &[g.index_of("P1").unwrap()], 5, 3, 0).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t
            .rows
            .iter()
            .all(|r| r.mean_facts == 2.0 && r.std_facts == 0.0));
    }

    #[test]
    fn chain_walk_from_first_page() {
        let (g, o) = chain();
        let matching = vec![
            g.index_of("P1").unwrap(),
            g.index_of("P2").unwrap(),
            g.index_of("P3").unwrap(),
        ];
        let mut rng = seeded(0);
        let curve = random_walk_trial(&g, &o, &matching, matching[0], 2, &mut rng);
        assert_eq!(curve, vec![1, 2, 3]);
    }

    #[test]
    fn walker_is_deterministic() {
        let (g, o) = hub();
        let m = pages_with_facts(&g);
        assert_eq!(
            random_walker(&g, &o, &m, 6, 20, 9).unwrap(),
            random_walker(&g, &o, &m, 6, 20, 9).unwrap()
        );
        assert_eq!(
            random_walker(&g, &o, &[], 6, 20, 9),
            Err(SurferError::EmptyMatchingSet)
        );
    }

    #[test]
    fn hub_surfer_finds_everything() {
        let (g, o) = hub();
        let m = pages_with_facts(&g);
        let t = smart_surfer(&g, &o, &m, 5, 50, 1).unwrap();
        assert_eq!(t.rows[0].mean_facts, 4.0);
        assert_eq!(t.rows[5].mean_facts, 7.0);
        assert_eq!(t.rows[5].std_facts, 0.0);
    }

    #[test]
    fn greedy_surfer_prefers_richer_links() {
        let g = graph(
            &["H", "Q1", "Q2"],
            &["A", "B", "C", "X1", "X2", "X3"],
            &[
                ("H", "A"),
                ("H", "B"),
                ("H", "C"),
                ("Q1", "X1"),
                ("Q2", "X2"),
                ("Q2", "X3"),
            ],
        );
        let o = HyperlinkOverlay::build(&g, &[("H", "Q1"), ("H", "Q2")]).unwrap();
        let t = simulate(
            &g,
            &o,
            Policy::SmartSurferGreedy,
            &pages_with_facts(&g),
            2,
            3,
            0,
        )
        .unwrap();
        let means: Vec<f64> = t.rows.iter().map(|r| r.mean_facts).collect();
        assert_eq!(means, vec![3.0, 5.0, 5.0]);
    }

    #[test]
    fn smart_surfer_skips_empty_pages() {
        let g = graph(&["H", "E", "Q"], &["A", "B"], &[("H", "A"), ("Q", "B")]);
        let o = HyperlinkOverlay::build(&g, &[("H", "E"), ("E", "Q"), ("H", "Q")]).unwrap();
        let mut rng = seeded(0);
        let h = g.index_of("H").unwrap();
        let curve = smart_surf_trial(&g, &o, h, 3, false, &mut rng);
        assert_eq!(curve, vec![1, 2, 2, 2]);
    }
}
