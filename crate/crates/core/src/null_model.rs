//! Degree-preserving randomization and Monte-Carlo significance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng as _;
use thiserror::Error;

use crate::graph::{BipartiteGraph, NodeDecl, NodeId, NodeKind, NodeMeta};
use crate::metrics::{assortativity_value, clustering_c4};
use crate::rng::{child_seed, seeded};

pub const DEFAULT_SWAP_FACTOR: f64 = 10.0;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NullModelError {
    #[error("at least 2 edges are required, found {0}")]
    TooFewEdges(usize),
    #[error("at least 2 samples are required, found {0}")]
    TooFewSamples(usize),
    #[error("metric undefined on randomized sample {sample}")]
    MetricUndefined { sample: usize },
    #[error("metric undefined on the observed graph")]
    ObservedUndefined,
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Number of swap proposals: `ceil(factor * |E|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapBudget {
    factor: f64,
}

impl SwapBudget {
    pub fn new(factor: f64) -> Result<Self, NullModelError> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(NullModelError::BadParameters(format!(
                "swap factor must be positive, got {factor}"
            )));
        }
        Ok(SwapBudget { factor })
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn attempts(&self, edges: usize) -> u64 {
        libm::ceil(self.factor * edges as f64) as u64
    }
}

impl Default for SwapBudget {
    fn default() -> Self {
        SwapBudget {
            factor: DEFAULT_SWAP_FACTOR,
        }
    }
}

/// Rewires containment edges by double-edge swaps, keeping every node's
/// degree. A proposal `(p1,f1),(p2,f2) -> (p1,f2),(p2,f1)` is accepted only
/// when both pages and both facts differ and neither new edge exists;
/// rejected proposals still use up budget.
pub fn randomize_degree_preserving(
    g: &BipartiteGraph,
    seed: u64,
    budget: SwapBudget,
) -> Result<BipartiteGraph, NullModelError> {
    let m = g.edge_count();
    if m < 2 {
        return Err(NullModelError::TooFewEdges(m));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut rng = seeded(seed);
    for _ in 0..budget.attempts(m) {
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        let (p1, f1) = edges[i];
        let (p2, f2) = edges[j];
        if p1 == p2 || f1 == f2 || present.contains(&(p1, f2)) || present.contains(&(p2, f1)) {
            continue;
        }
        present.remove(&(p1, f1));
        present.remove(&(p2, f2));
        present.insert((p1, f2));
        present.insert((p2, f1));
        edges[i] = (p1, f2);
        edges[j] = (p2, f1);
    }
    Ok(g.with_edges(edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullMetric {
    Assortativity,
    C4,
}

impl NullMetric {
    pub fn evaluate(self, g: &BipartiteGraph) -> Option<f64> {
        match self {
            NullMetric::Assortativity => assortativity_value(g),
            NullMetric::C4 => Some(clustering_c4(g).c4),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullSummary {
    pub observed: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
    pub z: f64,
    /// Two-sided normal-approximation p-value, floored at the smallest
    /// positive normal `f64` so it stays in `(0, 1]`.
    pub p: f64,
    /// Fraction of samples `>= observed`.
    pub empirical_upper: f64,
    pub samples: usize,
    pub seed: u64,
    pub swap_factor: f64,
}

impl NullSummary {
    pub fn from_samples(observed: f64, values: &[f64], seed: u64, swap_factor: f64) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std = libm::sqrt(var);
        let diff = observed - mean;
        let z = if std > 0.0 {
            diff / std
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        let upper = values.iter().filter(|&&v| v >= observed).count() as f64 / n;
        NullSummary {
            observed,
            mean,
            std,
            z,
            p: two_sided_p(z),
            empirical_upper: upper,
            samples: values.len(),
            seed,
            swap_factor,
        }
    }
}

/// `P(|Z| >= |z|)` for a standard normal `Z`.
pub fn two_sided_p(z: f64) -> f64 {
    let p = libm::erfc(libm::fabs(z) / core::f64::consts::SQRT_2);
    p.clamp(f64::MIN_POSITIVE, 1.0)
}

/// Evaluates `metric` on `samples` independent randomizations of `g`.
/// Sample `i` uses child seed `i` of `seed`.
pub fn null_distribution(
    g: &BipartiteGraph,
    metric: NullMetric,
    samples: usize,
    seed: u64,
    budget: SwapBudget,
) -> Result<NullSummary, NullModelError> {
    if samples < 2 {
        return Err(NullModelError::TooFewSamples(samples));
    }
    let values = null_samples(g, metric, samples, seed, budget)?;
    let observed = metric
        .evaluate(g)
        .ok_or(NullModelError::ObservedUndefined)?;
    Ok(NullSummary::from_samples(
        observed,
        &values,
        seed,
        budget.factor(),
    ))
}

/// The raw per-sample metric values behind [`null_distribution`].
pub fn null_samples(
    g: &BipartiteGraph,
    metric: NullMetric,
    samples: usize,
    seed: u64,
    budget: SwapBudget,
) -> Result<Vec<f64>, NullModelError> {
    (0..samples)
        .map(|i| {
            let r = randomize_degree_preserving(g, child_seed(seed, i as u64), budget)?;
            metric
                .evaluate(&r)
                .ok_or(NullModelError::MetricUndefined { sample: i })
        })
        .collect()
}

/// Law for the page degrees of [`synth_scatter`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeLaw {
    /// Uniform on `1..=n`.
    Uniform,
    /// `P(k) ∝ k^-exponent` on `1..=n`.
    HeavyTail { exponent: f64 },
}

/// Synthetic scatter graph for fixtures and benchmarks. Page degrees come
/// from `law` (capped at `n`); each page picks distinct facts with
/// probability proportional to the fact's current degree + 1. Pages are
/// named `P0001..`, facts `F0001..`. Facts may end up isolated.
pub fn synth_scatter(
    m: usize,
    n: usize,
    law: DegreeLaw,
    seed: u64,
) -> Result<BipartiteGraph, NullModelError> {
    if m == 0 || n == 0 {
        return Err(NullModelError::BadParameters(format!(
            "need at least one page and one fact, got m={m} n={n}"
        )));
    }
    let weights: Vec<f64> = match law {
        DegreeLaw::Uniform => (1..=n).map(|_| 1.0).collect(),
        DegreeLaw::HeavyTail { exponent } => {
            if !(exponent.is_finite() && exponent > 0.0) {
                return Err(NullModelError::BadParameters(format!(
                    "exponent must be positive, got {exponent}"
                )));
            }
            (1..=n).map(|k| libm::pow(k as f64, -exponent)).collect()
        }
    };
    let total: f64 = weights.iter().sum();

    let width = 4.max(digits(m.max(n)));
    let mut nodes = Vec::with_capacity(m + n);
    for i in 1..=m {
        let id = format!("P{i:0width$}");
        nodes.push(NodeDecl::new(
            NodeId::new(id.clone()).unwrap(),
            NodeKind::Page,
            NodeMeta::labelled(id),
        ));
    }
    for i in 1..=n {
        let id = format!("F{i:0width$}");
        nodes.push(NodeDecl::new(
            NodeId::new(id.clone()).unwrap(),
            NodeKind::Fact,
            NodeMeta::labelled(id),
        ));
    }

    let mut rng = seeded(seed);
    let mut fact_degree = alloc::vec![0usize; n];
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut chosen = alloc::vec![false; n];
    for page in 1..=m {
        let mut u = rng.random::<f64>() * total;
        let mut k = n;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                k = i + 1;
                break;
            }
            u -= w;
        }
        chosen.iter_mut().for_each(|c| *c = false);
        for _ in 0..k {
            let mass: f64 = (0..n)
                .filter(|&f| !chosen[f])
                .map(|f| (fact_degree[f] + 1) as f64)
                .sum();
            let mut u = rng.random::<f64>() * mass;
            let mut pick = None;
            for f in (0..n).filter(|&f| !chosen[f]) {
                pick = Some(f);
                let w = (fact_degree[f] + 1) as f64;
                if u < w {
                    break;
                }
                u -= w;
            }
            let f = pick.expect("k <= n leaves an unchosen fact");
            chosen[f] = true;
            fact_degree[f] += 1;
            edges.push((format!("P{page:0width$}"), format!("F{:0width$}", f + 1)));
        }
    }
    Ok(BipartiteGraph::build(nodes, &edges).expect("generated ids are consistent"))
}

fn digits(mut x: usize) -> usize {
    let mut d = 1;
    while x >= 10 {
        x /= 10;
        d += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::metrics::degree_distribution;
    use alloc::vec::Vec;

    fn degree_multisets(g: &BipartiteGraph) -> (Vec<usize>, Vec<usize>) {
        let seq = |nodes: &[usize]| nodes.iter().map(|&v| g.degree_of(v)).collect::<Vec<_>>();
        (seq(g.pages()), seq(g.facts()))
    }

    #[test]
    fn k22_has_no_valid_swap() {
        for seed in 0..20 {
            let r = randomize_degree_preserving(&k22(), seed, SwapBudget::default()).unwrap();
            assert_eq!(r, k22());
        }
    }

    #[test]
    fn g1_degrees_survive_randomization() {
        let g = g1();
        let r = randomize_degree_preserving(&g, 3, SwapBudget::new(10.0).unwrap()).unwrap();
        assert_eq!(degree_multisets(&r), degree_multisets(&g));
        let again = randomize_degree_preserving(&g, 3, SwapBudget::new(10.0).unwrap()).unwrap();
        assert_eq!(r.edges(), again.edges());
    }

    #[test]
    fn randomization_needs_two_edges() {
        let g = graph(&["P1"], &["F1"], &[("P1", "F1")]);
        assert_eq!(
            randomize_degree_preserving(&g, 0, SwapBudget::default()),
            Err(NullModelError::TooFewEdges(1))
        );
        assert!(SwapBudget::new(0.0).is_err());
        assert!(SwapBudget::new(f64::NAN).is_err());
        assert_eq!(SwapBudget::new(1.5).unwrap().attempts(3), 5);
    }

    #[test]
    fn summary_z_and_p_from_reported_values() {
        // mean 0.242, std 0.004 against an observed 0.365.
        let values = [0.238, 0.246];
        let s = NullSummary::from_samples(0.365, &values, 0, 10.0);
        assert!((s.mean - 0.242).abs() < 1e-12);
        let s = NullSummary { std: 0.004, ..s };
        let z = (s.observed - s.mean) / s.std;
        assert!((z - 30.75).abs() < 1e-9);
        assert!(two_sided_p(z) < 1e-12);
        assert!(two_sided_p(z) > 0.0);
        assert_eq!(two_sided_p(0.0), 1.0);
        assert!((two_sided_p(1.959963984540054) - 0.05).abs() < 1e-9);
    }

    #[test]
    fn constant_samples_keep_p_in_range() {
        let s = NullSummary::from_samples(1.0, &[0.5, 0.5, 0.5], 0, 10.0);
        assert_eq!(s.std, 0.0);
        assert!(s.z.is_infinite());
        assert!(s.p > 0.0 && s.p <= 1.0);
        assert_eq!(s.empirical_upper, 0.0);
        let same = NullSummary::from_samples(0.5, &[0.5, 0.5], 0, 10.0);
        assert_eq!((same.z, same.p, same.empirical_upper), (0.0, 1.0, 1.0));
    }

    #[test]
    fn null_distribution_errors() {
        let g = g1();
        assert_eq!(
            null_distribution(&g, NullMetric::C4, 1, 0, SwapBudget::default()),
            Err(NullModelError::TooFewSamples(1))
        );
        // Every randomization of a star is the star itself.
        let star = graph(
            &["P1"],
            &["F1", "F2", "F3"],
            &[("P1", "F1"), ("P1", "F2"), ("P1", "F3")],
        );
        assert_eq!(
            null_distribution(
                &star,
                NullMetric::Assortativity,
                3,
                0,
                SwapBudget::default()
            ),
            Err(NullModelError::MetricUndefined { sample: 0 })
        );
    }

    #[test]
    fn null_distribution_is_deterministic() {
        let g = synth_scatter(30, 10, DegreeLaw::HeavyTail { exponent: 2.0 }, 5).unwrap();
        let a = null_distribution(&g, NullMetric::C4, 10, 9, SwapBudget::default()).unwrap();
        let b = null_distribution(&g, NullMetric::C4, 10, 9, SwapBudget::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 10);
    }

    #[test]
    fn synth_examples() {
        let star = synth_scatter(1, 5, DegreeLaw::Uniform, 1).unwrap();
        assert_eq!(star.page_count(), 1);
        assert!(star.degree_of(star.pages()[0]) >= 1);
        assert_eq!(
            star.connected_components()
                .sizes
                .iter()
                .filter(|&&s| s > 1)
                .count(),
            1
        );

        let a = synth_scatter(40, 10, DegreeLaw::Uniform, 4).unwrap();
        let b = synth_scatter(40, 10, DegreeLaw::Uniform, 4).unwrap();
        assert_eq!(a, b);

        let h = synth_scatter(300, 50, DegreeLaw::HeavyTail { exponent: 2.0 }, 11).unwrap();
        let d = degree_distribution(&h, NodeKind::Page);
        assert!(d.rows.len() >= 3);
        assert!(d.rows.windows(2).all(|w| w[1].ccdf < w[0].ccdf));

        assert!(synth_scatter(0, 5, DegreeLaw::Uniform, 0).is_err());
        assert!(synth_scatter(5, 5, DegreeLaw::HeavyTail { exponent: -1.0 }, 0).is_err());
    }
}
