//! Page removal experiments: how fact connectivity degrades as documents
//! disappear.
//!
//! Only pages are ever removed. Connectivity is always measured between
//! facts: the "giant" fact group is the largest set of facts that can still
//! reach one another through surviving pages, and counts only if it holds
//! at least two facts.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::graph::BipartiteGraph;
use crate::metrics::{betweenness_within, Endpoints};
use crate::rng::{child_seed, seeded};

pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustnessError {
    #[error("bad fraction grid: {0}")]
    BadFractionGrid(String),
    #[error("random removal needs at least one trial")]
    NoTrials,
    #[error("no page is hosted on site `{0}`")]
    UnknownSite(String),
    #[error("no page carries site metadata")]
    NoSiteMetadata,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovalStrategy {
    Random {
        trials: usize,
    },
    /// Decreasing initial degree, ties by id.
    DegreeTargeted,
    /// Decreasing betweenness, ties by id. `recompute` re-ranks the
    /// surviving pages after every removal.
    BetweennessTargeted {
        recompute: bool,
    },
    /// Pages of one site, in id order. Never removes more than that site's
    /// pages, whatever the fraction.
    SiteTargeted {
        site: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub fraction: f64,
    pub pages_removed: usize,
    /// Mean over trials of the facts in the giant fact group.
    pub giant_fact_count: f64,
    pub giant_fact_std: f64,
    /// Mean number of facts outside the giant fact group.
    pub isolated_facts: f64,
    /// Mean number of fact groups (singletons included).
    pub components: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCurve {
    pub rows: Vec<CurveRow>,
    pub seed: u64,
    pub trials: usize,
    pub fact_count: usize,
}

impl RobustnessCurve {
    /// First fraction at which at least half of all facts are outside the
    /// giant fact group.
    pub fn half_disconnected_fraction(&self) -> Option<f64> {
        let half = self.fact_count as f64 / 2.0;
        self.rows
            .iter()
            .find(|r| r.isolated_facts >= half)
            .map(|r| r.fraction)
    }
}

/// Parses `"0,0.1,0.5"` or `"start:step:stop"` (inclusive of `stop` up to
/// rounding) into a validated grid.
pub fn parse_fraction_grid(spec: &str) -> Result<Vec<f64>, RobustnessError> {
    let bad = |msg: String| RobustnessError::BadFractionGrid(msg);
    let num = |s: &str| -> Result<f64, RobustnessError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{s}` is not a number")))
    };
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("expected start:step:stop, got `{spec}`")));
        }
        let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 {
            return Err(bad(format!("step must be positive, got {step}")));
        }
        let count = libm::floor((stop - start) / step + 1e-9) as i64;
        if count < 0 {
            return Err(bad(format!("stop {stop} is below start {start}")));
        }
        (0..=count)
            .map(|i| {
                let f = start + i as f64 * step;
                // Snap accumulated rounding onto clean decimals.
                libm::round(f * 1e9) / 1e9
            })
            .collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    validate_grid(&grid)?;
    Ok(grid)
}

pub fn validate_grid(fractions: &[f64]) -> Result<(), RobustnessError> {
    if fractions.is_empty() {
        return Err(RobustnessError::BadFractionGrid("empty grid".into()));
    }
    for &f in fractions {
        if !(0.0..=1.0).contains(&f) {
            return Err(RobustnessError::BadFractionGrid(format!(
                "{f} is outside [0, 1]"
            )));
        }
    }
    if fractions.windows(2).any(|w| w[1] < w[0]) {
        return Err(RobustnessError::BadFractionGrid(
            "fractions must be ascending".into(),
        ));
    }
    Ok(())
}

/// `floor(f * m)`, tolerant of products like `(1/3) * 3`.
fn removal_count(fraction: f64, pages: usize) -> usize {
    libm::floor(fraction * pages as f64 + 1e-9) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snapshot {
    pub giant: usize,
    pub groups: usize,
}

/// Fact connectivity with `removed` pages gone.
pub fn measure(g: &BipartiteGraph, page_alive: &[bool]) -> Snapshot {
    let groups = g.fact_groups_with(page_alive);
    let giant = groups
        .iter()
        .map(Vec::len)
        .filter(|&s| s >= 2)
        .max()
        .unwrap_or(0);
    Snapshot {
        giant,
        groups: groups.len(),
    }
}

/// Order in which `strategy` removes pages. Random uses `seed` directly.
pub fn removal_order(
    g: &BipartiteGraph,
    strategy: &RemovalStrategy,
    seed: u64,
) -> Result<Vec<usize>, RobustnessError> {
    let mut pages = g.pages().to_vec();
    match strategy {
        RemovalStrategy::Random { .. } => {
            pages.shuffle(&mut seeded(seed));
            Ok(pages)
        }
        RemovalStrategy::DegreeTargeted => {
            // Stable sort keeps id order among equal degrees.
            pages.sort_by_key(|&p| core::cmp::Reverse(g.degree_of(p)));
            Ok(pages)
        }
        RemovalStrategy::BetweennessTargeted { recompute: false } => {
            let scores = betweenness_within(g, &vec![true; g.node_count()], Endpoints::All);
            pages.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
            Ok(pages)
        }
        RemovalStrategy::BetweennessTargeted { recompute: true } => {
            let mut alive = vec![true; g.node_count()];
            let mut order = Vec::with_capacity(pages.len());
            while order.len() < pages.len() {
                let scores = betweenness_within(g, &alive, Endpoints::All);
                let next = pages
                    .iter()
                    .copied()
                    .filter(|&p| alive[p])
                    .fold(None, |best: Option<usize>, p| match best {
                        Some(b) if scores[b] >= scores[p] => Some(b),
                        _ => Some(p),
                    })
                    .expect("a live page remains");
                alive[next] = false;
                order.push(next);
            }
            Ok(order)
        }
        RemovalStrategy::SiteTargeted { site } => {
            pages.retain(|&p| g.meta(p).site.as_deref() == Some(site.as_str()));
            if pages.is_empty() {
                return Err(RobustnessError::UnknownSite(site.clone()));
            }
            Ok(pages)
        }
    }
}

/// Snapshot after each prefix length in `counts` (ascending) of `order`.
fn sweep(g: &BipartiteGraph, order: &[usize], counts: &[usize]) -> Vec<Snapshot> {
    let mut alive = vec![true; g.node_count()];
    let mut removed = 0;
    counts
        .iter()
        .map(|&k| {
            while removed < k.min(order.len()) {
                alive[order[removed]] = false;
                removed += 1;
            }
            measure(g, &alive)
        })
        .collect()
}

/// Removes `floor(f * m)` pages for every `f` in `fractions` and records
/// fact connectivity of the survivors.
pub fn remove_and_measure(
    g: &BipartiteGraph,
    strategy: &RemovalStrategy,
    fractions: &[f64],
    seed: u64,
) -> Result<RobustnessCurve, RobustnessError> {
    validate_grid(fractions)?;
    let m = g.page_count();
    let counts: Vec<usize> = fractions.iter().map(|&f| removal_count(f, m)).collect();

    let runs: Vec<(Vec<usize>, Vec<Snapshot>)> = match strategy {
        RemovalStrategy::Random { trials } => {
            if *trials == 0 {
                return Err(RobustnessError::NoTrials);
            }
            (0..*trials)
                .map(|t| {
                    let order = removal_order(g, strategy, child_seed(seed, t as u64))?;
                    let snaps = sweep(g, &order, &counts);
                    Ok((order, snaps))
                })
                .collect::<Result<_, RobustnessError>>()?
        }
        _ => {
            let order = removal_order(g, strategy, seed)?;
            let snaps = sweep(g, &order, &counts);
            vec![(order, snaps)]
        }
    };

    let trials = runs.len();
    let n = g.fact_count() as f64;
    let rows = fractions
        .iter()
        .enumerate()
        .map(|(i, &fraction)| {
            let giants: Vec<f64> = runs.iter().map(|(_, s)| s[i].giant as f64).collect();
            let mean = giants.iter().sum::<f64>() / trials as f64;
            let var = if trials > 1 {
                giants.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials - 1) as f64
            } else {
                0.0
            };
            let groups = runs.iter().map(|(_, s)| s[i].groups as f64).sum::<f64>() / trials as f64;
            CurveRow {
                fraction,
                pages_removed: counts[i].min(runs[0].0.len()),
                giant_fact_count: mean,
                giant_fact_std: libm::sqrt(var),
                isolated_facts: n - mean,
                components: groups,
            }
        })
        .collect();
    Ok(RobustnessCurve {
        rows,
        seed,
        trials,
        fact_count: g.fact_count(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteRow {
    pub site: String,
    pub pages_removed: usize,
    /// Facts of the intact giant fact group that fall out of the giant
    /// group once the site is down.
    pub facts_disconnected: usize,
    /// Facts with no surviving containing page.
    pub facts_lost_entirely: usize,
    pub lost_facts: Vec<usize>,
}

/// One row per distinct site: what happens when all its pages go down.
pub fn site_removal_report(g: &BipartiteGraph) -> Result<Vec<SiteRow>, RobustnessError> {
    let sites: BTreeSet<&str> = g
        .pages()
        .iter()
        .filter_map(|&p| g.meta(p).site.as_deref())
        .collect();
    if sites.is_empty() {
        return Err(RobustnessError::NoSiteMetadata);
    }
    let all_alive = vec![true; g.node_count()];
    let before = giant_members(g, &all_alive);

    Ok(sites
        .into_iter()
        .map(|site| {
            let mut alive = all_alive.clone();
            let mut pages_removed = 0;
            for &p in g.pages() {
                if g.meta(p).site.as_deref() == Some(site) {
                    alive[p] = false;
                    pages_removed += 1;
                }
            }
            let after = giant_members(g, &alive);
            let lost_facts: Vec<usize> = g
                .facts()
                .iter()
                .copied()
                .filter(|&f| g.degree_of(f) > 0 && g.neighbors(f).iter().all(|&p| !alive[p]))
                .collect();
            SiteRow {
                site: String::from(site),
                pages_removed,
                facts_disconnected: before.difference(&after).count(),
                facts_lost_entirely: lost_facts.len(),
                lost_facts,
            }
        })
        .collect())
}

fn giant_members(g: &BipartiteGraph, alive: &[bool]) -> BTreeSet<usize> {
    g.fact_groups_with(alive)
        .into_iter()
        .filter(|grp| grp.len() >= 2)
        .fold(None, |best: Option<Vec<usize>>, grp| match best {
            Some(b) if b.len() >= grp.len() => Some(b),
            _ => Some(grp),
        })
        .map(|grp| grp.into_iter().collect())
        .unwrap_or_default()
}
