//! The `scatter` command line.
//!
//! Exit status: 0 on success, 2 on usage errors, 1 on data errors
//! (unreadable or invalid input files, analyses that are undefined on the
//! given data).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scatter_core::community::{greedy_modularity, Partition};
use scatter_core::metrics::{
    betweenness, bipartite_assortativity, clustering_c4, degree_betweenness_correlation,
    degree_distribution, Endpoints,
};
use scatter_core::null_model::{
    null_distribution, randomize_degree_preserving, synth_scatter, DegreeLaw, NullMetric,
    NullSummary, SwapBudget,
};
use scatter_core::proximity::{cfec, set_proximity};
use scatter_core::robustness::{
    parse_fraction_grid, remove_and_measure, site_removal_report, RemovalStrategy,
};
use scatter_core::surfer::{pages_with_facts, simulate, synth_overlay, Policy};
use scatter_core::{BipartiteGraph, NodeKind};

use crate::export::{export_dot, export_graphml};
use crate::load::{load, Dataset};
use crate::report::{num, opt_num, Report, Table};
use crate::tsv;

#[derive(Debug, Parser)]
#[command(
    name = "scatter",
    version,
    about = "Structural analysis of fact/document scatter networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Node declarations (id, kind, label, topic, site).
    #[arg(long)]
    pub nodes: PathBuf,
    /// Page-to-fact containment edges.
    #[arg(long)]
    pub scatter: PathBuf,
    /// Directed page-to-page hyperlinks.
    #[arg(long)]
    pub hyperlinks: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NullArgs {
    /// Degree-preserving randomizations for the null model; 0 disables it.
    #[arg(long, default_value_t = 200)]
    pub null_samples: usize,
    /// Swap proposals per edge in each randomization.
    #[arg(long, default_value_t = 10.0)]
    pub swap_factor: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Page,
    Fact,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Page,
    Fact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EndpointsArg {
    All,
    Facts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Random,
    Degree,
    Betweenness,
    Site,
    /// One row per site: the effect of that site going down.
    Sites,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Random,
    Smart,
    SmartGreedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Graphml,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Uniform,
    Heavytail,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Headline counts: pages, facts, edges, components, isolated facts.
    Stats {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
    },
    /// Degree histograms with complementary cumulative fractions.
    Degrees {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "both")]
        kind: KindArg,
    },
    /// Page-degree / fact-degree correlation across edges.
    Assort {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        null: NullArgs,
    },
    /// Four-cycle clustering coefficient.
    Cluster {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        null: NullArgs,
    },
    /// Shortest-path betweenness of every node.
    Between {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "all")]
        endpoints: EndpointsArg,
    },
    /// Connected components and fact groups.
    Components {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
    },
    /// Cycle-free effective conductance between nodes or node sets.
    Proximity {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, requires = "target")]
        source: Option<String>,
        #[arg(long, requires = "source")]
        target: Option<String>,
        /// Comma-separated ids of the first set.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["source", "topic_a"])]
        set_a: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', conflicts_with = "topic_b")]
        set_b: Option<Vec<String>>,
        /// All facts with this topic form the first set.
        #[arg(long, conflicts_with = "source")]
        topic_a: Option<String>,
        /// All facts with this topic form the second set; defaults to every fact.
        #[arg(long)]
        topic_b: Option<String>,
        #[arg(long, default_value_t = scatter_core::proximity::DEFAULT_MAX_PATH_LEN)]
        max_path_len: usize,
    },
    /// Greedy modularity communities.
    Communities {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
    },
    /// Weighted one-mode projection.
    Project {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "fact")]
        side: SideArg,
    },
    /// Writes a degree-preserving randomization as a scatter file.
    Randomize {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        swap_factor: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fact connectivity as pages are removed.
    Robustness {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "random")]
        strategy: StrategyArg,
        /// Site to take down with `--strategy site`.
        #[arg(long)]
        site: Option<String>,
        /// Re-rank by betweenness after every removal.
        #[arg(long)]
        recompute: bool,
        /// Comma list or start:step:stop.
        #[arg(long, default_value = "0:0.05:1")]
        fractions: String,
        #[arg(long, default_value_t = scatter_core::robustness::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Facts discovered while navigating hyperlinks.
    Surf {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "smart")]
        policy: PolicyArg,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// File with one page id per line, or `all-with-facts`.
        #[arg(long, default_value = "all-with-facts")]
        matching: String,
    },
    /// GraphML or DOT for external drawing tools.
    Export {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "graphml")]
        to: ExportFormat,
        /// Attach greedy modularity communities as a node attribute.
        #[arg(long)]
        communities: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generates a synthetic scatter network into a directory.
    Synth {
        #[arg(long)]
        pages: usize,
        #[arg(long)]
        facts: usize,
        #[arg(long, value_enum, default_value = "heavytail")]
        law: LawArg,
        #[arg(long, default_value_t = 2.0)]
        exponent: f64,
        /// Also write hyperlinks.tsv, linking page pairs with this probability.
        #[arg(long)]
        link_prob: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            2
        }
        Err(CliError::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn read_inputs(inputs: &Inputs) -> CliResult<Dataset> {
    Ok(load(
        &inputs.nodes,
        &inputs.scatter,
        inputs.hyperlinks.as_deref(),
    )?)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Data(e.to_string())),
    }
}

fn emit_report(report: &Report, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, output.out.as_deref(), stdout)
}

fn null_value(s: &NullSummary) -> Value {
    json!({
        "observed": num(s.observed),
        "mean": num(s.mean),
        "std": num(s.std),
        "z": num(s.z),
        "p": num(s.p),
        "empirical_upper": num(s.empirical_upper),
        "samples": s.samples,
        "seed": s.seed,
        "swap_factor": num(s.swap_factor),
    })
}

fn swap_budget(factor: f64) -> CliResult<SwapBudget> {
    SwapBudget::new(factor).map_err(|e| CliError::Usage(e.to_string()))
}

fn node_set(g: &BipartiteGraph, ids: &[String]) -> CliResult<Vec<usize>> {
    ids.iter()
        .map(|id| {
            g.index_of(id.trim())
                .ok_or_else(|| CliError::Data(format!("unknown node `{}`", id.trim())))
        })
        .collect()
}

fn facts_with_topic(g: &BipartiteGraph, topic: &str) -> CliResult<Vec<usize>> {
    let set: Vec<usize> = g
        .facts()
        .iter()
        .copied()
        .filter(|&f| g.meta(f).topic.as_deref() == Some(topic))
        .collect();
    if set.is_empty() {
        return Err(CliError::Data(format!("no fact has topic `{topic}`")));
    }
    Ok(set)
}

fn partition_tables(g: &BipartiteGraph, p: &Partition, report: &mut Report) {
    let mut t = Table::new("communities", &["node_id", "community_id"]);
    for v in 0..g.node_count() {
        t.push(vec![json!(g.id(v).as_str()), json!(p.community[v])]);
    }
    report.tables.push(t);
    let mut h = Table::new("merge_history", &["a", "b", "delta_q"]);
    for m in &p.merge_history {
        h.push(vec![
            json!(g.id(m.a).as_str()),
            json!(g.id(m.b).as_str()),
            num(m.delta_q),
        ]);
    }
    report.tables.push(h);
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Stats { inputs, output } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let comps = g.connected_components();
            let groups = g.fact_connectivity();
            let mut r = Report::new("stats", data.inputs.clone(), None);
            r.result("pages", g.page_count())
                .result("facts", g.fact_count())
                .result("edges", g.edge_count())
                .result("components", comps.count())
                .result(
                    "giant_component_size",
                    comps.giant.map_or(0, |c| comps.sizes[c]),
                )
                .result("fact_groups", groups.len())
                .result(
                    "isolated_facts",
                    g.facts().iter().filter(|&&f| g.degree_of(f) == 0).count(),
                );
            if let Some(o) = &data.overlay {
                r.result("hyperlinks", o.len());
            }
            emit_report(&r, &output, stdout)
        }

        Command::Degrees {
            inputs,
            output,
            kind,
        } => {
            let data = read_inputs(&inputs)?;
            let kinds: &[NodeKind] = match kind {
                KindArg::Page => &[NodeKind::Page],
                KindArg::Fact => &[NodeKind::Fact],
                KindArg::Both => &[NodeKind::Page, NodeKind::Fact],
            };
            let mut r = Report::new("degrees", data.inputs.clone(), None);
            for &k in kinds {
                let d = degree_distribution(&data.graph, k);
                let mut t = Table::new(&format!("{k}_degrees"), &["degree", "count", "ccdf"]);
                for row in d.rows {
                    t.push(vec![json!(row.degree), json!(row.count), num(row.ccdf)]);
                }
                r.tables.push(t);
            }
            emit_report(&r, &output, stdout)
        }

        Command::Assort {
            inputs,
            output,
            null,
        } => {
            let data = read_inputs(&inputs)?;
            let report = bipartite_assortativity(&data.graph)?;
            let mut r = Report::new("assort", data.inputs.clone(), Some(null.seed));
            r.result("r", opt_num(report.r))
                .result("n_edges", report.n_edges);
            r.param("null_samples", null.null_samples)
                .param("swap_factor", num(null.swap_factor));
            if null.null_samples > 0 && report.r.is_some() {
                let s = null_distribution(
                    &data.graph,
                    NullMetric::Assortativity,
                    null.null_samples,
                    null.seed,
                    swap_budget(null.swap_factor)?,
                )?;
                r.result("null", null_value(&s));
            }
            emit_report(&r, &output, stdout)
        }

        Command::Cluster {
            inputs,
            output,
            null,
        } => {
            let data = read_inputs(&inputs)?;
            let c = clustering_c4(&data.graph);
            let mut r = Report::new("cluster", data.inputs.clone(), Some(null.seed));
            r.result("cycles4", c.cycles4)
                .result("quadruples", c.quadruples)
                .result("c4", num(c.c4));
            r.param("null_samples", null.null_samples)
                .param("swap_factor", num(null.swap_factor));
            if null.null_samples > 0 {
                let s = null_distribution(
                    &data.graph,
                    NullMetric::C4,
                    null.null_samples,
                    null.seed,
                    swap_budget(null.swap_factor)?,
                )?;
                r.result("null", null_value(&s));
            }
            emit_report(&r, &output, stdout)
        }

        Command::Between {
            inputs,
            output,
            endpoints,
        } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let ep = match endpoints {
                EndpointsArg::All => Endpoints::All,
                EndpointsArg::Facts => Endpoints::FactsOnly,
            };
            let scores = betweenness(g, ep);
            let mut r = Report::new("between", data.inputs.clone(), None);
            r.param(
                "endpoints",
                if ep == Endpoints::All { "all" } else { "facts" },
            );
            r.result(
                "degree_betweenness_r",
                opt_num(degree_betweenness_correlation(g).ok()),
            );
            let mut t = Table::new("betweenness", &["node_id", "kind", "degree", "betweenness"]);
            for v in 0..g.node_count() {
                t.push(vec![
                    json!(g.id(v).as_str()),
                    json!(g.kind(v).as_str()),
                    json!(g.degree_of(v)),
                    num(scores.scores[v]),
                ]);
            }
            r.tables.push(t);
            emit_report(&r, &output, stdout)
        }

        Command::Components { inputs, output } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let c = g.connected_components();
            let groups = g.fact_connectivity();
            let mut r = Report::new("components", data.inputs.clone(), None);
            r.result("count", c.count())
                .result("sizes", c.sizes.clone())
                .result("giant", c.giant)
                .result("fact_groups", groups.len())
                .result(
                    "fact_group_sizes",
                    groups.iter().map(Vec::len).collect::<Vec<_>>(),
                );
            let mut t = Table::new("components", &["node_id", "kind", "component_id"]);
            for v in 0..g.node_count() {
                t.push(vec![
                    json!(g.id(v).as_str()),
                    json!(g.kind(v).as_str()),
                    json!(c.component[v]),
                ]);
            }
            r.tables.push(t);
            emit_report(&r, &output, stdout)
        }

        Command::Proximity {
            inputs,
            output,
            source,
            target,
            set_a,
            set_b,
            topic_a,
            topic_b,
            max_path_len,
        } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let mut r = Report::new("proximity", data.inputs.clone(), None);
            r.param("max_path_len", max_path_len);
            if let (Some(s), Some(t)) = (&source, &target) {
                let p = cfec(g, s, t, max_path_len)?;
                r.param("source", s.as_str()).param("target", t.as_str());
                r.result("cfec", num(p.value))
                    .result("paths_found", p.paths_found)
                    .result("truncated", p.truncated);
            } else {
                let a = match (&set_a, &topic_a) {
                    (Some(ids), _) => node_set(g, ids)?,
                    (None, Some(topic)) => facts_with_topic(g, topic)?,
                    (None, None) => {
                        return Err(CliError::Usage(
                            "give --source/--target, --set-a or --topic-a".into(),
                        ))
                    }
                };
                let b = match (&set_b, &topic_b) {
                    (Some(ids), _) => node_set(g, ids)?,
                    (None, Some(topic)) => facts_with_topic(g, topic)?,
                    (None, None) => g.facts().to_vec(),
                };
                let s = set_proximity(g, &a, &b, max_path_len)?;
                r.param("set_a_size", a.len()).param("set_b_size", b.len());
                if let Some(t) = &topic_a {
                    r.param("topic_a", t.as_str());
                }
                if let Some(t) = &topic_b {
                    r.param("topic_b", t.as_str());
                }
                r.result("mean_cfec", num(s.mean))
                    .result("pairs", s.pairs)
                    .result("truncated", s.truncated);
            }
            emit_report(&r, &output, stdout)
        }

        Command::Communities { inputs, output } => {
            let data = read_inputs(&inputs)?;
            let p = greedy_modularity(&data.graph)?;
            let mut r = Report::new("communities", data.inputs.clone(), None);
            r.result("modularity", num(p.modularity))
                .result("count", p.count());
            partition_tables(&data.graph, &p, &mut r);
            emit_report(&r, &output, stdout)
        }

        Command::Project {
            inputs,
            output,
            side,
        } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let side = match side {
                SideArg::Page => NodeKind::Page,
                SideArg::Fact => NodeKind::Fact,
            };
            let proj = g.one_mode_projection(side);
            let mut r = Report::new("project", data.inputs.clone(), None);
            r.param("side", side.as_str());
            r.result("nodes", proj.nodes.len())
                .result("edges", proj.edges.len());
            let mut t = Table::new("projection", &["u", "v", "weight"]);
            for &(u, v, w) in &proj.edges {
                t.push(vec![
                    json!(g.id(u).as_str()),
                    json!(g.id(v).as_str()),
                    json!(w),
                ]);
            }
            r.tables.push(t);
            emit_report(&r, &output, stdout)
        }

        Command::Randomize {
            inputs,
            out,
            swap_factor,
            seed,
        } => {
            let data = read_inputs(&inputs)?;
            let rg = randomize_degree_preserving(&data.graph, seed, swap_budget(swap_factor)?)?;
            emit(&tsv::write_scatter(&rg), out.as_deref(), stdout)
        }

        Command::Robustness {
            inputs,
            output,
            strategy,
            site,
            recompute,
            fractions,
            trials,
            seed,
        } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let mut r = Report::new("robustness", data.inputs.clone(), Some(seed));
            if strategy == StrategyArg::Sites {
                r.param("strategy", "sites");
                let mut t = Table::new(
                    "sites",
                    &[
                        "site",
                        "pages_removed",
                        "facts_disconnected",
                        "facts_lost_entirely",
                        "lost_facts",
                    ],
                );
                for row in site_removal_report(g)? {
                    let lost: Vec<&str> =
                        row.lost_facts.iter().map(|&f| g.id(f).as_str()).collect();
                    t.push(vec![
                        json!(row.site),
                        json!(row.pages_removed),
                        json!(row.facts_disconnected),
                        json!(row.facts_lost_entirely),
                        json!(lost.join(" ")),
                    ]);
                }
                r.tables.push(t);
                return emit_report(&r, &output, stdout);
            }
            let grid =
                parse_fraction_grid(&fractions).map_err(|e| CliError::Usage(e.to_string()))?;
            let (strategy, name) = match strategy {
                StrategyArg::Random => (RemovalStrategy::Random { trials }, "random"),
                StrategyArg::Degree => (RemovalStrategy::DegreeTargeted, "degree"),
                StrategyArg::Betweenness => (
                    RemovalStrategy::BetweennessTargeted { recompute },
                    "betweenness",
                ),
                StrategyArg::Site => match site {
                    Some(site) => (RemovalStrategy::SiteTargeted { site }, "site"),
                    None => return Err(CliError::Usage("--strategy site needs --site".into())),
                },
                StrategyArg::Sites => unreachable!("handled above"),
            };
            let curve = remove_and_measure(g, &strategy, &grid, seed)?;
            r.param("strategy", name)
                .param("fractions", fractions.as_str())
                .param("trials", curve.trials);
            if let RemovalStrategy::BetweennessTargeted { recompute } = strategy {
                r.param("recompute", recompute);
            }
            if let RemovalStrategy::SiteTargeted { site } = &strategy {
                r.param("site", site.as_str());
            }
            r.result("facts", curve.fact_count).result(
                "half_disconnected_fraction",
                opt_num(curve.half_disconnected_fraction()),
            );
            let mut t = Table::new(
                "curve",
                &[
                    "fraction_removed",
                    "pages_removed",
                    "giant_fact_count",
                    "giant_fact_std",
                    "isolated_facts",
                    "components",
                ],
            );
            for row in &curve.rows {
                t.push(vec![
                    num(row.fraction),
                    json!(row.pages_removed),
                    num(row.giant_fact_count),
                    num(row.giant_fact_std),
                    num(row.isolated_facts),
                    num(row.components),
                ]);
            }
            r.tables.push(t);
            emit_report(&r, &output, stdout)
        }

        Command::Surf {
            inputs,
            output,
            policy,
            steps,
            trials,
            seed,
            matching,
        } => {
            let data = read_inputs(&inputs)?;
            let g = &data.graph;
            let Some(overlay) = &data.overlay else {
                return Err(CliError::Usage("surf needs --hyperlinks".into()));
            };
            let matching_pages = if matching == "all-with-facts" {
                pages_with_facts(g)
            } else {
                let text = fs::read_to_string(&matching)
                    .map_err(|e| CliError::Data(format!("{matching}: {e}")))?;
                let ids: Vec<String> = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect();
                node_set(g, &ids)?
            };
            let (policy, name) = match policy {
                PolicyArg::Random => (Policy::RandomWalker, "random"),
                PolicyArg::Smart => (Policy::SmartSurfer, "smart"),
                PolicyArg::SmartGreedy => (Policy::SmartSurferGreedy, "smart-greedy"),
            };
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let trace = simulate(g, overlay, policy, &matching_pages, steps, trials, seed)?;
            let mut r = Report::new("surf", data.inputs.clone(), Some(seed));
            r.param("policy", name)
                .param("steps", steps)
                .param("trials", trials)
                .param("matching", matching.as_str())
                .param("jump_consumes_step", true);
            r.result("matching_pages", trace.matching_pages.len());
            let mut t = Table::new("trace", &["step", "mean_facts", "std_facts"]);
            for row in &trace.rows {
                t.push(vec![
                    json!(row.step),
                    num(row.mean_facts),
                    num(row.std_facts),
                ]);
            }
            r.tables.push(t);
            emit_report(&r, &output, stdout)
        }

        Command::Export {
            inputs,
            to,
            communities,
            out,
        } => {
            let data = read_inputs(&inputs)?;
            let partition = if communities {
                Some(greedy_modularity(&data.graph)?)
            } else {
                None
            };
            let text = match to {
                ExportFormat::Graphml => {
                    export_graphml(&data.graph, data.overlay.as_ref(), partition.as_ref())
                }
                ExportFormat::Dot => {
                    export_dot(&data.graph, data.overlay.as_ref(), partition.as_ref())
                }
            };
            emit(&text, out.as_deref(), stdout)
        }

        Command::Synth {
            pages,
            facts,
            law,
            exponent,
            link_prob,
            seed,
            out_dir,
        } => {
            let law = match law {
                LawArg::Uniform => DegreeLaw::Uniform,
                LawArg::Heavytail => DegreeLaw::HeavyTail { exponent },
            };
            let g = synth_scatter(pages, facts, law, seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::Data(format!("{}: {e}", out_dir.display())))?;
            let write = |name: &str, text: String| {
                let path = out_dir.join(name);
                fs::write(&path, text)
                    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
            };
            write("nodes.tsv", tsv::write_nodes(&g))?;
            write("scatter.tsv", tsv::write_scatter(&g))?;
            let mut r = Report::new("synth", vec![], Some(seed));
            r.param("pages", pages).param("facts", facts);
            match law {
                DegreeLaw::Uniform => r.param("law", "uniform"),
                DegreeLaw::HeavyTail { exponent } => {
                    r.param("law", "heavytail").param("exponent", num(exponent))
                }
            };
            if let Some(p) = link_prob {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::Usage(format!(
                        "--link-prob must be in [0, 1], got {p}"
                    )));
                }
                let overlay = synth_overlay(&g, p, scatter_core::rng::child_seed(seed, u64::MAX));
                write("hyperlinks.tsv", tsv::write_hyperlinks(&g, &overlay))?;
                r.param("link_prob", num(p));
                r.result("hyperlinks", overlay.len());
            }
            r.result("edges", g.edge_count());
            stdout
                .write_all(r.to_json().as_bytes())
                .map_err(|e| CliError::Data(e.to_string()))
        }
    }
}
