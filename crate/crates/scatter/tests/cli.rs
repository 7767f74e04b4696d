use std::fs;
use std::path::Path;

use serde_json::Value;
use tempfile::TempDir;

const NODES: &str = "id\tkind\tlabel\ttopic\tsite
P1\tpage\tFirst page\t\tsun.org
P2\tpage\tSecond page\t\tsun.org
P3\tpage\tThird page\t\tskin.net
F1\tfact\tHigh UV\trisk\t
F2\tfact\tShade helps\tprevention\t
F3\tfact\tSPF 30\tprevention\t
F4\tfact\tUnrelated\t\t
";
const SCATTER: &str = "P1\tF1\nP1\tF2\nP2\tF2\nP2\tF3\nP3\tF3\n";
const LINKS: &str = "P1\tP2\nP2\tP3\nP3\tP1\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["scatter"];
    full.extend_from_slice(args);
    let code = scatter::cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        fs::write(dir.path().join("nodes.tsv"), NODES).unwrap();
        fs::write(dir.path().join("scatter.tsv"), SCATTER).unwrap();
        fs::write(dir.path().join("links.tsv"), LINKS).unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }

    fn run(&self, command: &str, extra: &[&str]) -> (i32, String, String) {
        let (nodes, scatter) = (self.path("nodes.tsv"), self.path("scatter.tsv"));
        let mut args = vec![command, "--nodes", &nodes, "--scatter", &scatter];
        args.extend_from_slice(extra);
        run(&args)
    }

    fn json(&self, command: &str, extra: &[&str]) -> Value {
        let (code, out, err) = self.run(command, extra);
        assert_eq!(code, 0, "{command}: {err}");
        serde_json::from_str(&out).unwrap()
    }
}

#[test]
fn stats_reports_headline_counts() {
    let f = Fixture::new();
    let r = f.json("stats", &[]);
    let res = &r["results"];
    assert_eq!(res["pages"], 3);
    assert_eq!(res["facts"], 4);
    assert_eq!(res["edges"], 5);
    assert_eq!(res["components"], 2);
    assert_eq!(res["isolated_facts"], 1);
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn cluster_includes_null_summary_and_seed() {
    let f = Fixture::new();
    let r = f.json("cluster", &["--null-samples", "20", "--seed", "7"]);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["results"]["cycles4"], 0);
    assert!(r["results"]["quadruples"].as_u64().unwrap() > 0);
    for key in ["observed", "mean", "std", "z", "p", "samples"] {
        assert!(r["results"]["null"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn assortativity_matches_hand_value() {
    let f = Fixture::new();
    let r = f.json("assort", &["--null-samples", "0"]);
    assert_eq!(r["results"]["r"], -0.25);
    assert!(r["results"].get("null").is_none());
}

#[test]
fn every_subcommand_runs() {
    let f = Fixture::new();
    let links = f.path("links.tsv");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("degrees", vec![]),
        ("between", vec!["--endpoints", "facts"]),
        ("components", vec![]),
        ("proximity", vec!["--source", "F1", "--target", "F3"]),
        (
            "proximity",
            vec!["--topic-a", "risk", "--topic-b", "prevention"],
        ),
        ("proximity", vec!["--set-a", "F1,F2", "--set-b", "F3"]),
        ("communities", vec![]),
        ("project", vec!["--side", "page"]),
        (
            "robustness",
            vec!["--strategy", "betweenness", "--recompute"],
        ),
        (
            "robustness",
            vec!["--strategy", "site", "--site", "sun.org"],
        ),
        ("robustness", vec!["--strategy", "sites"]),
        (
            "surf",
            vec!["--hyperlinks", &links, "--policy", "random", "--steps", "4"],
        ),
        ("export", vec!["--to", "dot", "--communities"]),
    ];
    for (cmd, extra) in cases {
        for format in ["json", "csv"] {
            if cmd == "export" && format == "csv" {
                continue;
            }
            let mut args = extra.clone();
            if cmd != "export" {
                args.extend(["--format", format]);
            }
            let (code, out, err) = f.run(cmd, &args);
            assert_eq!(code, 0, "{cmd} {args:?}: {err}");
            assert!(!out.is_empty());
        }
    }
}

#[test]
fn proximity_value_is_reported() {
    let f = Fixture::new();
    let r = f.json("proximity", &["--source", "F1", "--target", "F2"]);
    // F1 reaches F2 only through P1, which has degree 2.
    assert_eq!(r["results"]["cfec"], 0.5);
}

#[test]
fn csv_tables_have_comment_headers() {
    let f = Fixture::new();
    let (code, out, _) = f.run(
        "robustness",
        &[
            "--strategy",
            "degree",
            "--fractions",
            "0,0.5,1",
            "--format",
            "csv",
        ],
    );
    assert_eq!(code, 0);
    assert!(out.starts_with("# toolkit=scatter"));
    let table: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        table[0],
        "fraction_removed,pages_removed,giant_fact_count,giant_fact_std,isolated_facts,components"
    );
    assert_eq!(table.len(), 4);
    assert!(table[3].starts_with("1.0,3,0.0,"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn bad_flag_values_are_usage_errors() {
    let f = Fixture::new();
    assert_eq!(f.run("robustness", &["--fractions", "0.5,0.2"]).0, 2);
    assert_eq!(f.run("robustness", &["--strategy", "site"]).0, 2);
    assert_eq!(f.run("between", &["--endpoints", "pages"]).0, 2);
    assert_eq!(f.run("surf", &[]).0, 2);
    assert_eq!(f.run("proximity", &[]).0, 2);
    assert_eq!(run(&["stats"]).0, 2);
}

#[test]
fn undeclared_node_reports_its_line() {
    let f = Fixture::new();
    fs::write(f.dir.path().join("scatter.tsv"), "P1\tF1\nP2\tF9\n").unwrap();
    let (code, out, err) = f.run("stats", &[]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("F9"), "{err}");
}

#[test]
fn malformed_nodes_report_their_line() {
    let f = Fixture::new();
    fs::write(
        f.dir.path().join("nodes.tsv"),
        "id\tkind\tlabel\ttopic\tsite\nP1\tpage\tx\t\t\nF1\tthing\tx\t\t\n",
    )
    .unwrap();
    let (code, _, err) = f.run("stats", &[]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_is_a_data_error() {
    let (code, _, err) = run(&[
        "stats",
        "--nodes",
        "/nonexistent/n.tsv",
        "--scatter",
        "/nonexistent/e.tsv",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/n.tsv"));
}

#[test]
fn undefined_metrics_are_data_errors() {
    let f = Fixture::new();
    fs::write(f.dir.path().join("scatter.tsv"), "").unwrap();
    assert_eq!(f.run("communities", &[]).0, 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let f = Fixture::new();
    let links = f.path("links.tsv");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("assort", vec!["--null-samples", "30", "--seed", "3"]),
        ("robustness", vec!["--trials", "20", "--seed", "5"]),
        (
            "surf",
            vec!["--hyperlinks", &links, "--policy", "random", "--seed", "9"],
        ),
    ];
    for (cmd, args) in cases {
        let a = f.run(cmd, &args);
        let b = f.run(cmd, &args);
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a.1, b.1, "{cmd}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let f = Fixture::new();
    let target = f.path("report.json");
    let (code, out, _) = f.run("components", &["--out", &target]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(written["command"], "components");
}

#[test]
fn randomize_keeps_degrees() {
    let f = Fixture::new();
    let (code, out, _) = f.run("randomize", &["--seed", "1"]);
    assert_eq!(code, 0);
    let degree = |text: &str, id: &str| {
        text.lines()
            .filter(|l| l.split('\t').any(|x| x == id))
            .count()
    };
    for id in ["P1", "P2", "P3", "F1", "F2", "F3"] {
        assert_eq!(degree(&out, id), degree(SCATTER, id), "{id}");
    }
}

#[test]
fn synth_output_loads_back() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("gen");
    let out_dir = out_dir.to_str().unwrap();
    let (code, _, err) = run(&[
        "synth",
        "--pages",
        "25",
        "--facts",
        "10",
        "--link-prob",
        "0.1",
        "--seed",
        "4",
        "--out-dir",
        out_dir,
    ]);
    assert_eq!(code, 0, "{err}");
    let data = scatter::load(
        &Path::new(out_dir).join("nodes.tsv"),
        &Path::new(out_dir).join("scatter.tsv"),
        Some(&Path::new(out_dir).join("hyperlinks.tsv")),
    )
    .unwrap();
    assert_eq!(data.graph.page_count(), 25);
    assert_eq!(data.graph.fact_count(), 10);
    assert!(data.overlay.is_some());
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("robustness"));
}
