//! GraphML and DOT export for external layout and drawing tools.

use std::fmt::Write as _;

use scatter_core::community::Partition;
use scatter_core::surfer::HyperlinkOverlay;
use scatter_core::BipartiteGraph;

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GraphML document. Containment edges use the undirected default;
/// hyperlinks are marked `directed="true"` with `edge_type=hyperlink`.
pub fn export_graphml(
    g: &BipartiteGraph,
    overlay: Option<&HyperlinkOverlay>,
    communities: Option<&Partition>,
) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    for key in ["kind", "label", "topic", "site"] {
        let _ = writeln!(
            out,
            "  <key id=\"{key}\" for=\"node\" attr.name=\"{key}\" attr.type=\"string\"/>"
        );
    }
    if communities.is_some() {
        out.push_str(
            "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n",
        );
    }
    out.push_str(
        "  <key id=\"edge_type\" for=\"edge\" attr.name=\"edge_type\" attr.type=\"string\"/>\n",
    );
    out.push_str("  <graph id=\"scatter\" edgedefault=\"undirected\">\n");
    for v in 0..g.node_count() {
        let meta = g.meta(v);
        let _ = write!(out, "    <node id=\"{}\">", xml_escape(g.id(v).as_str()));
        let _ = write!(out, "<data key=\"kind\">{}</data>", g.kind(v));
        let _ = write!(
            out,
            "<data key=\"label\">{}</data>",
            xml_escape(&meta.label)
        );
        if let Some(topic) = &meta.topic {
            let _ = write!(out, "<data key=\"topic\">{}</data>", xml_escape(topic));
        }
        if let Some(site) = &meta.site {
            let _ = write!(out, "<data key=\"site\">{}</data>", xml_escape(site));
        }
        if let Some(p) = communities {
            let _ = write!(out, "<data key=\"community\">{}</data>", p.community[v]);
        }
        out.push_str("</node>\n");
    }
    for (i, &(p, f)) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\"><data key=\"edge_type\">containment</data></edge>",
            xml_escape(g.id(p).as_str()),
            xml_escape(g.id(f).as_str()),
        );
    }
    if let Some(o) = overlay {
        for (i, &(s, d)) in o.links().iter().enumerate() {
            let _ = writeln!(
                out,
                "    <edge id=\"h{i}\" source=\"{}\" target=\"{}\" directed=\"true\"><data key=\"edge_type\">hyperlink</data></edge>",
                xml_escape(g.id(s).as_str()),
                xml_escape(g.id(d).as_str()),
            );
        }
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// DOT text. Without an overlay this is an undirected `graph`; with one it
/// is a `digraph` whose containment edges carry `dir=none`.
pub fn export_dot(
    g: &BipartiteGraph,
    overlay: Option<&HyperlinkOverlay>,
    communities: Option<&Partition>,
) -> String {
    let directed = overlay.is_some();
    let (kw, arrow) = if directed {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{kw} scatter {{");
    for v in 0..g.node_count() {
        let meta = g.meta(v);
        let shape = match g.kind(v) {
            scatter_core::NodeKind::Page => "box",
            scatter_core::NodeKind::Fact => "ellipse",
        };
        let mut attrs = vec![
            format!("kind={}", dot_quote(g.kind(v).as_str())),
            format!("label={}", dot_quote(&meta.label)),
            format!("shape={shape}"),
        ];
        if let Some(topic) = &meta.topic {
            attrs.push(format!("topic={}", dot_quote(topic)));
        }
        if let Some(site) = &meta.site {
            attrs.push(format!("site={}", dot_quote(site)));
        }
        if let Some(p) = communities {
            attrs.push(format!("community={}", p.community[v]));
        }
        let _ = writeln!(
            out,
            "  {} [{}];",
            dot_quote(g.id(v).as_str()),
            attrs.join(", ")
        );
    }
    for &(p, f) in g.edges() {
        let extra = if directed { ", dir=none" } else { "" };
        let _ = writeln!(
            out,
            "  {} {arrow} {} [edge_type=\"containment\"{extra}];",
            dot_quote(g.id(p).as_str()),
            dot_quote(g.id(f).as_str()),
        );
    }
    if let Some(o) = overlay {
        for &(s, d) in o.links() {
            let _ = writeln!(
                out,
                "  {} -> {} [edge_type=\"hyperlink\"];",
                dot_quote(g.id(s).as_str()),
                dot_quote(g.id(d).as_str()),
            );
        }
    }
    out.push_str("}\n");
    out
}
