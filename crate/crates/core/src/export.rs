//! Text, Graphviz and JSON renderings of an [`Lts`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lts::Lts;
use crate::numeric::Rate;
use crate::semantics::{NodeKind, TransitionLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeLabels {
    Id,
    Expression,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportOptions {
    pub node_labels: NodeLabels,
    pub include_stats: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            node_labels: NodeLabels::Both,
            include_stats: true,
        }
    }
}

/// One line per node (`#<id> [<kind>] <expr>`), then one per edge
/// (`#<src> -<label>-> #<dst>`), then an optional stats block.
pub fn to_text(lts: &Lts, opts: &ExportOptions) -> String {
    let mut out = String::new();
    for node in &lts.nodes {
        match opts.node_labels {
            NodeLabels::Id => writeln!(out, "#{} [{}]", node.id, node.kind),
            _ => writeln!(out, "#{} [{}] {}", node.id, node.kind, node.key),
        }
        .unwrap();
    }
    for edge in &lts.edges {
        writeln!(out, "#{} -{}-> #{}", edge.source, edge.label, edge.target).unwrap();
    }
    if opts.include_stats {
        let stats = lts.stats();
        writeln!(out, "# nodes: {}", stats.node_count).unwrap();
        writeln!(out, "# edges: {}", stats.edge_count).unwrap();
        writeln!(out, "# deadlocks: {}", stats.deadlock_count).unwrap();
        writeln!(out, "# successes: {}", stats.success_count).unwrap();
        writeln!(out, "# truncated: {}", stats.truncated).unwrap();
    }
    out
}

fn fill_color(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Deadlock => "red",
        NodeKind::Success => "green",
        _ => "white",
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Graphviz digraph; deadlocks are filled red, successes green, the root is
/// drawn with a thicker border.
pub fn to_dot(lts: &Lts, opts: &ExportOptions) -> String {
    let mut out = String::from("digraph G {\n");
    for node in &lts.nodes {
        let label = match opts.node_labels {
            NodeLabels::Id => node.id.to_string(),
            NodeLabels::Expression => node.key.to_string(),
            NodeLabels::Both => format!("{}: {}", node.id, node.key),
        };
        write!(
            out,
            "  n{} [label=\"{}\", style=filled, fillcolor=\"{}\"",
            node.id,
            escape(&label),
            fill_color(node.kind)
        )
        .unwrap();
        if node.id == Lts::ROOT {
            out.push_str(", penwidth=2");
        }
        out.push_str("];\n");
    }
    for edge in &lts.edges {
        writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"];",
            edge.source,
            edge.target,
            escape(&edge.label.to_string())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// JSON document mirroring the graph. Field order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonLts {
    pub root: usize,
    pub truncated: bool,
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<JsonEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonNode {
    pub id: usize,
    pub kind: String,
    pub expr: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub src: usize,
    pub dst: usize,
    pub label: JsonLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum JsonLabel {
    Nd { path: String },
    Prob { p: f64 },
    Action { name: String, rate: JsonRate },
}

/// A finite rate is a number, the passive rate is the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonRate {
    Finite(f64),
    Infinite(String),
}

impl From<&TransitionLabel> for JsonLabel {
    fn from(label: &TransitionLabel) -> Self {
        match label {
            TransitionLabel::NdBranch(path) => JsonLabel::Nd { path: path.clone() },
            TransitionLabel::Prob(p) => JsonLabel::Prob { p: p.to_f64() },
            TransitionLabel::Action(name, rate) => JsonLabel::Action {
                name: name.to_string(),
                rate: match rate {
                    Rate::Finite(v) => JsonRate::Finite(*v),
                    Rate::Infinite => JsonRate::Infinite("inf".to_string()),
                },
            },
        }
    }
}

impl From<&Lts> for JsonLts {
    fn from(lts: &Lts) -> Self {
        JsonLts {
            root: Lts::ROOT,
            truncated: lts.truncated,
            nodes: lts
                .nodes
                .iter()
                .map(|n| JsonNode {
                    id: n.id,
                    kind: n.kind.to_string(),
                    expr: n.key.to_string(),
                })
                .collect(),
            edges: lts
                .edges
                .iter()
                .map(|e| JsonEdge {
                    src: e.source,
                    dst: e.target,
                    label: JsonLabel::from(&e.label),
                })
                .collect(),
        }
    }
}

pub fn to_json(lts: &Lts) -> String {
    serde_json::to_string(&JsonLts::from(lts)).expect("LTS serializes to JSON")
}
