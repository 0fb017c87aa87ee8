//! Command results and their JSON, text and DOT renderings.

use std::collections::BTreeSet;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

/// A result in every format the command supports. `ok = false` marks a
/// negative answer (a violation or a failed check) and exits with code 1.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    pub ok: bool,
}

impl Output {
    pub fn new(json: Value, text: String) -> Output {
        Output { json, text, dot: None, ok: true }
    }

    pub fn with_dot(mut self, dot: String) -> Output {
        self.dot = Some(dot);
        self
    }

    pub fn failed(mut self) -> Output {
        self.ok = false;
        self
    }
}

/// A node of an order diagram; fibres are drawn as boxes.
pub struct Node {
    pub label: String,
    pub fiber: bool,
}

/// Strict edges `i -> j` of a preorder given by `leq(i, j)` with the
/// transitive ones removed.
pub fn hasse(n: usize, mut leq: impl FnMut(usize, usize) -> bool) -> BTreeSet<(usize, usize)> {
    let rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && leq(i, j)).collect()).collect();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if rel[i][j] && !(0..n).any(|m| m != i && m != j && rel[i][m] && rel[m][j]) {
                out.insert((i, j));
            }
        }
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for the Hasse diagram, with an arrow from each point to the
/// points in its closure.
pub fn emit_dot(name: &str, nodes: &[Node], edges: &BTreeSet<(usize, usize)>) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=TB;\n", quote(name));
    for (i, n) in nodes.iter().enumerate() {
        let shape = if n.fiber { "box" } else { "ellipse" };
        out.push_str(&format!("  n{i} [label={}, shape={shape}];\n", quote(&n.label)));
    }
    for (i, j) in edges {
        out.push_str(&format!("  n{i} -> n{j};\n"));
    }
    out.push_str("}\n");
    out
}
