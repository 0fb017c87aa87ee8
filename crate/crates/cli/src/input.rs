//! The JSON envelope, file loading and the short point syntax.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, Result};
use primtop_core::digraph::{DirectedGraph, GraphRepr};
use primtop_core::kgraph::KGraphSkeleton;
use primtop_core::lattice::{parse_rational, Rat};
use primtop_core::sgds::{Sgds, SgdsRepr};
use primtop_core::transform::{ActionRepr, FiniteAction};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// An input that could not be read, parsed or validated; exits with code 2.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

pub fn parse_error(msg: impl fmt::Display) -> anyhow::Error {
    anyhow!(ParseError(msg.to_string()))
}

/// Every input file names its kind in a `"type"` field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Envelope {
    Graph(GraphRepr),
    Kgraph(KGraphSkeleton),
    Sgds(SgdsRepr),
    Action(ActionRepr),
}

impl Envelope {
    pub fn kind(&self) -> &'static str {
        match self {
            Envelope::Graph(_) => "graph",
            Envelope::Kgraph(_) => "kgraph",
            Envelope::Sgds(_) => "sgds",
            Envelope::Action(_) => "action",
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_error(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

pub fn read_envelope(path: &Path) -> Result<Envelope> {
    read_json(path)
}

fn wrong_kind(path: &Path, want: &str, got: &Envelope) -> anyhow::Error {
    parse_error(format!("{}: expected a {want} input, found {}", path.display(), got.kind()))
}

pub fn load_graph(path: &Path) -> Result<DirectedGraph> {
    match read_envelope(path)? {
        Envelope::Graph(r) => DirectedGraph::from_repr(r).map_err(|e| parse_error(format!("{}: {e}", path.display()))),
        other => Err(wrong_kind(path, "graph", &other)),
    }
}

/// The skeleton, unvalidated; commands decide how to treat factorization
/// errors.
pub fn load_skeleton(path: &Path) -> Result<KGraphSkeleton> {
    match read_envelope(path)? {
        Envelope::Kgraph(sk) => Ok(sk),
        other => Err(wrong_kind(path, "kgraph", &other)),
    }
}

pub fn load_sgds(path: &Path) -> Result<Sgds> {
    match read_envelope(path)? {
        Envelope::Sgds(r) => Sgds::from_repr(&r).map_err(|e| parse_error(format!("{}: {e}", path.display()))),
        other => Err(wrong_kind(path, "sgds", &other)),
    }
}

pub fn load_action(path: &Path) -> Result<FiniteAction> {
    match read_envelope(path)? {
        Envelope::Action(r) => FiniteAction::from_repr(&r).map_err(|e| parse_error(format!("{}: {e}", path.display()))),
        other => Err(wrong_kind(path, "action", &other)),
    }
}

/// A comma-separated list of nonnegative integers, or a single value
/// repeated `k` times.
pub fn parse_degree(s: &str, k: usize) -> Result<Vec<u32>> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| parse_error(format!("bad degree {s:?}"))))
        .collect::<Result<_>>()?;
    match parts.len() {
        1 => Ok(vec![parts[0]; k]),
        n if n == k => Ok(parts),
        n => Err(parse_error(format!("degree {s:?} has {n} entries, expected {k}"))),
    }
}

/// A degree bound: every entry must be positive.
pub fn parse_bound(s: &str, k: usize) -> Result<Vec<u32>> {
    let d = parse_degree(s, k)?;
    if d.contains(&0) {
        return Err(parse_error(format!("bound {s:?} must be positive")));
    }
    Ok(d)
}

pub fn parse_eps(s: &str) -> Result<Rat> {
    let r = parse_rational(s).map_err(parse_error)?;
    if r <= Rat::from_integer(0) {
        return Err(parse_error(format!("eps must be positive, got {s}")));
    }
    Ok(r)
}

/// Splits `"a,b,c"` into names, dropping blanks.
pub fn names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect()
}
