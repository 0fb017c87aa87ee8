//! Directed graphs with edge multiplicities, their maximal tails and the
//! primitive ideal space of the graph algebra.
//!
//! An edge `e` runs from `s(e)` to `r(e)`. Paths are read from the range end:
//! `e1 e2 ... en` requires `s(e_i) = r(e_{i+1})`. The preorder `v <= w` holds
//! when there is a directed walk from `v` to `w`.

mod simulate;
mod spectrum;
mod structure;
mod tails;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use simulate::{cylinder_specializes, isolated_in_orbit, BoundaryPath, EdgeCopy};
pub use spectrum::{
    closure, loop_cycle, point_path, prim_spectrum, quasi_orbit_rep, specializes, AperiodicWordSpec, ClosedPrimSet,
    PrimPoint, PrimPointRepr, PrimSpectrum, QuasiOrbitRep,
};
pub use structure::{
    breaking_vertices, components, hereditary_saturated_sets, is_hereditary, is_saturated, primitive_loops, saturate,
    singular_vertices,
};
pub use tails::{maximal_tails, LeastData, Tail};

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(String),
    #[error("edge {0:?} has multiplicity zero")]
    ZeroMultiplicity(String),
    #[error("vertex set is not hereditary")]
    NotHereditary,
    #[error("graph is not row-finite: vertex {0:?} receives infinitely many edges")]
    NotRowFinite(String),
    #[error("graph has sources: vertex {0:?} receives no edges")]
    HasSources(String),
    #[error("too many vertices for exhaustive enumeration ({0})")]
    TooLarge(usize),
    #[error("point is not in the spectrum: {0}")]
    NotInSpectrum(String),
}

/// Edge multiplicity: finitely many parallel copies, or countably many.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    Finite(u32),
    Omega,
}

impl Serialize for Mult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Mult::Finite(n) => s.serialize_u32(*n),
            Mult::Omega => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Mult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Mult::Finite(n)),
            Raw::S(s) if s == "inf" || s == "omega" => Ok(Mult::Omega),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad multiplicity {s:?}"))),
        }
    }
}

/// A cardinality that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    fn add(self, m: Mult) -> Count {
        match (self, m) {
            (Count::Finite(a), Mult::Finite(b)) => Count::Finite(a + b as u64),
            _ => Count::Infinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub range: usize,
    pub mult: Mult,
}

/// A finite directed graph whose edges may carry multiplicity.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
    /// `reach[v][w]` iff `v <= w`.
    reach: Vec<Vec<bool>>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DirectedGraph {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRepr {
    pub name: String,
    pub source: String,
    pub range: String,
    #[serde(default = "one")]
    pub mult: Mult,
}

fn one() -> Mult {
    Mult::Finite(1)
}

/// The JSON form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRepr {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeRepr>,
}

impl DirectedGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<EdgeRepr>) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut names = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            if !names.insert(e.name.clone()) {
                return Err(GraphError::DuplicateEdge(e.name));
            }
            if e.mult == Mult::Finite(0) {
                return Err(GraphError::ZeroMultiplicity(e.name));
            }
            let look = |v: &String| index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex(v.clone()));
            out.push(Edge { source: look(&e.source)?, range: look(&e.range)?, name: e.name, mult: e.mult });
        }
        let reach = reachability(vertices.len(), &out);
        Ok(DirectedGraph { vertices, edges: out, index, reach })
    }

    /// Builds a graph from `(name, source, range, mult)` tuples.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, &str, Mult)]) -> Result<Self, GraphError> {
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|&(n, s, r, m)| EdgeRepr { name: n.into(), source: s.into(), range: r.into(), mult: m })
                .collect(),
        )
    }

    pub fn from_repr(r: GraphRepr) -> Result<Self, GraphError> {
        Self::new(r.vertices, r.edges)
    }

    pub fn to_repr(&self) -> GraphRepr {
        GraphRepr {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRepr {
                    name: e.name.clone(),
                    source: self.vertices[e.source].clone(),
                    range: self.vertices[e.range].clone(),
                    mult: e.mult,
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize, GraphError> {
        self.index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set(&self, names: &[String]) -> Result<VertexSet, GraphError> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    pub fn names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// `v <= w`: a directed walk (possibly empty) runs from `v` to `w`.
    pub fn leq(&self, v: usize, w: usize) -> bool {
        self.reach[v][w]
    }

    /// `{w : w >= v for some v in set}`.
    pub fn up_closure(&self, set: &VertexSet) -> VertexSet {
        (0..self.vertex_count()).filter(|&w| set.iter().any(|&v| self.reach[v][w])).collect()
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.range == v)
    }

    /// Number of edges `e` with `r(e) = v` and `s(e)` accepted by `from`.
    pub fn in_count_from(&self, v: usize, from: impl Fn(usize) -> bool) -> Count {
        self.in_edges(v).filter(|(_, e)| from(e.source)).fold(Count::Finite(0), |c, (_, e)| c.add(e.mult))
    }

    pub fn in_count(&self, v: usize) -> Count {
        self.in_count_from(v, |_| true)
    }

    pub fn is_row_finite(&self) -> bool {
        self.edges.iter().all(|e| e.mult != Mult::Omega)
    }

    /// Fails unless every vertex receives a finite, nonzero number of edges.
    pub fn require_row_finite_no_sources(&self) -> Result<(), GraphError> {
        for v in 0..self.vertex_count() {
            match self.in_count(v) {
                Count::Infinite => return Err(GraphError::NotRowFinite(self.vertices[v].clone())),
                Count::Finite(0) => return Err(GraphError::HasSources(self.vertices[v].clone())),
                Count::Finite(_) => {}
            }
        }
        Ok(())
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.source == v && e.range == v)
    }

    pub fn fmt_set(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }
}

fn reachability(n: usize, edges: &[Edge]) -> Vec<Vec<bool>> {
    let mut out_adj = vec![Vec::new(); n];
    for e in edges {
        out_adj[e.source].push(e.range);
    }
    (0..n)
        .map(|v| {
            let mut seen = vec![false; n];
            seen[v] = true;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &y in &out_adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect()
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {{{}}}", self.vertices.join(","))?;
        for e in &self.edges {
            let m = match e.mult {
                Mult::Finite(n) => n.to_string(),
                Mult::Omega => "inf".into(),
            };
            write!(f, "; {}: {}->{} x{}", e.name, self.vertices[e.source], self.vertices[e.range], m)?;
        }
        Ok(())
    }
}
