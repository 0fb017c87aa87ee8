//! Row-finite higher-rank graphs without sources, presented by a coloured
//! skeleton and its commuting squares.
//!
//! Colours are `1..=k` in the JSON form and `0..k` internally. A path is
//! stored in normal form: read from the range end, its edges are sorted by
//! colour.

mod dset;
mod path;
mod per;
mod spectrum;
mod tails;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Count, DirectedGraph, GraphError, Mult};

pub use dset::{validate_d_set, DSet, DSetReport, DViolation, TorusPiece};
pub use path::{degrees_up_to, paths_with_range, KPath};
pub use per::{m_per, path_equiv, per_subgroup, PerResult, PerStatus, PerWitness};
pub use spectrum::{
    k_converges, k_specializes, kprim_spectrum, KConvergeParams, KConvergence, KPrimComponent, KPrimPoint,
    KSpecialization, KWitness,
};
pub use tails::{ktails, up_closure};

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KGraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} has colour {color}, outside 1..={k}")]
    BadColor { edge: String, color: usize, k: usize },
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
    #[error("vertex {vertex:?} receives no edge of colour {color}")]
    HasSources { vertex: String, color: usize },
    #[error("cube condition fails on {0}")]
    CubeViolation(String),
    #[error("paths are not composable")]
    EndpointMismatch,
    #[error("degree out of range")]
    DegreeOutOfRange,
    #[error("paths have different sources")]
    SourceMismatch,
    #[error("degree bound has a zero coordinate")]
    BoundTooSmall,
    #[error("vertex set is not a maximal tail")]
    NotATail,
    #[error("path leaves the tail")]
    PathOutsideTail,
    #[error("periodicity group did not stabilize within the bound")]
    NotStabilized,
    #[error("range of the parameter path is outside the periodic core")]
    NotInPeriodicCore,
    #[error("vector {0:?} is not in the periodicity group")]
    NotInPer(Vec<i64>),
    #[error("periodic core is empty")]
    MPerEmpty,
    #[error("periodic core is not hereditary")]
    MPerNotHereditary,
    #[error("expected {expected} coordinates, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("malformed D-set: {0}")]
    MalformedDSet(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KEdgeRepr {
    pub name: String,
    pub color: usize,
    pub source: String,
    pub range: String,
}

/// A commuting square `first[0] first[1] = second[0] second[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRepr {
    pub first: [String; 2],
    pub second: [String; 2],
}

/// The unvalidated JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraphSkeleton {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<KEdgeRepr>,
    #[serde(default)]
    pub squares: Vec<SquareRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KEdge {
    pub name: String,
    pub color: usize,
    pub source: usize,
    pub range: usize,
}

/// A validated k-graph skeleton.
#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertices: Vec<String>,
    vindex: HashMap<String, usize>,
    edges: Vec<KEdge>,
    eindex: HashMap<String, usize>,
    /// `(f, g) -> (g', f')` for `color(f) < color(g)`.
    fwd: HashMap<(usize, usize), (usize, usize)>,
    /// The inverse of `fwd`.
    bwd: HashMap<(usize, usize), (usize, usize)>,
    /// `in_edges[v][c]`: edges of colour `c` with range `v`.
    in_edges: Vec<Vec<Vec<usize>>>,
    reach: Vec<Vec<bool>>,
}

impl KGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[KEdge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &KEdge {
        &self.edges[i]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize, KGraphError> {
        self.vindex.get(name).copied().ok_or_else(|| KGraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_index(&self, name: &str) -> Result<usize, KGraphError> {
        self.eindex.get(name).copied().ok_or_else(|| KGraphError::UnknownEdge(name.to_string()))
    }

    pub fn vertex_set(&self, names: &[String]) -> Result<VertexSet, KGraphError> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    pub fn names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    pub fn fmt_set(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }

    /// Edges of colour `c` (0-based) with range `v`.
    pub fn in_edges(&self, v: usize, c: usize) -> &[usize] {
        &self.in_edges[v][c]
    }

    /// `v <= w`: some path has source `v` and range `w`.
    pub fn leq(&self, v: usize, w: usize) -> bool {
        self.reach[v][w]
    }

    /// Reorders the adjacent pair `a b` (with `s(a) = r(b)`) to the pair of
    /// swapped colours with the same composite.
    pub(crate) fn swap(&self, a: usize, b: usize) -> (usize, usize) {
        let (ca, cb) = (self.edges[a].color, self.edges[b].color);
        assert_ne!(ca, cb, "only edges of different colours commute");
        let table = if ca < cb { &self.fwd } else { &self.bwd };
        *table.get(&(a, b)).expect("validated skeleton has every square")
    }

    pub fn to_skeleton(&self) -> KGraphSkeleton {
        let mut squares: Vec<SquareRepr> = self
            .fwd
            .iter()
            .map(|(&(f, g), &(g2, f2))| SquareRepr {
                first: [self.edges[f].name.clone(), self.edges[g].name.clone()],
                second: [self.edges[g2].name.clone(), self.edges[f2].name.clone()],
            })
            .collect();
        squares.sort_by(|a, b| a.first.cmp(&b.first));
        KGraphSkeleton {
            k: self.k,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| KEdgeRepr {
                    name: e.name.clone(),
                    color: e.color + 1,
                    source: self.vertices[e.source].clone(),
                    range: self.vertices[e.range].clone(),
                })
                .collect(),
            squares,
        }
    }

    /// The 1-graph of a row-finite graph without sources. An edge of finite
    /// multiplicity `m > 1` becomes `m` parallel edges `name#0 .. name#(m-1)`.
    pub fn from_digraph(g: &DirectedGraph) -> Result<KGraph, KGraphError> {
        g.require_row_finite_no_sources()?;
        let mut edges = Vec::new();
        for e in g.edges() {
            let Mult::Finite(m) = e.mult else { unreachable!("row-finite graphs have finite multiplicities") };
            for c in 0..m {
                edges.push(KEdgeRepr {
                    name: if m == 1 { e.name.clone() } else { format!("{}#{c}", e.name) },
                    color: 1,
                    source: g.name(e.source).to_string(),
                    range: g.name(e.range).to_string(),
                });
            }
        }
        debug_assert!((0..g.vertex_count()).all(|v| g.in_count(v) != Count::Finite(0)));
        validate_kgraph(&KGraphSkeleton { k: 1, vertices: g.vertices().to_vec(), edges, squares: Vec::new() })
    }
}

/// Checks the skeleton and square table and builds the factorization maps.
pub fn validate_kgraph(sk: &KGraphSkeleton) -> Result<KGraph, KGraphError> {
    let k = sk.k;
    let mut vindex = HashMap::new();
    for (i, v) in sk.vertices.iter().enumerate() {
        if vindex.insert(v.clone(), i).is_some() {
            return Err(KGraphError::DuplicateVertex(v.clone()));
        }
    }
    let mut eindex = HashMap::new();
    let mut edges = Vec::new();
    for (i, e) in sk.edges.iter().enumerate() {
        if eindex.insert(e.name.clone(), i).is_some() {
            return Err(KGraphError::DuplicateEdge(e.name.clone()));
        }
        if e.color == 0 || e.color > k {
            return Err(KGraphError::BadColor { edge: e.name.clone(), color: e.color, k });
        }
        let look = |v: &String| vindex.get(v).copied().ok_or_else(|| KGraphError::UnknownVertex(v.clone()));
        edges.push(KEdge {
            name: e.name.clone(),
            color: e.color - 1,
            source: look(&e.source)?,
            range: look(&e.range)?,
        });
    }
    let n = sk.vertices.len();
    let mut in_edges = vec![vec![Vec::new(); k]; n];
    for (i, e) in edges.iter().enumerate() {
        in_edges[e.range][e.color].push(i);
    }
    for v in 0..n {
        for c in 0..k {
            if in_edges[v][c].is_empty() {
                return Err(KGraphError::HasSources { vertex: sk.vertices[v].clone(), color: c + 1 });
            }
        }
    }

    let ename = |i: usize| edges[i].name.as_str();
    let lookup = |s: &String| eindex.get(s).copied().ok_or_else(|| KGraphError::UnknownEdge(s.clone()));
    let mut fwd = HashMap::new();
    let mut bwd = HashMap::new();
    for sq in &sk.squares {
        let (mut f, mut g) = (lookup(&sq.first[0])?, lookup(&sq.first[1])?);
        let (mut g2, mut f2) = (lookup(&sq.second[0])?, lookup(&sq.second[1])?);
        if edges[f].color > edges[g].color {
            std::mem::swap(&mut f, &mut g2);
            std::mem::swap(&mut g, &mut f2);
        }
        let cell = format!("{} {} = {} {}", ename(f), ename(g), ename(g2), ename(f2));
        let (ef, eg, eg2, ef2) = (&edges[f], &edges[g], &edges[g2], &edges[f2]);
        let shaped = ef.color < eg.color
            && eg2.color == eg.color
            && ef2.color == ef.color
            && ef.source == eg.range
            && eg2.source == ef2.range
            && eg2.range == ef.range
            && ef2.source == eg.source;
        if !shaped {
            return Err(KGraphError::InvalidFactorization(format!("square {cell} is not well formed")));
        }
        if fwd.insert((f, g), (g2, f2)).is_some() {
            return Err(KGraphError::InvalidFactorization(format!("path {} {} has two squares", ename(f), ename(g))));
        }
        if bwd.insert((g2, f2), (f, g)).is_some() {
            return Err(KGraphError::InvalidFactorization(format!("path {} {} has two squares", ename(g2), ename(f2))));
        }
    }
    for (a, ea) in edges.iter().enumerate() {
        for (b, eb) in edges.iter().enumerate() {
            if ea.source != eb.range || ea.color == eb.color {
                continue;
            }
            let table = if ea.color < eb.color { &fwd } else { &bwd };
            if !table.contains_key(&(a, b)) {
                return Err(KGraphError::InvalidFactorization(format!("path {} {} has no square", ename(a), ename(b))));
            }
        }
    }

    let reach = reachability(n, &edges);
    let kg = KGraph { k, vertices: sk.vertices.clone(), vindex, edges, eindex, fwd, bwd, in_edges, reach };
    check_cubes(&kg)?;
    Ok(kg)
}

/// For every path `f g h` of three distinct increasing colours, the two ways
/// of reversing the colour order through squares must agree.
fn check_cubes(kg: &KGraph) -> Result<(), KGraphError> {
    if kg.k < 3 {
        return Ok(());
    }
    let e = &kg.edges;
    for f in 0..e.len() {
        for g in kg.in_edges[e[f].source].iter().flatten().copied() {
            if e[g].color <= e[f].color {
                continue;
            }
            for h in kg.in_edges[e[g].source].iter().flatten().copied() {
                if e[h].color <= e[g].color {
                    continue;
                }
                let (x, y, z) = (f, g, h);
                // (1,2), (2,3), (1,2)
                let (a1, b1) = kg.swap(x, y);
                let (b2, c2) = kg.swap(b1, z);
                let (a3, b3) = kg.swap(a1, b2);
                let route_a = [a3, b3, c2];
                // (2,3), (1,2), (2,3)
                let (y1, z1) = kg.swap(y, z);
                let (x2, y2) = kg.swap(x, y1);
                let (y3, z3) = kg.swap(y2, z1);
                let route_b = [x2, y3, z3];
                if route_a != route_b {
                    return Err(KGraphError::CubeViolation(format!("{} {} {}", e[f].name, e[g].name, e[h].name)));
                }
            }
        }
    }
    Ok(())
}

fn reachability(n: usize, edges: &[KEdge]) -> Vec<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.source].push(e.range);
    }
    (0..n)
        .map(|v| {
            let mut seen = vec![false; n];
            seen[v] = true;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
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
