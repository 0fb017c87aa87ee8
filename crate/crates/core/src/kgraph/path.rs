//! Paths in normal form, composition, segments and enumeration.

use std::fmt;

use super::{KGraph, KGraphError, VertexSet};

/// A path stored by its normal form: edges read from the range end with
/// nondecreasing colours. A path of degree zero is a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KPath {
    range: usize,
    source: usize,
    edges: Vec<usize>,
    degree: Vec<u32>,
}

impl KPath {
    pub fn vertex(kg: &KGraph, v: usize) -> KPath {
        KPath { range: v, source: v, edges: Vec::new(), degree: vec![0; kg.k()] }
    }

    /// The path `edges[0] edges[1] ...` (with `s(edges[i]) = r(edges[i+1])`),
    /// brought to normal form.
    pub fn from_edges(kg: &KGraph, edges: &[usize]) -> Result<KPath, KGraphError> {
        let (first, last) = match (edges.first(), edges.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(KGraphError::DegreeOutOfRange),
        };
        for w in edges.windows(2) {
            if kg.edge(w[0]).source != kg.edge(w[1]).range {
                return Err(KGraphError::EndpointMismatch);
            }
        }
        let mut degree = vec![0; kg.k()];
        for &e in edges {
            degree[kg.edge(e).color] += 1;
        }
        let mut edges = edges.to_vec();
        normalize(kg, &mut edges);
        Ok(KPath { range: kg.edge(first).range, source: kg.edge(last).source, edges, degree })
    }

    /// Parses a list of edge names, or a single vertex name.
    pub fn from_names(kg: &KGraph, names: &[impl AsRef<str>]) -> Result<KPath, KGraphError> {
        if let [only] = names {
            if let Ok(v) = kg.vertex(only.as_ref()) {
                return Ok(KPath::vertex(kg, v));
            }
        }
        let idx = names.iter().map(|n| kg.edge_index(n.as_ref())).collect::<Result<Vec<_>, _>>()?;
        KPath::from_edges(kg, &idx)
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn degree(&self) -> &[u32] {
        &self.degree
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// The normal form of `self` followed by `other`.
    pub fn compose(&self, kg: &KGraph, other: &KPath) -> Result<KPath, KGraphError> {
        if self.source != other.range {
            return Err(KGraphError::EndpointMismatch);
        }
        if other.is_vertex() {
            return Ok(self.clone());
        }
        if self.is_vertex() {
            return Ok(other.clone());
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        normalize(kg, &mut edges);
        let degree = self.degree.iter().zip(&other.degree).map(|(a, b)| a + b).collect();
        Ok(KPath { range: self.range, source: other.source, edges, degree })
    }

    /// `self` followed by the single edge `e`.
    pub fn extend(&self, kg: &KGraph, e: usize) -> Result<KPath, KGraphError> {
        self.compose(kg, &KPath::from_edges(kg, &[e])?)
    }

    /// The unique `self(p, q)` in the factorization
    /// `self = self(0,p) self(p,q) self(q,d)`.
    pub fn segment(&self, kg: &KGraph, p: &[u32], q: &[u32]) -> Result<KPath, KGraphError> {
        let k = kg.k();
        if p.len() != k || q.len() != k {
            return Err(KGraphError::RankMismatch { expected: k, found: if p.len() != k { p.len() } else { q.len() } });
        }
        if (0..k).any(|i| p[i] > q[i] || q[i] > self.degree[i]) {
            return Err(KGraphError::DegreeOutOfRange);
        }
        let mut word = color_word(p);
        let mid: Vec<u32> = (0..k).map(|i| q[i] - p[i]).collect();
        word.extend(color_word(&mid));
        let rest: Vec<u32> = (0..k).map(|i| self.degree[i] - q[i]).collect();
        word.extend(color_word(&rest));
        let arranged = rearrange(kg, &self.edges, &word);
        let (a, b) = (total(p), total(q));
        if a == b {
            let v = if a == 0 { self.range } else { kg.edge(arranged[a - 1]).source };
            return Ok(KPath::vertex(kg, v));
        }
        let slice = &arranged[a..b];
        Ok(KPath {
            range: kg.edge(slice[0]).range,
            source: kg.edge(slice[b - a - 1]).source,
            edges: slice.to_vec(),
            degree: mid,
        })
    }

    /// The vertex `self(m, m)`.
    pub fn vertex_at(&self, kg: &KGraph, m: &[u32]) -> Result<usize, KGraphError> {
        Ok(self.segment(kg, m, m)?.range)
    }

    pub fn names(&self, kg: &KGraph) -> Vec<String> {
        if self.is_vertex() {
            vec![kg.name(self.range).to_string()]
        } else {
            self.edges.iter().map(|&e| kg.edge(e).name.clone()).collect()
        }
    }

    pub fn display<'a>(&'a self, kg: &'a KGraph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a KPath, &'a KGraph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.names(self.1).join(" "))
            }
        }
        D(self, kg)
    }
}

fn total(d: &[u32]) -> usize {
    d.iter().map(|&x| x as usize).sum()
}

/// The ascending colour word of degree `d`.
fn color_word(d: &[u32]) -> Vec<usize> {
    d.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n as usize)).collect()
}

/// Sorts an edge sequence by colour using the square table.
fn normalize(kg: &KGraph, edges: &mut [usize]) {
    for i in 1..edges.len() {
        let mut j = i;
        while j > 0 && kg.edge(edges[j - 1]).color > kg.edge(edges[j]).color {
            let (a, b) = kg.swap(edges[j - 1], edges[j]);
            edges[j - 1] = a;
            edges[j] = b;
            j -= 1;
        }
    }
}

/// Refactors a path so that its colours follow `word`.
fn rearrange(kg: &KGraph, edges: &[usize], word: &[usize]) -> Vec<usize> {
    let mut cur = edges.to_vec();
    for (p, &c) in word.iter().enumerate() {
        let q = (p..cur.len()).find(|&q| kg.edge(cur[q]).color == c).expect("word has the path's degree");
        for t in (p..q).rev() {
            let (a, b) = kg.swap(cur[t], cur[t + 1]);
            cur[t] = a;
            cur[t + 1] = b;
        }
    }
    cur
}

/// All paths of degree `d` with range `v` whose vertices lie in `within`
/// (every vertex when `None`).
pub fn paths_with_range(kg: &KGraph, v: usize, d: &[u32], within: Option<&VertexSet>) -> Vec<KPath> {
    let ok = |x: usize| within.is_none_or(|m| m.contains(&x));
    if !ok(v) {
        return Vec::new();
    }
    let word = color_word(d);
    let mut out = Vec::new();
    let mut stack = vec![(v, Vec::with_capacity(word.len()))];
    while let Some((at, edges)) = stack.pop() {
        if edges.len() == word.len() {
            out.push(KPath { range: v, source: at, edges, degree: d.to_vec() });
            continue;
        }
        for &e in kg.in_edges(at, word[edges.len()]).iter().rev() {
            let s = kg.edge(e).source;
            if ok(s) {
                let mut next = edges.clone();
                next.push(e);
                stack.push((s, next));
            }
        }
    }
    out
}

/// All paths of degree `d` with vertices in `within`, in order.
pub(crate) fn paths_of_degree(kg: &KGraph, d: &[u32], within: &VertexSet) -> Vec<KPath> {
    within.iter().flat_map(|&v| paths_with_range(kg, v, d, Some(within))).collect()
}

/// Every degree `0 <= d <= bound`, ordered by total length then
/// lexicographically.
pub fn degrees_up_to(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out.into_iter().flat_map(|d| (0..=b).map(move |x| [d.clone(), vec![x]].concat())).collect();
    }
    out.sort_by_key(|d| (total(d), d.clone()));
    out
}
