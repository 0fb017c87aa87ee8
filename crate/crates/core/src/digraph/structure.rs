use rayon::prelude::*;

use super::{Count, DirectedGraph, GraphError, VertexSet};

/// Strongly connected components, ordered by their smallest vertex.
pub fn components(g: &DirectedGraph) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let c: VertexSet = (0..n).filter(|&w| g.leq(v, w) && g.leq(w, v)).collect();
        for &w in &c {
            seen[w] = true;
        }
        out.push(c);
    }
    out
}

/// Vertices receiving no edges or infinitely many.
pub fn singular_vertices(g: &DirectedGraph) -> VertexSet {
    (0..g.vertex_count()).filter(|&v| matches!(g.in_count(v), Count::Finite(0) | Count::Infinite)).collect()
}

/// Singular vertices receiving finitely many, but at least one, edges from
/// vertices above them.
pub fn breaking_vertices(g: &DirectedGraph) -> VertexSet {
    singular_vertices(g)
        .into_iter()
        .filter(|&v| match g.in_count_from(v, |u| g.leq(v, u)) {
            Count::Finite(n) => n > 0,
            Count::Infinite => false,
        })
        .collect()
}

/// Components in which every vertex receives exactly one edge from inside.
pub fn primitive_loops(g: &DirectedGraph) -> Vec<VertexSet> {
    components(g)
        .into_iter()
        .filter(|c| c.iter().all(|&v| g.in_count_from(v, |u| c.contains(&u)) == Count::Finite(1)))
        .collect()
}

/// Closed downward: `r(e) in H` implies `s(e) in H`.
pub fn is_hereditary(g: &DirectedGraph, h: &VertexSet) -> bool {
    g.edges().iter().all(|e| !h.contains(&e.range) || h.contains(&e.source))
}

/// No regular vertex outside `H` has all its incoming edges coming from `H`.
pub fn is_saturated(g: &DirectedGraph, h: &VertexSet) -> bool {
    (0..g.vertex_count()).all(|v| h.contains(&v) || !absorbed(g, h, v))
}

fn absorbed(g: &DirectedGraph, h: &VertexSet, v: usize) -> bool {
    matches!(g.in_count(v), Count::Finite(n) if n > 0) && g.in_edges(v).all(|(_, e)| h.contains(&e.source))
}

/// Smallest saturated set containing the hereditary set `h`.
///
/// A regular vertex (finitely many, at least one, incoming edges) is added
/// once all its incoming edges start in the set.
pub fn saturate(g: &DirectedGraph, h: &VertexSet) -> Result<VertexSet, GraphError> {
    if !is_hereditary(g, h) {
        return Err(GraphError::NotHereditary);
    }
    let mut out = h.clone();
    loop {
        let add: Vec<usize> = (0..g.vertex_count()).filter(|v| !out.contains(v) && absorbed(g, &out, *v)).collect();
        if add.is_empty() {
            return Ok(out);
        }
        out.extend(add);
    }
}

pub const MAX_ENUMERATION_VERTICES: usize = 20;

/// All hereditary saturated sets of a row-finite graph without sources, in
/// increasing order of their bitmask.
pub fn hereditary_saturated_sets(g: &DirectedGraph) -> Result<Vec<VertexSet>, GraphError> {
    g.require_row_finite_no_sources()?;
    let n = g.vertex_count();
    if n > MAX_ENUMERATION_VERTICES {
        return Err(GraphError::TooLarge(n));
    }
    let sets: Vec<VertexSet> = (0u64..1 << n)
        .into_par_iter()
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<VertexSet>())
        .filter(|h| is_hereditary(g, h) && is_saturated(g, h))
        .collect();
    Ok(sets)
}
