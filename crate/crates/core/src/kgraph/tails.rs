//! Maximal tails of a finite k-graph.

use std::collections::BTreeSet;

use super::{KGraph, VertexSet};

/// Vertices `w` with `v <= w` for some `v` in `set`.
pub fn up_closure(kg: &KGraph, set: &VertexSet) -> VertexSet {
    (0..kg.vertex_count()).filter(|&w| set.iter().any(|&v| kg.leq(v, w))).collect()
}

/// Whether `m` satisfies the three tail axioms: closed upwards, every vertex
/// receives an edge of each colour from `m`, and downward directed.
pub(crate) fn is_tail(kg: &KGraph, m: &VertexSet) -> bool {
    if m.is_empty() || up_closure(kg, m) != *m {
        return false;
    }
    let fed = m.iter().all(|&v| (0..kg.k()).all(|c| kg.in_edges(v, c).iter().any(|&e| m.contains(&kg.edge(e).source))));
    fed && m.iter().all(|&v| m.iter().all(|&w| m.iter().any(|&y| kg.leq(y, v) && kg.leq(y, w))))
}

/// All maximal tails, sorted.
///
/// A finite tail is directed, so it has a least strongly connected class `C`
/// and equals the up-closure of `C`. Only those up-closures are tested.
pub fn ktails(kg: &KGraph) -> Vec<VertexSet> {
    let n = kg.vertex_count();
    let candidates: BTreeSet<VertexSet> =
        (0..n).map(|v| up_closure(kg, &[v].into())).filter(|m| is_tail(kg, m)).collect();
    candidates.into_iter().collect()
}
