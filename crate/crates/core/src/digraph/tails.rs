use serde::Serialize;

use super::structure::{components, primitive_loops};
use super::{Count, DirectedGraph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LeastData {
    /// No vertex lies below every other vertex of the tail.
    NoLeast,
    /// A single least vertex, carrying no self-loop.
    UniqueLeastNoSelfLoop(usize),
    /// Least vertices exist but are several or carry a loop.
    Other,
}

/// A maximal tail together with its classification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tail {
    pub vertices: VertexSet,
    /// Every cycle in the tail has an entrance from the tail.
    pub gamma: bool,
    pub least: LeastData,
    /// The component lying below every vertex of the tail.
    pub bottom: VertexSet,
}

/// Every maximal tail, ordered by vertex set.
///
/// On a finite graph a maximal tail has a bottom component `C` and equals the
/// set of vertices above `C`. Such an up-set satisfies the tail axioms exactly
/// when `C` carries an internal edge, or is a single vertex receiving no edges
/// or infinitely many. The tail fails the entrance condition exactly when `C`
/// is a primitive loop.
pub fn maximal_tails(g: &DirectedGraph) -> Vec<Tail> {
    let loops = primitive_loops(g);
    let mut out: Vec<Tail> = components(g)
        .into_iter()
        .filter_map(|c| {
            let internal = c.iter().any(|&v| g.in_count_from(v, |u| c.contains(&u)) != Count::Finite(0));
            let v0 = *c.iter().next().expect("components are nonempty");
            let singular_point = c.len() == 1 && matches!(g.in_count(v0), Count::Finite(0) | Count::Infinite);
            if !internal && !singular_point {
                return None;
            }
            let least = if c.len() == 1 && !g.has_self_loop(v0) {
                LeastData::UniqueLeastNoSelfLoop(v0)
            } else {
                LeastData::Other
            };
            Some(Tail { vertices: g.up_closure(&c), gamma: !loops.contains(&c), least, bottom: c })
        })
        .collect();
    out.sort();
    out
}
