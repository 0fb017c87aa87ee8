//! Depth-bounded simulation of boundary paths and cylinder neighbourhoods.
//!
//! Nothing here looks at tails or at the specialization rules. Orbits are
//! explored by prepending concrete edge copies, and membership is tested
//! against the basic open sets of the boundary-path topology cut off at a
//! fixed depth.

use std::collections::{BTreeSet, VecDeque};

use super::{DirectedGraph, Mult};

/// One of the parallel copies of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCopy {
    pub edge: usize,
    pub copy: u32,
}

impl EdgeCopy {
    pub fn label(&self, g: &DirectedGraph) -> String {
        let e = &g.edges()[self.edge];
        match e.mult {
            Mult::Finite(1) => e.name.clone(),
            _ => format!("{}#{}", e.name, self.copy),
        }
    }
}

/// A representative boundary path: a vertex (path of length zero) or an
/// explicit prefix of an infinite path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryPath {
    Vertex(usize),
    Infinite(Vec<EdgeCopy>),
}

/// Edge copies with range `v`, using copies `0..min(mult, cap)`.
fn in_copies(g: &DirectedGraph, v: usize, cap: u32) -> Vec<EdgeCopy> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.range == v)
        .flat_map(|(i, e)| {
            let n = match e.mult {
                Mult::Finite(m) => m.min(cap),
                Mult::Omega => cap,
            };
            (0..n).map(move |c| EdgeCopy { edge: i, copy: c })
        })
        .collect()
}

/// Whether some finite path has range `to` and source `from`, found by walking
/// backwards from `to` along incoming edges.
fn path_exists(g: &DirectedGraph, from: usize, to: usize) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([to]);
    seen[to] = true;
    while let Some(x) = queue.pop_front() {
        if x == from {
            return true;
        }
        for c in in_copies(g, x, 1) {
            let s = g.edges()[c.edge].source;
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    false
}

fn source(g: &DirectedGraph, c: &EdgeCopy) -> usize {
    g.edges()[c.edge].source
}

fn range(g: &DirectedGraph, c: &EdgeCopy) -> usize {
    g.edges()[c.edge].range
}

/// Ranges of the shifted paths `sigma^k(x)` available from the representative.
fn shift_ranges(g: &DirectedGraph, x: &BoundaryPath, depth: usize) -> Vec<(usize, usize)> {
    match x {
        BoundaryPath::Vertex(u) => vec![(0, *u)],
        BoundaryPath::Infinite(p) => {
            let k_max = p.len().saturating_sub(depth);
            (0..=k_max.min(p.len() - 1)).map(|k| (k, range(g, &p[k]))).collect()
        }
    }
}

/// Whether the orbit of `x1` meets the depth-`depth` neighbourhood of `x2`.
///
/// For an infinite `x2` the neighbourhood is the cylinder of its first `depth`
/// edges. For a vertex `v` it is `{v}` together with the cylinders of the
/// copies of infinite-multiplicity edges into `v` numbered `depth` or higher;
/// every other edge into `v` is cut away. Infinite representatives must carry
/// a prefix of at least `2 * depth` edges.
pub fn cylinder_specializes(g: &DirectedGraph, x1: &BoundaryPath, x2: &BoundaryPath, depth: usize) -> bool {
    match x2 {
        BoundaryPath::Infinite(p2) => {
            assert!(p2.len() >= depth, "target prefix shorter than the depth");
            let beta = &p2[..depth];
            let end = source(g, &beta[depth - 1]);
            match x1 {
                BoundaryPath::Vertex(u) => path_exists(g, *u, end),
                BoundaryPath::Infinite(p1) => shift_ranges(g, x1, depth).into_iter().any(|(k, r)| {
                    // Either the orbit element runs through all of beta and then
                    // connects down to sigma^k(x1), or it switches to sigma^k(x1)
                    // partway through beta.
                    path_exists(g, r, end)
                        || (0..depth).any(|j| {
                            let need = depth - j;
                            k + need <= p1.len() && p1[k..k + need] == beta[j..]
                        })
                }),
            }
        }
        BoundaryPath::Vertex(v) => {
            if *x1 == BoundaryPath::Vertex(*v) {
                return true;
            }
            let omega_sources: BTreeSet<usize> =
                g.edges().iter().filter(|e| e.range == *v && e.mult == Mult::Omega).map(|e| e.source).collect();
            shift_ranges(g, x1, depth).into_iter().any(|(_, r)| omega_sources.iter().any(|&s| path_exists(g, r, s)))
        }
    }
}

/// Whether the periodic path `cycle^infinity` is alone in its orbit within the
/// cylinder of its first `depth` edges. `cycle` must be a closed path.
pub fn isolated_in_orbit(g: &DirectedGraph, cycle: &[EdgeCopy], depth: usize) -> bool {
    let p = cycle.len();
    assert!(p > 0, "empty cycle");
    let on_cycle: BTreeSet<usize> = cycle.iter().map(|c| range(g, c)).collect();
    let start = (source(g, &cycle[(depth + p - 1) % p]), depth % p, false);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((v, phase, deviated)) = queue.pop_front() {
        if deviated && on_cycle.contains(&v) {
            return false;
        }
        for c in in_copies(g, v, 2) {
            let next = if !deviated && c == cycle[phase] {
                (source(g, &c), (phase + 1) % p, false)
            } else {
                (source(g, &c), 0, true)
            };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    true
}
