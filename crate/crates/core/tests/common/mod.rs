//! Random corpora and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub mod kgraphs;
pub mod lattice;
pub mod sgds;

use primtop_core::digraph::{DirectedGraph, EdgeRepr, LeastData, Mult, Tail};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph on `1..=max_v` vertices with up to `max_e` edges and
/// multiplicities drawn from `{1, 2, inf}`.
pub fn random_graph(r: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> DirectedGraph {
    let n = r.gen_range(1..=max_v);
    let m = r.gen_range(0..=max_e);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..m)
        .map(|i| EdgeRepr {
            name: format!("e{i}"),
            source: vertices[r.gen_range(0..n)].clone(),
            range: vertices[r.gen_range(0..n)].clone(),
            mult: match r.gen_range(0..6) {
                0..=3 => Mult::Finite(1),
                4 => Mult::Finite(2),
                _ => Mult::Omega,
            },
        })
        .collect();
    DirectedGraph::new(vertices, edges).unwrap()
}

/// A random row-finite graph in which every vertex receives an edge.
pub fn random_row_finite_no_sources(r: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> DirectedGraph {
    loop {
        let n = r.gen_range(1..=max_v);
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges: Vec<EdgeRepr> = (0..n)
            .map(|i| EdgeRepr {
                name: format!("e{i}"),
                source: vertices[r.gen_range(0..n)].clone(),
                range: vertices[i].clone(),
                mult: Mult::Finite(1),
            })
            .collect();
        let extra = r.gen_range(0..=max_e.saturating_sub(n));
        for j in 0..extra {
            edges.push(EdgeRepr {
                name: format!("x{j}"),
                source: vertices[r.gen_range(0..n)].clone(),
                range: vertices[r.gen_range(0..n)].clone(),
                mult: Mult::Finite(if r.gen_bool(0.2) { 2 } else { 1 }),
            });
        }
        let g = DirectedGraph::new(vertices, edges).unwrap();
        if g.require_row_finite_no_sources().is_ok() {
            return g;
        }
    }
}

/// Reachability by Floyd-Warshall over raw edges: `r[v][w]` iff a walk runs from v to w.
pub fn brute_reach(g: &DirectedGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for e in g.edges() {
        r[e.source][e.range] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn in_mult(g: &DirectedGraph, v: usize, from: impl Fn(usize) -> bool) -> Option<u64> {
    let mut total = 0u64;
    for e in g.edges().iter().filter(|e| e.range == v && from(e.source)) {
        match e.mult {
            Mult::Finite(m) => total += m as u64,
            Mult::Omega => return None,
        }
    }
    Some(total)
}

/// Simple cycles (as edge-index lists) with all vertices in `m`.
fn simple_cycles(g: &DirectedGraph, m: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for &start in m {
        let mut stack: Vec<(usize, Vec<usize>, Vec<usize>)> = vec![(start, vec![start], vec![])];
        while let Some((at, verts, edges)) = stack.pop() {
            for (i, e) in g.edges().iter().enumerate() {
                if e.source != at || !m.contains(&e.range) || e.range < start {
                    continue;
                }
                if e.range == start {
                    let mut c = edges.clone();
                    c.push(i);
                    out.push(c);
                } else if !verts.contains(&e.range) {
                    let mut v2 = verts.clone();
                    v2.push(e.range);
                    let mut e2 = edges.clone();
                    e2.push(i);
                    stack.push((e.range, v2, e2));
                }
            }
        }
    }
    out
}

/// Tails found by testing the three axioms on every nonempty vertex subset,
/// classified by enumerating simple cycles and their entrances.
pub fn brute_tails(g: &DirectedGraph) -> Vec<(BTreeSet<usize>, bool, LeastData)> {
    let n = g.vertex_count();
    let reach = brute_reach(g);
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let m: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let up = (0..n).all(|v| m.iter().all(|&w| !reach[w][v] || m.contains(&v)));
        let regular_ok = m.iter().all(|&v| match in_mult(g, v, |_| true) {
            Some(c) if c > 0 => g.edges().iter().any(|e| e.range == v && m.contains(&e.source)),
            _ => true,
        });
        let directed = m.iter().all(|&v| m.iter().all(|&w| m.iter().any(|&u| reach[u][v] && reach[u][w])));
        if !(up && regular_ok && directed) {
            continue;
        }
        let gamma = simple_cycles(g, &m).iter().all(|cyc| {
            let verts: BTreeSet<usize> = cyc.iter().map(|&i| g.edges()[i].range).collect();
            g.edges().iter().enumerate().any(|(j, e)| {
                verts.contains(&e.range) && m.contains(&e.source) && (!cyc.contains(&j) || e.mult != Mult::Finite(1))
            })
        });
        let least: Vec<usize> = m.iter().copied().filter(|&u| m.iter().all(|&w| reach[u][w])).collect();
        let least = match least.as_slice() {
            [] => LeastData::NoLeast,
            [u] if !g.edges().iter().any(|e| e.source == *u && e.range == *u) => LeastData::UniqueLeastNoSelfLoop(*u),
            _ => LeastData::Other,
        };
        out.push((m, gamma, least));
    }
    out.sort();
    out
}

pub fn tail_summary(t: &[Tail]) -> Vec<(BTreeSet<usize>, bool, LeastData)> {
    let mut v: Vec<_> = t.iter().map(|t| (t.vertices.clone(), t.gamma, t.least.clone())).collect();
    v.sort();
    v
}

pub fn g_bv() -> DirectedGraph {
    DirectedGraph::from_edges(&["v", "w"], &[("e", "v", "v", Mult::Finite(1)), ("f", "w", "v", Mult::Omega)]).unwrap()
}

pub fn g_pt() -> DirectedGraph {
    DirectedGraph::from_edges(&["v"], &[]).unwrap()
}

pub fn g_loop() -> DirectedGraph {
    DirectedGraph::from_edges(&["v"], &[("e", "v", "v", Mult::Finite(1))]).unwrap()
}

pub fn g_out() -> DirectedGraph {
    DirectedGraph::from_edges(&["v", "w"], &[("e", "v", "v", Mult::Finite(1)), ("f", "v", "w", Mult::Finite(1))])
        .unwrap()
}

pub fn graph_fixtures() -> Vec<DirectedGraph> {
    vec![g_pt(), g_loop(), g_bv(), g_out()]
}

use primtop_core::digraph::{cylinder_specializes, point_path, prim_spectrum, PrimPoint};
use primtop_core::lattice::RationalAngle;

/// Specialization decided by boundary-path simulation at the given depth.
pub fn oracle_specializes(g: &DirectedGraph, p1: &PrimPoint, p2: &PrimPoint, depth: usize) -> bool {
    if let (PrimPoint::Loop { cycle: l1, fiber: w1 }, PrimPoint::Loop { cycle: l2, fiber: w2 }) = (p1, p2) {
        if l1 == l2 {
            return w1 == w2;
        }
    }
    let x1 = point_path(g, p1, 4 * depth).unwrap();
    let x2 = point_path(g, p2, 4 * depth).unwrap();
    cylinder_specializes(g, &x1, &x2, depth)
}

/// Every spectrum point, with loop fibres sampled at `0` and `1/2`.
pub fn sample_points(g: &DirectedGraph) -> Vec<PrimPoint> {
    let s = prim_spectrum(g);
    let mut pts = s.finite_points();
    for l in &s.loops {
        for w in [RationalAngle::ZERO, RationalAngle::new(1, 2)] {
            pts.push(PrimPoint::Loop { cycle: l.clone(), fiber: w });
        }
    }
    pts
}
