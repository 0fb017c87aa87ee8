//! k-graph fixtures, random 2-graphs and brute-force oracles.

use std::collections::{BTreeSet, HashMap};

use primtop_core::digraph::{DirectedGraph, Mult};
use primtop_core::kgraph::{
    paths_with_range, validate_kgraph, KEdgeRepr, KGraph, KGraphSkeleton, KPath, SquareRepr, VertexSet,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn edge(name: &str, color: usize, s: &str, r: &str) -> KEdgeRepr {
    KEdgeRepr { name: name.into(), color, source: s.into(), range: r.into() }
}

fn square(a: &str, b: &str, c: &str, d: &str) -> SquareRepr {
    SquareRepr { first: [a.into(), b.into()], second: [c.into(), d.into()] }
}

pub fn k_torus_skeleton() -> KGraphSkeleton {
    KGraphSkeleton {
        k: 2,
        vertices: vec!["v".into()],
        edges: vec![edge("b", 1, "v", "v"), edge("r", 2, "v", "v")],
        squares: vec![square("b", "r", "r", "b")],
    }
}

pub fn k_o2t_skeleton() -> KGraphSkeleton {
    KGraphSkeleton {
        k: 2,
        vertices: vec!["v".into()],
        edges: vec![edge("b1", 1, "v", "v"), edge("b2", 1, "v", "v"), edge("r", 2, "v", "v")],
        squares: vec![square("b1", "r", "r", "b1"), square("b2", "r", "r", "b2")],
    }
}

pub fn k_torus() -> KGraph {
    validate_kgraph(&k_torus_skeleton()).unwrap()
}

pub fn k_o2t() -> KGraph {
    validate_kgraph(&k_o2t_skeleton()).unwrap()
}

/// One vertex with `n` blue and `m` red loops and a random bijection between
/// blue-red and red-blue pairs.
pub fn random_single_vertex(r: &mut ChaCha8Rng, n: usize, m: usize) -> KGraphSkeleton {
    let blue: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let red: Vec<String> = (0..m).map(|j| format!("r{j}")).collect();
    let mut targets: Vec<(usize, usize)> = (0..m).flat_map(|j| (0..n).map(move |i| (j, i))).collect();
    targets.shuffle(r);
    let mut edges: Vec<KEdgeRepr> = blue.iter().map(|b| edge(b, 1, "v", "v")).collect();
    edges.extend(red.iter().map(|x| edge(x, 2, "v", "v")));
    let squares = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .zip(targets)
        .map(|((i, j), (j2, i2))| square(&blue[i], &red[j], &red[j2], &blue[i2]))
        .collect();
    KGraphSkeleton { k: 2, vertices: vec!["v".into()], edges, squares }
}

/// The product 2-graph of two row-finite graphs without sources, with edges
/// of finite multiplicity expanded into copies.
pub fn product(e: &DirectedGraph, f: &DirectedGraph) -> KGraph {
    let copies = |g: &DirectedGraph| -> Vec<(String, usize, usize)> {
        g.edges()
            .iter()
            .flat_map(|x| {
                let Mult::Finite(m) = x.mult else { panic!("row-finite input") };
                (0..m).map(move |c| (format!("{}_{c}", x.name), x.source, x.range))
            })
            .collect()
    };
    let (ee, fe) = (copies(e), copies(f));
    let vname = |a: usize, b: usize| format!("{}.{}", e.name(a), f.name(b));
    let mut sk = KGraphSkeleton { k: 2, vertices: Vec::new(), edges: Vec::new(), squares: Vec::new() };
    for a in 0..e.vertex_count() {
        for b in 0..f.vertex_count() {
            sk.vertices.push(vname(a, b));
        }
    }
    for (n, s, r) in &ee {
        for b in 0..f.vertex_count() {
            sk.edges.push(edge(&format!("{n}@{}", f.name(b)), 1, &vname(*s, b), &vname(*r, b)));
        }
    }
    for (n, s, r) in &fe {
        for a in 0..e.vertex_count() {
            sk.edges.push(edge(&format!("{}@{n}", e.name(a)), 2, &vname(a, *s), &vname(a, *r)));
        }
    }
    // (x, r(y)) (s(x), y) = (r(x), y) (x, s(y))
    for (xn, xs, xr) in &ee {
        for (yn, ys, yr) in &fe {
            sk.squares.push(SquareRepr {
                first: [format!("{xn}@{}", f.name(*yr)), format!("{}@{yn}", e.name(*xs))],
                second: [format!("{}@{yn}", e.name(*xr)), format!("{xn}@{}", f.name(*ys))],
            });
        }
    }
    validate_kgraph(&sk).unwrap()
}

/// Normalizes an edge sequence by swapping out-of-order neighbours in a
/// random order, reading squares straight from the skeleton.
pub fn normalize_randomly(sk: &KGraphSkeleton, seq: &[String], r: &mut ChaCha8Rng) -> Vec<String> {
    let color: HashMap<&str, usize> = sk.edges.iter().map(|e| (e.name.as_str(), e.color)).collect();
    let mut swap: HashMap<(String, String), (String, String)> = HashMap::new();
    for sq in &sk.squares {
        let (a, b) = (sq.first.clone(), sq.second.clone());
        swap.insert((a[0].clone(), a[1].clone()), (b[0].clone(), b[1].clone()));
        swap.insert((b[0].clone(), b[1].clone()), (a[0].clone(), a[1].clone()));
    }
    let mut cur = seq.to_vec();
    loop {
        let bad: Vec<usize> = (1..cur.len()).filter(|&i| color[cur[i - 1].as_str()] > color[cur[i].as_str()]).collect();
        let Some(&i) = bad.choose(r) else { return cur };
        let (a, b) = swap[&(cur[i - 1].clone(), cur[i].clone())].clone();
        cur[i - 1] = a;
        cur[i] = b;
    }
}

/// A random composable edge sequence of the given length, built from the
/// range end.
pub fn random_sequence(kg: &KGraph, len: usize, r: &mut ChaCha8Rng) -> Vec<String> {
    let mut at = r.gen_range(0..kg.vertex_count());
    let mut out = Vec::new();
    for _ in 0..len {
        let into: Vec<usize> = (0..kg.edges().len()).filter(|&e| kg.edge(e).range == at).collect();
        let e = *into.choose(r).unwrap();
        out.push(kg.edge(e).name.clone());
        at = kg.edge(e).source;
    }
    out
}

/// `mu ~ nu` decided by comparing `(mu lambda)(0, c)` and `(nu lambda)(0, c)`
/// for every `lambda` of degree `depth` in the tail.
pub fn brute_equiv(kg: &KGraph, m: &VertexSet, mu: &KPath, nu: &KPath, depth: &[u32]) -> bool {
    let c: Vec<u32> = (0..kg.k()).map(|i| (mu.degree()[i] + depth[i]).min(nu.degree()[i] + depth[i])).collect();
    let zero = vec![0; kg.k()];
    paths_with_range(kg, mu.source(), depth, Some(m)).into_iter().all(|lam| {
        let a = mu.compose(kg, &lam).unwrap();
        let b = nu.compose(kg, &lam).unwrap();
        a.segment(kg, &zero, &c).unwrap() == b.segment(kg, &zero, &c).unwrap()
    })
}

/// Every path in the tail with degree at most `bound`.
pub fn paths_up_to(kg: &KGraph, m: &VertexSet, bound: &[u32]) -> Vec<KPath> {
    let mut out = Vec::new();
    for d in primtop_core::kgraph::degrees_up_to(bound) {
        for &v in m {
            out.extend(paths_with_range(kg, v, &d, Some(m)));
        }
    }
    out
}

/// Pairs `(mu, nu)` with a common source and degrees at most `bound`.
pub fn pairs_up_to(kg: &KGraph, m: &VertexSet, bound: &[u32]) -> Vec<(KPath, KPath)> {
    let all = paths_up_to(kg, m, bound);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.source() == b.source() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Tails found by testing the axioms on every vertex subset.
pub fn brute_ktails(kg: &KGraph) -> Vec<VertexSet> {
    let n = kg.vertex_count();
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << n {
        let m: VertexSet = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let up = m.iter().all(|&v| (0..n).all(|w| !kg.leq(v, w) || m.contains(&w)));
        let fed = m.iter().all(|&v| {
            (0..kg.k()).all(|c| kg.edges().iter().any(|e| e.range == v && e.color == c && m.contains(&e.source)))
        });
        let directed = m.iter().all(|&v| m.iter().all(|&w| m.iter().any(|&y| kg.leq(y, v) && kg.leq(y, w))));
        if up && fed && directed {
            out.insert(m);
        }
    }
    out.into_iter().collect()
}
