use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::simulate::{BoundaryPath, EdgeCopy};
use super::structure::{breaking_vertices, primitive_loops};
use super::tails::{maximal_tails, LeastData, Tail};
use super::{Count, DirectedGraph, GraphError, Mult, VertexSet};
use crate::lattice::{CircleSet, RationalAngle};

/// A point of the primitive ideal space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimPoint {
    /// The ideal attached to a maximal tail whose cycles all have entrances.
    Gamma(VertexSet),
    /// The extra ideal attached to a breaking vertex.
    Breaking(usize),
    /// A point `w` of the circle fibre over a primitive loop.
    Loop { cycle: VertexSet, fiber: RationalAngle },
}

/// The JSON form of a point; vertices are named.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrimPointRepr {
    Gamma {
        tail: Vec<String>,
    },
    Breaking {
        vertex: String,
    },
    Loop {
        #[serde(rename = "loop")]
        cycle: Vec<String>,
        fiber: RationalAngle,
    },
}

impl PrimPoint {
    pub fn to_repr(&self, g: &DirectedGraph) -> PrimPointRepr {
        match self {
            PrimPoint::Gamma(m) => PrimPointRepr::Gamma { tail: g.names(m) },
            PrimPoint::Breaking(v) => PrimPointRepr::Breaking { vertex: g.name(*v).to_string() },
            PrimPoint::Loop { cycle, fiber } => PrimPointRepr::Loop { cycle: g.names(cycle), fiber: *fiber },
        }
    }

    pub fn from_repr(g: &DirectedGraph, r: &PrimPointRepr) -> Result<PrimPoint, GraphError> {
        Ok(match r {
            PrimPointRepr::Gamma { tail } => PrimPoint::Gamma(g.vertex_set(tail)?),
            PrimPointRepr::Breaking { vertex } => PrimPoint::Breaking(g.vertex(vertex)?),
            PrimPointRepr::Loop { cycle, fiber } => PrimPoint::Loop { cycle: g.vertex_set(cycle)?, fiber: *fiber },
        })
    }

    pub fn describe(&self, g: &DirectedGraph) -> String {
        match self {
            PrimPoint::Gamma(m) => format!("gamma {}", g.fmt_set(m)),
            PrimPoint::Breaking(v) => format!("breaking {}", g.name(*v)),
            PrimPoint::Loop { cycle, fiber } => format!("loop {} at {}", g.fmt_set(cycle), fiber),
        }
    }
}

/// `Prim = M_gamma ⊔ BV ⊔ (L × T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimSpectrum {
    pub gamma: Vec<Tail>,
    pub breaking: VertexSet,
    pub loops: Vec<VertexSet>,
}

pub fn prim_spectrum(g: &DirectedGraph) -> PrimSpectrum {
    PrimSpectrum {
        gamma: maximal_tails(g).into_iter().filter(|t| t.gamma).collect(),
        breaking: breaking_vertices(g),
        loops: primitive_loops(g),
    }
}

impl PrimSpectrum {
    /// Points outside the loop fibres.
    pub fn finite_points(&self) -> Vec<PrimPoint> {
        self.gamma
            .iter()
            .map(|t| PrimPoint::Gamma(t.vertices.clone()))
            .chain(self.breaking.iter().map(|&v| PrimPoint::Breaking(v)))
            .collect()
    }

    fn tail(&self, m: &VertexSet) -> Option<&Tail> {
        self.gamma.iter().find(|t| &t.vertices == m)
    }

    pub fn contains(&self, p: &PrimPoint) -> bool {
        match p {
            PrimPoint::Gamma(m) => self.tail(m).is_some(),
            PrimPoint::Breaking(v) => self.breaking.contains(v),
            PrimPoint::Loop { cycle, .. } => self.loops.contains(cycle),
        }
    }

    fn check(&self, g: &DirectedGraph, p: &PrimPoint) -> Result<(), GraphError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(GraphError::NotInSpectrum(p.describe(g)))
        }
    }
}

/// A concrete aperiodic infinite path: starting at `base`, follow the two
/// return cycles in Thue-Morse order `a b b a b a a b ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperiodicWordSpec {
    pub base: usize,
    pub cycles: [Vec<EdgeCopy>; 2],
}

impl AperiodicWordSpec {
    pub fn prefix(&self, len: usize) -> Vec<EdgeCopy> {
        let mut out = Vec::with_capacity(len + self.cycles[0].len() + self.cycles[1].len());
        let mut n: u64 = 0;
        while out.len() < len {
            out.extend_from_slice(&self.cycles[(n.count_ones() % 2) as usize]);
            n += 1;
        }
        out.truncate(len);
        out
    }
}

/// A boundary path whose orbit closure is the point's ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiOrbitRep {
    Vertex(usize),
    Aperiodic(AperiodicWordSpec),
}

/// Representative for a gamma tail.
///
/// A unique least vertex without a loop represents itself. Otherwise the
/// bottom component is strongly connected and not a single simple cycle, so
/// its smallest-named vertex has two distinct first-return cycles. Cycles
/// are ordered by length, then by edge names.
pub fn quasi_orbit_rep(g: &DirectedGraph, tail: &Tail) -> Result<QuasiOrbitRep, GraphError> {
    if !tail.gamma {
        return Err(GraphError::NotInSpectrum(format!("non-gamma tail {}", g.fmt_set(&tail.vertices))));
    }
    if let LeastData::UniqueLeastNoSelfLoop(u) = tail.least {
        return Ok(QuasiOrbitRep::Vertex(u));
    }
    let c = &tail.bottom;
    let base = *c.iter().min_by_key(|&&v| g.name(v)).expect("bottom component is nonempty");
    let cycles = first_return_cycles(g, c, base, 2);
    let [a, b]: [Vec<EdgeCopy>; 2] =
        cycles.try_into().expect("a non-loop strongly connected component has two return cycles");
    Ok(QuasiOrbitRep::Aperiodic(AperiodicWordSpec { base, cycles: [a, b] }))
}

fn copy_key(g: &DirectedGraph, path: &[EdgeCopy]) -> Vec<(String, u32)> {
    path.iter().map(|c| (g.edges()[c.edge].name.clone(), c.copy)).collect()
}

/// The first `want` closed paths at `base` inside `c` meeting `base` only at
/// their ends, in (length, edge name) order.
fn first_return_cycles(g: &DirectedGraph, c: &VertexSet, base: usize, want: usize) -> Vec<Vec<EdgeCopy>> {
    let copies = |v: usize| -> Vec<EdgeCopy> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.range == v && c.contains(&e.source))
            .flat_map(|(i, e)| {
                let n = match e.mult {
                    Mult::Finite(m) => m.min(want as u32),
                    Mult::Omega => want as u32,
                };
                (0..n).map(move |k| EdgeCopy { edge: i, copy: k })
            })
            .collect()
    };
    let mut found: Vec<Vec<EdgeCopy>> = Vec::new();
    let mut frontier: Vec<Vec<EdgeCopy>> = vec![Vec::new()];
    for _ in 0..=2 * c.len() {
        let mut next = Vec::new();
        let mut closed = Vec::new();
        for path in &frontier {
            let at = path.last().map_or(base, |e| g.edges()[e.edge].source);
            for e in copies(at) {
                let mut p = path.clone();
                p.push(e);
                if g.edges()[e.edge].source == base {
                    closed.push(p);
                } else {
                    next.push(p);
                }
            }
        }
        closed.sort_by_key(|p| copy_key(g, p));
        found.extend(closed);
        if found.len() >= want {
            found.truncate(want);
            return found;
        }
        frontier = next;
    }
    found
}

/// The simple cycle through a primitive loop, starting at its smallest-named vertex.
pub fn loop_cycle(g: &DirectedGraph, l: &VertexSet) -> Vec<EdgeCopy> {
    let base = *l.iter().min_by_key(|&&v| g.name(v)).expect("loops are nonempty");
    let mut out = Vec::new();
    let mut at = base;
    loop {
        let (i, e) = g
            .in_edges(at)
            .find(|(_, e)| l.contains(&e.source))
            .expect("each loop vertex receives an edge from the loop");
        out.push(EdgeCopy { edge: i, copy: 0 });
        at = e.source;
        if at == base {
            return out;
        }
    }
}

/// A representative boundary path for `p`, with at least `len` edges when infinite.
pub fn point_path(g: &DirectedGraph, p: &PrimPoint, len: usize) -> Result<BoundaryPath, GraphError> {
    Ok(match p {
        PrimPoint::Breaking(v) => BoundaryPath::Vertex(*v),
        PrimPoint::Loop { cycle, .. } => {
            let c = loop_cycle(g, cycle);
            BoundaryPath::Infinite(c.iter().cycle().take(len.max(c.len())).copied().collect())
        }
        PrimPoint::Gamma(m) => {
            let tail = maximal_tails(g)
                .into_iter()
                .find(|t| &t.vertices == m)
                .ok_or_else(|| GraphError::NotInSpectrum(p.describe(g)))?;
            match quasi_orbit_rep(g, &tail)? {
                QuasiOrbitRep::Vertex(u) => BoundaryPath::Vertex(u),
                QuasiOrbitRep::Aperiodic(w) => BoundaryPath::Infinite(w.prefix(len)),
            }
        }
    })
}

fn tail_of(g: &DirectedGraph, p: &PrimPoint) -> VertexSet {
    match p {
        PrimPoint::Gamma(m) => m.clone(),
        PrimPoint::Breaking(v) => g.up_closure(&BTreeSet::from([*v])),
        PrimPoint::Loop { cycle, .. } => g.up_closure(cycle),
    }
}

fn infinitely_many_from(g: &DirectedGraph, v: usize, m: &VertexSet) -> bool {
    g.in_count_from(v, |u| m.contains(&u)) == Count::Infinite
}

fn specializes_in(g: &DirectedGraph, spec: &PrimSpectrum, p1: &PrimPoint, p2: &PrimPoint) -> bool {
    let m1 = tail_of(g, p1);
    match p2 {
        PrimPoint::Loop { cycle: l2, fiber: w2 } => match p1 {
            PrimPoint::Loop { cycle: l1, fiber: w1 } if l1 == l2 => w1 == w2,
            _ => l2.is_subset(&m1),
        },
        PrimPoint::Breaking(v) => p1 == p2 || (m1.contains(v) && infinitely_many_from(g, *v, &m1)),
        PrimPoint::Gamma(m2) => {
            let tail = spec.tail(m2).expect("checked by caller");
            match tail.least {
                LeastData::UniqueLeastNoSelfLoop(u) => p1 == p2 || (m1.contains(&u) && infinitely_many_from(g, u, &m1)),
                _ => m2.is_subset(&m1),
            }
        }
    }
}

/// Whether `p2` lies in the closure of `{p1}`.
pub fn specializes(g: &DirectedGraph, p1: &PrimPoint, p2: &PrimPoint) -> Result<bool, GraphError> {
    let spec = prim_spectrum(g);
    spec.check(g, p1)?;
    spec.check(g, p2)?;
    Ok(specializes_in(g, &spec, p1, p2))
}

/// A closed subset of the spectrum: finitely many isolated-type points plus a
/// closed subset of each loop fibre.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosedPrimSet {
    pub points: BTreeSet<PrimPoint>,
    pub fibers: BTreeMap<VertexSet, CircleSet>,
}

impl ClosedPrimSet {
    pub fn contains(&self, p: &PrimPoint) -> bool {
        match p {
            PrimPoint::Loop { cycle, fiber } => self.fibers.get(cycle).is_some_and(|c| c.contains(*fiber)),
            _ => self.points.contains(p),
        }
    }

    pub fn is_subset(&self, other: &ClosedPrimSet) -> bool {
        self.points.is_subset(&other.points)
            && self.fibers.iter().all(|(l, c)| other.fibers.get(l).is_some_and(|d| c.union(d) == *d))
    }

    fn add_fiber(&mut self, l: &VertexSet, c: &CircleSet) -> bool {
        if c.is_empty() {
            return false;
        }
        let entry = self.fibers.entry(l.clone()).or_insert_with(CircleSet::empty);
        let joined = entry.union(c);
        let changed = joined != *entry;
        *entry = joined;
        changed
    }
}

/// Closure of `seeds` together with the fibre subsets in `fiber_seeds`.
pub fn closure(
    g: &DirectedGraph,
    seeds: &[PrimPoint],
    fiber_seeds: &BTreeMap<VertexSet, CircleSet>,
) -> Result<ClosedPrimSet, GraphError> {
    let spec = prim_spectrum(g);
    for p in seeds {
        spec.check(g, p)?;
    }
    for l in fiber_seeds.keys() {
        if !spec.loops.contains(l) {
            return Err(GraphError::NotInSpectrum(format!("loop {}", g.fmt_set(l))));
        }
    }
    let mut out = ClosedPrimSet::default();
    for p in seeds {
        match p {
            PrimPoint::Loop { cycle, fiber } => {
                out.add_fiber(cycle, &CircleSet::point(*fiber));
            }
            _ => {
                out.points.insert(p.clone());
            }
        }
    }
    for (l, c) in fiber_seeds {
        out.add_fiber(l, c);
    }
    let finite = spec.finite_points();
    loop {
        // Any point of a fibre behaves the same towards points outside it.
        let sources: Vec<PrimPoint> = out
            .points
            .iter()
            .cloned()
            .chain(out.fibers.keys().map(|l| PrimPoint::Loop { cycle: l.clone(), fiber: RationalAngle::ZERO }))
            .collect();
        let mut changed = false;
        for p in &sources {
            for q in &finite {
                if !out.points.contains(q) && specializes_in(g, &spec, p, q) {
                    out.points.insert(q.clone());
                    changed = true;
                }
            }
            for l in &spec.loops {
                let same = matches!(p, PrimPoint::Loop { cycle, .. } if cycle == l);
                let q = PrimPoint::Loop { cycle: l.clone(), fiber: RationalAngle::ZERO };
                if !same && specializes_in(g, &spec, p, &q) {
                    changed |= out.add_fiber(l, &CircleSet::full());
                }
            }
        }
        if !changed {
            return Ok(out);
        }
    }
}
