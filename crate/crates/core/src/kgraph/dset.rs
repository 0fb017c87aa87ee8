//! Validation of candidate ideal descriptions `D`, subsets of the vertices
//! times `T^k`, at a finite horizon.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::path::paths_with_range;
use super::{KGraph, KGraphError, KPath, VertexSet};
use crate::lattice::{annihilator, CharacterVector, CircleSet, IntSubgroup, Rat, RationalAngle, TorusSubgroupDesc};

/// A piece of a fibre `D_v`: a product of closed circle sets or a finite list
/// of characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusPiece {
    Product(Vec<CircleSet>),
    Points(Vec<CharacterVector>),
}

impl TorusPiece {
    fn contains(&self, z: &CharacterVector) -> bool {
        match self {
            TorusPiece::Product(cs) => cs.iter().zip(&z.0).all(|(c, &a)| c.contains(a)),
            TorusPiece::Points(ps) => ps.contains(z),
        }
    }

    fn interior_contains(&self, z: &CharacterVector) -> bool {
        match self {
            TorusPiece::Product(cs) => cs.iter().zip(&z.0).all(|(c, &a)| c.interior_contains(a)),
            TorusPiece::Points(_) => false,
        }
    }
}

/// The fibres `D_v`, each a finite union of pieces. Missing vertices have
/// empty fibres.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DSet {
    pub fibres: BTreeMap<usize, Vec<TorusPiece>>,
}

impl DSet {
    pub fn from_names(kg: &KGraph, named: &BTreeMap<String, Vec<TorusPiece>>) -> Result<DSet, KGraphError> {
        let mut fibres = BTreeMap::new();
        for (name, pieces) in named {
            fibres.insert(kg.vertex(name)?, pieces.clone());
        }
        let d = DSet { fibres };
        d.check_rank(kg.k())?;
        Ok(d)
    }

    pub fn full(kg: &KGraph) -> DSet {
        let piece = TorusPiece::Product(vec![CircleSet::full(); kg.k()]);
        DSet { fibres: (0..kg.vertex_count()).map(|v| (v, vec![piece.clone()])).collect() }
    }

    fn check_rank(&self, k: usize) -> Result<(), KGraphError> {
        for pieces in self.fibres.values() {
            for p in pieces {
                let ok = match p {
                    TorusPiece::Product(cs) => cs.len() == k,
                    TorusPiece::Points(ps) => ps.iter().all(|z| z.k() == k),
                };
                if !ok {
                    return Err(KGraphError::MalformedDSet(format!("piece of the wrong rank, expected {k}")));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: usize, z: &CharacterVector) -> bool {
        self.fibres.get(&v).is_some_and(|ps| ps.iter().any(|p| p.contains(z)))
    }

    /// Vertices whose fibre contains `z`.
    pub fn slice(&self, z: &CharacterVector) -> VertexSet {
        self.fibres.keys().copied().filter(|&v| self.contains(v, z)).collect()
    }

    /// Whether the coset `z + sub` lies in the interior of `D_v`. A coset of
    /// positive dimension must fit inside the interior of one product piece;
    /// a finite coset is tested point by point against the pieces.
    fn coset_in_interior(&self, v: usize, z: &CharacterVector, sub: &TorusSubgroupDesc) -> bool {
        let Some(pieces) = self.fibres.get(&v) else { return false };
        let finite = TorusSubgroupDesc { k: sub.k, generators: sub.generators.clone(), connected_dims: Vec::new() };
        let offsets = finite.elements().expect("no connected part");
        if sub.dim() == 0 {
            return offsets.iter().all(|o| {
                let w = z.add(o);
                pieces.iter().any(|p| p.interior_contains(&w))
            });
        }
        let spread: Vec<bool> = (0..sub.k).map(|i| sub.connected_dims.iter().any(|c| c[i] != 0)).collect();
        pieces.iter().any(|p| match p {
            TorusPiece::Points(_) => false,
            TorusPiece::Product(cs) => (0..sub.k).all(|i| {
                if spread[i] {
                    cs[i].is_full()
                } else {
                    offsets.iter().all(|o| cs[i].interior_contains(z.0[i] + o.0[i]))
                }
            }),
        })
    }

    /// Sample characters: in each coordinate, every breakpoint of every piece
    /// and one point inside each gap between consecutive breakpoints. Each
    /// fibre is constant on the cells these points represent.
    fn cell_representatives(&self, k: usize) -> Vec<CharacterVector> {
        let mut cuts = vec![BTreeSet::new(); k];
        for pieces in self.fibres.values() {
            for p in pieces {
                match p {
                    TorusPiece::Product(cs) => {
                        for (i, c) in cs.iter().enumerate() {
                            cuts[i].extend(c.region().breakpoints());
                        }
                    }
                    TorusPiece::Points(ps) => {
                        for z in ps {
                            for (i, &a) in z.0.iter().enumerate() {
                                cuts[i].insert(a);
                            }
                        }
                    }
                }
            }
        }
        let axes: Vec<Vec<RationalAngle>> = cuts
            .into_iter()
            .map(|c| {
                let c: Vec<RationalAngle> = c.into_iter().collect();
                if c.is_empty() {
                    return vec![RationalAngle::ZERO];
                }
                let mut reps = c.clone();
                for (i, a) in c.iter().enumerate() {
                    let b = c.get(i + 1).map_or(c[0].value() + 1, |b| b.value());
                    reps.push(RationalAngle::from_ratio((a.value() + b) / Rat::from_integer(2)));
                }
                reps.sort();
                reps
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in axes {
            out = out
                .into_iter()
                .flat_map(|z: Vec<RationalAngle>| axis.iter().map(move |&a| [z.clone(), vec![a]].concat()))
                .collect();
        }
        out.into_iter().map(CharacterVector).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DViolation {
    /// The slice at `z` contains `r(e)` but not `s(e)`.
    NotHereditary { z: CharacterVector, edge: usize },
    /// The slice at `z` misses `vertex` although every edge of colour `color`
    /// (1-based) into it comes from the slice.
    NotSaturated { z: CharacterVector, vertex: usize, color: usize },
    /// No vertex along `path` has the coset of `z` cut out by the relations
    /// holding on `path` inside the interior of its fibre.
    NotOpen { vertex: usize, z: CharacterVector, path: KPath },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DSetReport {
    ValidAtHorizon(u32),
    Violation(DViolation),
}

/// Checks that every slice `{v : (v, z) in D}` is hereditary and saturated,
/// and the openness condition along paths of degree `(h, .., h)`.
///
/// For a path `xi` from `v`, the relation pairs `(a, b)` with `a, b <= h` and
/// `xi(a, a + r) = xi(b, b + r)`, `r = h - (a v b)`, generate a lattice `L`.
/// Some vertex `xi(m)` must contain `z + L^perp` in the interior of its
/// fibre; this is the limit of the neighbourhood condition as its radius
/// shrinks.
pub fn validate_d_set(kg: &KGraph, d: &DSet, horizon: u32) -> Result<DSetReport, KGraphError> {
    let k = kg.k();
    d.check_rank(k)?;
    let reps = d.cell_representatives(k);
    for z in &reps {
        if let Some(v) = slice_violation(kg, &d.slice(z), z) {
            return Ok(DSetReport::Violation(v));
        }
    }
    let h = vec![horizon; k];
    for &v in d.fibres.keys() {
        let paths = paths_with_range(kg, v, &h, None);
        for z in reps.iter().filter(|z| d.contains(v, z)) {
            for xi in &paths {
                let lattice = relation_lattice(kg, xi, &h);
                let perp = annihilator(&lattice);
                let ok = cube(&h).iter().any(|m| {
                    let w = xi.vertex_at(kg, m).expect("within the horizon");
                    d.coset_in_interior(w, z, &perp)
                });
                if !ok {
                    return Ok(DSetReport::Violation(DViolation::NotOpen {
                        vertex: v,
                        z: z.clone(),
                        path: xi.clone(),
                    }));
                }
            }
        }
    }
    Ok(DSetReport::ValidAtHorizon(horizon))
}

fn slice_violation(kg: &KGraph, h: &VertexSet, z: &CharacterVector) -> Option<DViolation> {
    for (i, e) in kg.edges().iter().enumerate() {
        if h.contains(&e.range) && !h.contains(&e.source) {
            return Some(DViolation::NotHereditary { z: z.clone(), edge: i });
        }
    }
    for v in (0..kg.vertex_count()).filter(|v| !h.contains(v)) {
        for c in 0..kg.k() {
            if kg.in_edges(v, c).iter().all(|&e| h.contains(&kg.edge(e).source)) {
                return Some(DViolation::NotSaturated { z: z.clone(), vertex: v, color: c + 1 });
            }
        }
    }
    None
}

fn cube(h: &[u32]) -> Vec<Vec<u32>> {
    super::path::degrees_up_to(h)
}

fn relation_lattice(kg: &KGraph, xi: &KPath, h: &[u32]) -> IntSubgroup {
    let pts = cube(h);
    let mut gens = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let r: Vec<u32> = (0..h.len()).map(|j| h[j] - a[j].max(b[j])).collect();
            let ar: Vec<u32> = a.iter().zip(&r).map(|(x, y)| x + y).collect();
            let br: Vec<u32> = b.iter().zip(&r).map(|(x, y)| x + y).collect();
            if xi.segment(kg, a, &ar).expect("in range") == xi.segment(kg, b, &br).expect("in range") {
                gens.push(a.iter().zip(b).map(|(&x, &y)| x as i64 - y as i64).collect());
            }
        }
    }
    IntSubgroup::new(h.len(), &gens).expect("rank matches")
}
