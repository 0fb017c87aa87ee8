//! Points `(M, chi)` of the primitive spectrum and the finite-path
//! convergence test between them.

use std::collections::HashMap;

use super::path::{degrees_up_to, paths_with_range};
use super::per::split;
use super::tails::is_tail;
use super::{ktails, m_per, per_subgroup, KGraph, KGraphError, KPath, PerResult, VertexSet};
use crate::digraph::{DirectedGraph, GraphError, PrimPoint};
use crate::lattice::{char_eq_on, CharacterSpace, CharacterVector, Rat, RationalAngle};

/// A maximal tail with its periodicity group, periodic core and character
/// space `T^k / Per^perp`.
#[derive(Clone, Debug)]
pub struct KPrimComponent {
    pub tail: VertexSet,
    pub per: PerResult,
    pub m_per: VertexSet,
    pub chars: CharacterSpace,
}

/// A point `(M, chi)`; `chi` only matters through its restriction to `Per`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPrimPoint {
    pub tail: VertexSet,
    pub chi: CharacterVector,
}

impl KPrimPoint {
    /// The point of the imported 1-graph matching a point of the graph's
    /// spectrum: a gamma tail `M` becomes `(M, 0)`, and the point `w` of the
    /// fibre over a primitive loop `L` becomes `(Up(L), w / |L|)`.
    pub fn from_digraph_point(g: &DirectedGraph, p: &PrimPoint) -> Result<KPrimPoint, KGraphError> {
        match p {
            PrimPoint::Gamma(m) => Ok(KPrimPoint { tail: m.clone(), chi: CharacterVector::zero(1) }),
            PrimPoint::Loop { cycle, fiber } => {
                let t = RationalAngle::from_ratio(fiber.value() / Rat::from_integer(cycle.len() as i64));
                Ok(KPrimPoint { tail: g.up_closure(cycle), chi: CharacterVector(vec![t]) })
            }
            PrimPoint::Breaking(v) => Err(KGraphError::Graph(GraphError::NotRowFinite(g.name(*v).to_string()))),
        }
    }

    pub fn same_point(&self, other: &KPrimPoint, per: &PerResult) -> bool {
        self.tail == other.tail && char_eq_on(&per.per, &self.chi, &other.chi)
    }
}

/// One component per maximal tail. Every periodicity group must stabilize
/// within `bound`.
pub fn kprim_spectrum(kg: &KGraph, bound: &[u32]) -> Result<Vec<KPrimComponent>, KGraphError> {
    ktails(kg).into_iter().map(|m| component(kg, &m, bound)).collect()
}

fn component(kg: &KGraph, m: &VertexSet, bound: &[u32]) -> Result<KPrimComponent, KGraphError> {
    if !is_tail(kg, m) {
        return Err(KGraphError::NotATail);
    }
    let per = per_subgroup(kg, m, bound)?;
    if !per.is_stabilized() {
        return Err(KGraphError::NotStabilized);
    }
    let core = m_per(kg, m, &per)?;
    let chars = CharacterSpace::of(&per.per);
    Ok(KPrimComponent { tail: m.clone(), per, m_per: core, chars })
}

#[derive(Clone, Debug)]
pub struct KConvergeParams {
    pub lambda0: KPath,
    pub eps: Rat,
    /// Finite subset of the target's periodicity group.
    pub f: Vec<Vec<i64>>,
    /// Degree bound for the extension `mu(d(lambda0), d(mu))` searched for,
    /// and for the periodicity groups.
    pub bound: Vec<u32>,
}

/// A path `mu` extending `lambda0` and a degree `m` meeting the conditions
/// for sample `n` (counted from 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWitness {
    pub n: usize,
    pub mu: KPath,
    pub m: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KConvergence {
    /// Every sample from `from` on (counted from 1) has a witness.
    Certificate { from: usize, witnesses: Vec<KWitness> },
    /// The last sample has no witness; `n` is the first sample without one.
    FailAt(usize),
}

/// Tests the finite-path convergence condition for the sequence `seq` towards
/// `target`. The list is read as a sequence that stays at its last entry, so
/// it converges when some final stretch of samples all have witnesses.
pub fn k_converges(
    kg: &KGraph,
    target: &KPrimPoint,
    seq: &[KPrimPoint],
    params: &KConvergeParams,
) -> Result<KConvergence, KGraphError> {
    converges_cached(kg, target, seq, params, &mut HashMap::new())
}

fn converges_cached(
    kg: &KGraph,
    target: &KPrimPoint,
    seq: &[KPrimPoint],
    params: &KConvergeParams,
    cache: &mut HashMap<VertexSet, KPrimComponent>,
) -> Result<KConvergence, KGraphError> {
    let t = tail_component(kg, &target.tail, &params.bound, cache)?;
    check_params(kg, &t, target, params)?;
    let mut found = Vec::with_capacity(seq.len());
    for (i, p) in seq.iter().enumerate() {
        check_rank(kg, &p.chi)?;
        let comp = tail_component(kg, &p.tail, &params.bound, cache)?;
        found.push(search(kg, &comp, &target.chi, &p.chi, params).map(|(mu, m)| KWitness { n: i + 1, mu, m }));
    }
    let Some(Some(_)) = found.last() else {
        let first = found.iter().position(Option::is_none).map_or(seq.len(), |i| i + 1);
        return Ok(KConvergence::FailAt(first));
    };
    let from = found.iter().rposition(Option::is_none).map_or(0, |i| i + 1);
    Ok(KConvergence::Certificate { from: from + 1, witnesses: found.into_iter().skip(from).flatten().collect() })
}

fn tail_component(
    kg: &KGraph,
    m: &VertexSet,
    bound: &[u32],
    cache: &mut HashMap<VertexSet, KPrimComponent>,
) -> Result<KPrimComponent, KGraphError> {
    if let Some(c) = cache.get(m) {
        return Ok(c.clone());
    }
    let c = component(kg, m, bound)?;
    cache.insert(m.clone(), c.clone());
    Ok(c)
}

fn check_rank(kg: &KGraph, chi: &CharacterVector) -> Result<(), KGraphError> {
    if chi.k() != kg.k() {
        return Err(KGraphError::RankMismatch { expected: kg.k(), found: chi.k() });
    }
    Ok(())
}

fn check_params(
    kg: &KGraph,
    t: &KPrimComponent,
    target: &KPrimPoint,
    params: &KConvergeParams,
) -> Result<(), KGraphError> {
    check_rank(kg, &target.chi)?;
    if !t.tail.contains(&params.lambda0.source()) {
        return Err(KGraphError::PathOutsideTail);
    }
    if !t.m_per.contains(&params.lambda0.range()) {
        return Err(KGraphError::NotInPeriodicCore);
    }
    for l in &params.f {
        if l.len() != kg.k() {
            return Err(KGraphError::RankMismatch { expected: kg.k(), found: l.len() });
        }
        if !t.per.per.contains(l) {
            return Err(KGraphError::NotInPer(l.clone()));
        }
    }
    Ok(())
}

/// The first `(mu, m)` (shortest `mu`, then smallest `m`) meeting the
/// conditions for a sample in the component `comp` with character `chi_n`.
fn search(
    kg: &KGraph,
    comp: &KPrimComponent,
    chi: &CharacterVector,
    chi_n: &CharacterVector,
    params: &KConvergeParams,
) -> Option<(KPath, Vec<u32>)> {
    let lambda0 = &params.lambda0;
    if !comp.tail.contains(&lambda0.source()) {
        return None;
    }
    let active: Vec<(Vec<u32>, Vec<u32>, bool)> = params
        .f
        .iter()
        .filter(|l| comp.per.per.contains(l))
        .map(|l| {
            let (p, q) = split(l);
            (p, q, chi.pair(l).chord_lt(&chi_n.pair(l), params.eps))
        })
        .collect();
    for deg in degrees_up_to(&params.bound) {
        for rho in paths_with_range(kg, lambda0.source(), &deg, Some(&comp.tail)) {
            let mu = lambda0.compose(kg, &rho).expect("rho starts at the source of lambda0");
            for m in degrees_up_to(mu.degree()) {
                let at = mu.vertex_at(kg, &m).expect("m is within the degree");
                if comp.m_per.contains(&at) && meets(kg, &mu, &m, &active) {
                    return Some((mu, m));
                }
            }
        }
    }
    None
}

fn meets(kg: &KGraph, mu: &KPath, m: &[u32], active: &[(Vec<u32>, Vec<u32>, bool)]) -> bool {
    let d = mu.degree();
    active.iter().all(|(p, q, close)| {
        let pm: Vec<u32> = p.iter().zip(m).map(|(a, b)| a + b).collect();
        let qm: Vec<u32> = q.iter().zip(m).map(|(a, b)| a + b).collect();
        if pm.iter().zip(d).any(|(a, b)| a > b) || qm.iter().zip(d).any(|(a, b)| a > b) {
            return false;
        }
        *close || mu.segment(kg, p, &pm).expect("in range") != mu.segment(kg, q, &qm).expect("in range")
    })
}

/// Outcome of the bounded search for a specialization certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KSpecialization {
    Yes,
    NoWithinBound { lambda0: KPath, eps: Rat, f: Vec<Vec<i64>> },
}

/// Whether `p2` lies in the closure of `{p1}`, tested by running the
/// convergence search for the constant sequence `p1` over every `lambda0` of
/// degree at most `bound` ending in the periodic core of `p2`, with
/// `eps = 1/2, 1/4, 1/8, 1/16` and `F` the basis of the target's group.
pub fn k_specializes(
    kg: &KGraph,
    p1: &KPrimPoint,
    p2: &KPrimPoint,
    bound: &[u32],
) -> Result<KSpecialization, KGraphError> {
    let mut cache = HashMap::new();
    let t = tail_component(kg, &p2.tail, bound, &mut cache)?;
    check_rank(kg, &p1.chi)?;
    check_rank(kg, &p2.chi)?;
    tail_component(kg, &p1.tail, bound, &mut cache)?;
    let f = t.per.per.basis().to_vec();
    let seq = [p1.clone()];
    for d in degrees_up_to(bound) {
        for &v in &t.m_per {
            for lambda0 in paths_with_range(kg, v, &d, Some(&t.tail)) {
                for eps in [2, 4, 8, 16].map(|den| Rat::new(1, den)) {
                    let params = KConvergeParams { lambda0: lambda0.clone(), eps, f: f.clone(), bound: bound.to_vec() };
                    if let KConvergence::FailAt(_) = converges_cached(kg, p2, &seq, &params, &mut cache)? {
                        return Ok(KSpecialization::NoWithinBound { lambda0, eps, f });
                    }
                }
            }
        }
    }
    Ok(KSpecialization::Yes)
}
