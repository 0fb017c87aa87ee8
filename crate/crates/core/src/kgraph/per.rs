//! The equivalence `mu ~_M nu`, the periodicity group of a tail and its
//! periodic core.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{paths_of_degree, paths_with_range};
use super::{KGraph, KGraphError, KPath, VertexSet};
use crate::lattice::IntSubgroup;

/// Decides whether `mu x = nu x` for every infinite path `x` in the tail `m`
/// with range `s(mu) = s(nu)`.
///
/// After cancelling the common initial segment the residual pair keeps fixed
/// degrees, so the reachable pairs form a finite automaton. Every extension
/// by one edge must agree on its first edge.
pub fn path_equiv(kg: &KGraph, m: &VertexSet, mu: &KPath, nu: &KPath) -> Result<bool, KGraphError> {
    if mu.source() != nu.source() {
        return Err(KGraphError::SourceMismatch);
    }
    if !m.contains(&mu.source()) {
        return Err(KGraphError::PathOutsideTail);
    }
    let meet: Vec<u32> = mu.degree().iter().zip(nu.degree()).map(|(a, b)| *a.min(b)).collect();
    let zero = vec![0; kg.k()];
    if mu.segment(kg, &zero, &meet)? != nu.segment(kg, &zero, &meet)? {
        return Ok(false);
    }
    let start = (mu.segment(kg, &meet, mu.degree())?, nu.segment(kg, &meet, nu.degree())?);
    if start.0.is_vertex() && start.1.is_vertex() {
        return Ok(true);
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for c in 0..kg.k() {
            let mut unit = zero.clone();
            unit[c] = 1;
            for &e in kg.in_edges(a.source(), c) {
                if !m.contains(&kg.edge(e).source) {
                    continue;
                }
                let (ea, eb) = (a.extend(kg, e)?, b.extend(kg, e)?);
                if ea.segment(kg, &zero, &unit)? != eb.segment(kg, &zero, &unit)? {
                    return Ok(false);
                }
                let next = (ea.segment(kg, &unit, ea.degree())?, eb.segment(kg, &unit, eb.degree())?);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerStatus {
    /// The subgroup found at this bound persists up to the requested bound.
    StabilizedAt(Vec<u32>),
    /// The subgroup was still growing at the requested bound.
    LowerBoundOnly,
}

/// A pair `mu ~ nu` with `d(mu) - d(nu) = l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerWitness {
    pub l: Vec<i64>,
    pub mu: KPath,
    pub nu: KPath,
}

#[derive(Clone, Debug)]
pub struct PerResult {
    pub per: IntSubgroup,
    pub bound: Vec<u32>,
    pub status: PerStatus,
    /// One witness per basis row of `per`.
    pub witnesses: Vec<PerWitness>,
}

impl PerResult {
    pub fn is_stabilized(&self) -> bool {
        matches!(self.status, PerStatus::StabilizedAt(_))
    }
}

pub(crate) fn split(l: &[i64]) -> (Vec<u32>, Vec<u32>) {
    let pos = l.iter().map(|&x| x.max(0) as u32).collect();
    let neg = l.iter().map(|&x| (-x).max(0) as u32).collect();
    (pos, neg)
}

/// A pair `mu ~ nu` in the tail with degrees `(l+, l-)`, if one exists.
pub(crate) fn find_witness(kg: &KGraph, m: &VertexSet, l: &[i64]) -> Result<Option<PerWitness>, KGraphError> {
    let (p, q) = split(l);
    let mut by_source: BTreeMap<usize, Vec<KPath>> = BTreeMap::new();
    for nu in paths_of_degree(kg, &q, m) {
        by_source.entry(nu.source()).or_default().push(nu);
    }
    let pairs: Vec<(KPath, KPath)> = paths_of_degree(kg, &p, m)
        .into_iter()
        .flat_map(|mu| by_source.get(&mu.source()).into_iter().flatten().map(move |nu| (mu.clone(), nu.clone())))
        .collect();
    pairs
        .into_par_iter()
        .map(|(mu, nu)| path_equiv(kg, m, &mu, &nu).map(|ok| ok.then_some((mu, nu))))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(|found| found.flatten().map(|(mu, nu)| PerWitness { l: l.to_vec(), mu, nu }))
}

/// Vectors `l` with `|l_i| <= bound_i`, sign-normalized (first nonzero entry
/// positive), shortest first.
fn box_vectors(bound: &[u32]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        let b = b as i64;
        out = out.into_iter().flat_map(|v: Vec<i64>| (-b..=b).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0));
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max(), v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

/// The subgroup generated by the degree differences of equivalent pairs with
/// degrees bounded by `bound`, computed along the chain of bounds
/// `min(bound, t)` for `t = 1, 2, ..`.
pub fn per_subgroup(kg: &KGraph, m: &VertexSet, bound: &[u32]) -> Result<PerResult, KGraphError> {
    let k = kg.k();
    if bound.len() != k {
        return Err(KGraphError::RankMismatch { expected: k, found: bound.len() });
    }
    if bound.contains(&0) {
        return Err(KGraphError::BoundTooSmall);
    }
    let top = *bound.iter().max().expect("k >= 1");
    let mut group = IntSubgroup::zero(k);
    let mut history = Vec::new();
    let mut tested = HashSet::new();
    for t in 1..=top {
        let bt: Vec<u32> = bound.iter().map(|&b| b.min(t)).collect();
        for l in box_vectors(&bt) {
            if !tested.insert(l.clone()) || group.contains(&l) {
                continue;
            }
            if find_witness(kg, m, &l)?.is_some() {
                group = group.with(&l);
            }
        }
        history.push((bt, group.clone()));
    }
    let first = history.iter().position(|(_, g)| *g == group).expect("last entry matches");
    let status = match history.get(first + 1) {
        Some((b, _)) => PerStatus::StabilizedAt(b.clone()),
        None => PerStatus::LowerBoundOnly,
    };
    let mut witnesses = Vec::new();
    for row in group.basis() {
        let w = find_witness(kg, m, row)?.expect("every element of the group has a witness");
        witnesses.push(w);
    }
    Ok(PerResult { per: group, bound: bound.to_vec(), status, witnesses })
}

/// Vertices `v` of the tail such that every infinite path `x` with range `v`
/// satisfies `sigma^p x = sigma^q x` for each basis row `l = p - q` of the
/// periodicity group. The result must be nonempty and hereditary in the tail.
pub fn m_per(kg: &KGraph, m: &VertexSet, per: &PerResult) -> Result<VertexSet, KGraphError> {
    if !per.is_stabilized() {
        return Err(KGraphError::NotStabilized);
    }
    let rows = per.per.basis().to_vec();
    let core: Vec<usize> = m
        .par_iter()
        .map(|&v| -> Result<Option<usize>, KGraphError> {
            for l in &rows {
                let (p, q) = split(l);
                let w: Vec<u32> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
                for rho in paths_with_range(kg, v, &w, Some(m)) {
                    if !path_equiv(kg, m, &rho.segment(kg, &p, &w)?, &rho.segment(kg, &q, &w)?)? {
                        return Ok(None);
                    }
                }
            }
            Ok(Some(v))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let core: VertexSet = core.into_iter().collect();
    if core.is_empty() {
        return Err(KGraphError::MPerEmpty);
    }
    let hereditary =
        kg.edges().iter().all(|e| !core.contains(&e.range) || !m.contains(&e.source) || core.contains(&e.source));
    if !hereditary {
        return Err(KGraphError::MPerNotHereditary);
    }
    Ok(core)
}
