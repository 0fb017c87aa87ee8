//! Finite groups acting on finite sets: stabilizers, duals of abelian
//! stabilizers, the space of pairs `(x, chi)` with `chi` a character of the
//! stabilizer of `x`, and its quasi-orbits.
//!
//! Finite groups are amenable, so the spectrum is described by these pairs
//! with no further hypotheses to check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{annihilator, smith_normal_form, IntSubgroup, RationalAngle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("unknown group element {0:?}")]
    UnknownElement(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("duplicate name {0:?}")]
    Duplicate(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("subgroup {0:?} is not abelian")]
    NonAbelianSubgroup(Vec<String>),
    #[error("stabilizer of {0:?} is not abelian")]
    NonAbelianStabilizer(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRepr {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

/// The JSON form of an action. Elements left out of `act` act trivially, as
/// do points left out of an element's map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRepr {
    pub group: GroupRepr,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(default)]
    pub act: BTreeMap<String, BTreeMap<String, String>>,
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>, TransformError> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(TransformError::Duplicate(n.clone()));
        }
    }
    Ok(index)
}

/// A group given by its Cayley table, `table[a][b] = ab`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup, TransformError> {
        let n = names.len();
        let index = index_names(&names)?;
        if n == 0 {
            return Err(TransformError::NotAGroup("no elements".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(TransformError::NotAGroup(format!("table must be {n} x {n} over the elements")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| TransformError::NotAGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| TransformError::NotAGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(b);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(TransformError::NotAGroup(format!(
                            "({} {}) {} != {} ({} {})",
                            names[a], names[b], names[c], names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, index, table, identity, inverse })
    }

    pub fn from_repr(r: &GroupRepr) -> Result<FiniteGroup, TransformError> {
        let index = index_names(&r.elements)?;
        let look = |n: &String| index.get(n).copied().ok_or_else(|| TransformError::UnknownElement(n.clone()));
        let table = r.table.iter().map(|row| row.iter().map(look).collect()).collect::<Result<_, _>>()?;
        FiniteGroup::from_table(r.elements.clone(), table)
    }

    pub fn to_repr(&self) -> GroupRepr {
        GroupRepr {
            elements: self.names.clone(),
            table: self.table.iter().map(|r| r.iter().map(|&c| self.names[c].clone()).collect()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize, TransformError> {
        self.index.get(name).copied().ok_or_else(|| TransformError::UnknownElement(name.to_string()))
    }

    pub fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&a| self.names[a].clone()).collect()
    }

    pub fn commute(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| set.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = [self.identity].into();
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if seen.insert(b) {
                    frontier.push(b);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// A group action `act[g][x] = gx`.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    group: FiniteGroup,
    points: Vec<String>,
    index: HashMap<String, usize>,
    act: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn new(group: FiniteGroup, points: Vec<String>, act: Vec<Vec<usize>>) -> Result<FiniteAction, TransformError> {
        let index = index_names(&points)?;
        let n = points.len();
        if act.len() != group.order() || act.iter().any(|r| r.len() != n || r.iter().any(|&y| y >= n)) {
            return Err(TransformError::NotAnAction("every element needs an image for every point".into()));
        }
        if let Some(x) = (0..n).find(|&x| act[group.identity()][x] != x) {
            return Err(TransformError::NotAnAction(format!("the identity moves {}", points[x])));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for x in 0..n {
                    if act[group.mul(g, h)][x] != act[g][act[h][x]] {
                        return Err(TransformError::NotAnAction(format!(
                            "({} {}) {} != {} ({} {})",
                            group.name(g),
                            group.name(h),
                            points[x],
                            group.name(g),
                            group.name(h),
                            points[x]
                        )));
                    }
                }
            }
        }
        Ok(FiniteAction { group, points, index, act })
    }

    pub fn from_repr(r: &ActionRepr) -> Result<FiniteAction, TransformError> {
        let group = FiniteGroup::from_repr(&r.group)?;
        let index = index_names(&r.x)?;
        let look = |n: &String| index.get(n).copied().ok_or_else(|| TransformError::UnknownPoint(n.clone()));
        let mut act: Vec<Vec<usize>> = vec![(0..r.x.len()).collect(); group.order()];
        for (g, map) in &r.act {
            let g = group.element(g)?;
            for (x, y) in map {
                act[g][look(x)?] = look(y)?;
            }
        }
        FiniteAction::new(group, r.x.clone(), act)
    }

    pub fn to_repr(&self) -> ActionRepr {
        let act = (0..self.group.order())
            .filter_map(|g| {
                let moved: BTreeMap<String, String> = (0..self.len())
                    .filter(|&x| self.act[g][x] != x)
                    .map(|x| (self.points[x].clone(), self.points[self.act[g][x]].clone()))
                    .collect();
                (!moved.is_empty()).then(|| (self.group.name(g).to_string(), moved))
            })
            .collect();
        ActionRepr { group: self.group.to_repr(), x: self.points.clone(), act }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn point(&self, name: &str) -> Result<usize, TransformError> {
        self.index.get(name).copied().ok_or_else(|| TransformError::UnknownPoint(name.to_string()))
    }

    /// Orbits of `X`, sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> = (0..self.group.order()).map(|g| self.apply(g, x)).collect();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilizer {
    pub elements: Vec<usize>,
    pub abelian: bool,
}

pub fn stabilizer(a: &FiniteAction, x: usize) -> Stabilizer {
    let elements: Vec<usize> = (0..a.group.order()).filter(|&g| a.apply(g, x) == x).collect();
    let abelian = a.group.commute(&elements);
    Stabilizer { elements, abelian }
}

/// The characters of a finite abelian subgroup `H`, each stored as its values
/// on `subgroup` in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGroup {
    pub subgroup: Vec<usize>,
    pub invariant_factors: Vec<i64>,
    pub characters: Vec<Vec<RationalAngle>>,
}

impl DualGroup {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// `chi(h)` for the character at position `chi`.
    pub fn eval(&self, chi: usize, h: usize) -> RationalAngle {
        let i = self.subgroup.binary_search(&h).expect("element of the subgroup");
        self.characters[chi][i]
    }

    pub fn position(&self, values: &[RationalAngle]) -> Option<usize> {
        self.characters.iter().position(|c| c == values)
    }
}

/// Presents `H` on a small generating set `S`, so that `H = Z^S / R`, and
/// reads the characters off `R^perp`.
pub fn dual_group(g: &FiniteGroup, h: &[usize]) -> Result<DualGroup, TransformError> {
    let mut subgroup = h.to_vec();
    subgroup.sort_unstable();
    subgroup.dedup();
    if !g.commute(&subgroup) {
        return Err(TransformError::NonAbelianSubgroup(g.names(&subgroup)));
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut span = g.generated(&gens);
    for &a in &subgroup {
        if span.binary_search(&a).is_err() {
            gens.push(a);
            span = g.generated(&gens);
        }
    }
    if span != subgroup {
        return Err(TransformError::NotAGroup(format!("{:?} is not a subgroup", g.names(&subgroup))));
    }
    let s = gens.len();
    // Exponent vectors over `gens`, found breadth first from the identity.
    let mut exps: HashMap<usize, Vec<i64>> = HashMap::from([(g.identity(), vec![0; s])]);
    let mut frontier = vec![g.identity()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in frontier {
            for (i, &x) in gens.iter().enumerate() {
                let b = g.mul(x, a);
                if !exps.contains_key(&b) {
                    let mut e = exps[&a].clone();
                    e[i] += 1;
                    exps.insert(b, e);
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    let mut rows = Vec::new();
    for (i, &x) in gens.iter().enumerate() {
        for &a in &subgroup {
            let mut r: Vec<i64> = exps[&a].iter().zip(&exps[&g.mul(x, a)]).map(|(p, q)| p - q).collect();
            r[i] += 1;
            rows.push(r);
        }
    }
    let relations = IntSubgroup::new(s, &rows).expect("rows have length |S|");
    let invariant_factors =
        smith_normal_form(relations.basis(), s).invariants().into_iter().filter(|&d| d > 1).collect();
    let chars = annihilator(&relations).elements().expect("relations have full rank");
    let characters = chars.iter().map(|z| subgroup.iter().map(|a| z.pair(&exps[a])).collect()).collect();
    Ok(DualGroup { subgroup, invariant_factors, characters })
}

/// A point `(x, chi)` with `chi` a character of the stabilizer of `x`,
/// given by its position in that stabilizer's dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DeltaPoint {
    pub x: usize,
    pub chi: usize,
}

/// The pairs `(x, chi)` with the action `g (x, chi) = (gx, chi(g^-1 . g))`.
#[derive(Clone, Debug, Serialize)]
pub struct Delta {
    pub duals: Vec<DualGroup>,
    pub points: Vec<DeltaPoint>,
    /// `act[g][i]` is the position of `g points[i]`.
    pub act: Vec<Vec<usize>>,
}

impl Delta {
    pub fn position(&self, p: DeltaPoint) -> usize {
        self.points.binary_search(&p).expect("a point of Delta")
    }

    /// The values of the character at `p` on the stabilizer of `p.x`.
    pub fn values(&self, p: DeltaPoint) -> &[RationalAngle] {
        &self.duals[p.x].characters[p.chi]
    }
}

pub fn delta(a: &FiniteAction) -> Result<Delta, TransformError> {
    let g = a.group();
    let mut duals = Vec::with_capacity(a.len());
    for x in 0..a.len() {
        let st = stabilizer(a, x);
        if !st.abelian {
            return Err(TransformError::NonAbelianStabilizer(a.name(x).to_string()));
        }
        duals.push(dual_group(g, &st.elements)?);
    }
    let points: Vec<DeltaPoint> =
        (0..a.len()).flat_map(|x| (0..duals[x].len()).map(move |chi| DeltaPoint { x, chi })).collect();
    let act = (0..g.order())
        .map(|h| {
            points
                .iter()
                .map(|p| {
                    let y = a.apply(h, p.x);
                    let values: Vec<RationalAngle> = duals[y]
                        .subgroup
                        .iter()
                        .map(|&s| duals[p.x].eval(p.chi, g.mul(g.mul(g.inv(h), s), h)))
                        .collect();
                    let chi = duals[y].position(&values).expect("conjugate of a character is a character");
                    points.binary_search(&DeltaPoint { x: y, chi }).expect("a point of Delta")
                })
                .collect()
        })
        .collect();
    Ok(Delta { duals, points, act })
}

/// Quasi-orbits of `Delta`: points with equal orbit closures. The space is
/// finite and discrete, so closures are orbits.
pub fn quasi_orbits(d: &Delta) -> Vec<Vec<usize>> {
    let mut by_orbit: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..d.points.len() {
        let orbit: BTreeSet<usize> = d.act.iter().map(|row| row[i]).collect();
        by_orbit.entry(orbit).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = by_orbit.into_values().collect();
    out.sort();
    out
}
