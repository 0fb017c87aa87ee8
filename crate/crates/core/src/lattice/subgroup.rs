use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::angle::RationalAngle;
use super::matrix::{hermite_normal_form, integer_kernel, smith_normal_form, IMatrix};
use super::LatticeError;

/// A subgroup of `Z^k`, held by the Hermite normal form of a generating set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct IntSubgroup {
    k: usize,
    basis: IMatrix,
}

impl IntSubgroup {
    pub fn new(k: usize, generators: &[Vec<i64>]) -> Result<Self, LatticeError> {
        if let Some(g) = generators.iter().find(|g| g.len() != k) {
            return Err(LatticeError::RankMismatch { expected: k, found: g.len() });
        }
        Ok(IntSubgroup { k, basis: hermite_normal_form(generators, k) })
    }

    pub fn zero(k: usize) -> Self {
        IntSubgroup { k, basis: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        IntSubgroup { k, basis: super::matrix::identity(k) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &IMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, l: &[i64]) -> bool {
        assert_eq!(l.len(), self.k, "vector has the wrong rank");
        let mut r = l.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("HNF rows are nonzero");
            if r[c] % row[c] != 0 {
                return false;
            }
            let q = r[c] / row[c];
            for (x, y) in r.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn join(&self, other: &IntSubgroup) -> IntSubgroup {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        IntSubgroup { k: self.k, basis: hermite_normal_form(&g, self.k) }
    }

    pub fn with(&self, l: &[i64]) -> IntSubgroup {
        let mut g = self.basis.clone();
        g.push(l.to_vec());
        IntSubgroup { k: self.k, basis: hermite_normal_form(&g, self.k) }
    }

    /// Index of the subgroup in `Z^k`, or `None` when the rank is deficient.
    pub fn index(&self) -> Option<i64> {
        if self.rank() < self.k {
            return None;
        }
        Some((0..self.k).map(|i| self.basis[i][i]).product())
    }
}

#[derive(Deserialize)]
struct IntSubgroupRepr {
    k: usize,
    basis: IMatrix,
}

impl<'de> Deserialize<'de> for IntSubgroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IntSubgroupRepr::deserialize(d)?;
        IntSubgroup::new(r.k, &r.basis).map_err(serde::de::Error::custom)
    }
}

/// A point of `T^k` with rational coordinates, acting by `l -> <t, l>`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterVector(pub Vec<RationalAngle>);

impl CharacterVector {
    pub fn zero(k: usize) -> Self {
        CharacterVector(vec![RationalAngle::ZERO; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `<t, l>` as an angle.
    pub fn pair(&self, l: &[i64]) -> RationalAngle {
        assert_eq!(l.len(), self.0.len(), "vector has the wrong rank");
        self.0.iter().zip(l).fold(RationalAngle::ZERO, |acc, (&t, &c)| acc + t * c)
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        CharacterVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &CharacterVector) -> CharacterVector {
        CharacterVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(RationalAngle::is_zero)
    }
}

/// A closed subgroup of `T^k`: finitely many rational generators plus the
/// subtorus swept out by the integer directions in `connected_dims`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TorusSubgroupDesc {
    pub k: usize,
    pub generators: Vec<CharacterVector>,
    pub connected_dims: IMatrix,
}

impl TorusSubgroupDesc {
    pub fn dim(&self) -> usize {
        self.connected_dims.len()
    }

    /// Lattice `{l : <t, l> in Z for all t in the subgroup}`.
    pub fn annihilator_lattice(&self) -> IntSubgroup {
        let k = self.k;
        let g = self.generators.len();
        let n =
            self.generators.iter().flat_map(|t| t.0.iter().map(RationalAngle::denom)).fold(1i64, |acc, d| acc.lcm(&d));
        // Unknowns (l, y): C l = 0 and (n t_j) . l - n y_j = 0.
        let mut rows: IMatrix = self
            .connected_dims
            .iter()
            .map(|c| {
                let mut r = c.clone();
                r.extend(std::iter::repeat_n(0, g));
                r
            })
            .collect();
        for (j, t) in self.generators.iter().enumerate() {
            let mut r: Vec<i64> = t.0.iter().map(|a| a.numer() * (n / a.denom())).collect();
            r.extend((0..g).map(|i| if i == j { -n } else { 0 }));
            rows.push(r);
        }
        let ker = integer_kernel(&rows, k + g);
        let proj: IMatrix = ker.iter().map(|r| r[..k].to_vec()).collect();
        IntSubgroup { k, basis: hermite_normal_form(&proj, k) }
    }

    pub fn contains(&self, t: &CharacterVector) -> bool {
        self.annihilator_lattice().basis().iter().all(|l| t.pair(l).is_zero())
    }

    /// All elements, when the subgroup is finite.
    pub fn elements(&self) -> Option<Vec<CharacterVector>> {
        if self.dim() > 0 {
            return None;
        }
        let mut seen: BTreeSet<CharacterVector> = BTreeSet::new();
        let mut frontier = vec![CharacterVector::zero(self.k)];
        seen.insert(CharacterVector::zero(self.k));
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = x.add(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Some(seen.into_iter().collect())
    }
}

/// `P^perp = {t in T^k : <t, l> in Z for all l in P}`.
pub fn annihilator(p: &IntSubgroup) -> TorusSubgroupDesc {
    let k = p.k;
    if p.is_zero() {
        return TorusSubgroupDesc { k, generators: Vec::new(), connected_dims: super::matrix::identity(k) };
    }
    // With U B V = D, t = V s is annihilating iff d_i s_i is integral.
    let snf = smith_normal_form(&p.basis, k);
    let col = |j: usize| -> Vec<i64> { snf.v.iter().map(|row| row[j]).collect() };
    let generators = (0..snf.rank)
        .filter(|&i| snf.d[i][i] > 1)
        .map(|i| {
            let d = snf.d[i][i];
            CharacterVector(col(i).into_iter().map(|c| RationalAngle::new(c, d)).collect())
        })
        .collect();
    let connected_dims = (snf.rank..k).map(col).collect();
    TorusSubgroupDesc { k, generators, connected_dims }
}

/// Whether `t1` and `t2` restrict to the same character of `P`.
pub fn char_eq_on(p: &IntSubgroup, t1: &CharacterVector, t2: &CharacterVector) -> bool {
    let d = t1.sub(t2);
    p.basis().iter().all(|l| d.pair(l).is_zero())
}

/// The dual of `P`, presented as `T^k` modulo `P^perp`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CharacterSpace {
    pub per: IntSubgroup,
    pub annihilator: TorusSubgroupDesc,
    /// Dimension of the dual torus, equal to the rank of `P`.
    pub dim: usize,
}

impl CharacterSpace {
    pub fn of(per: &IntSubgroup) -> Self {
        CharacterSpace { per: per.clone(), annihilator: annihilator(per), dim: per.rank() }
    }

    /// Coordinates `<t, l_j>` over the basis of `P`; equal iff the characters agree.
    pub fn coordinates(&self, t: &CharacterVector) -> Vec<RationalAngle> {
        self.per.basis().iter().map(|l| t.pair(l)).collect()
    }
}
