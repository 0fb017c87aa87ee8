use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::angle::{Rat, RationalAngle};
use super::LatticeError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Cut {
    at: RationalAngle,
    point: bool,
    after: bool,
}

/// A finite union of points and intervals of `R/Z`, each end open or closed.
///
/// Stored as sorted breakpoints, each recording whether the breakpoint itself
/// and the open gap up to the next breakpoint belong to the set. The minimal
/// breakpoint list is unique, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Region {
    cuts: Vec<Cut>,
    whole: bool,
}

impl Region {
    pub fn empty() -> Self {
        Region { cuts: Vec::new(), whole: false }
    }

    pub fn full() -> Self {
        Region { cuts: Vec::new(), whole: true }
    }

    pub fn point(a: RationalAngle) -> Self {
        Region { cuts: vec![Cut { at: a, point: true, after: false }], whole: false }
    }

    /// The closed arc running counterclockwise from `start` to `end`.
    pub fn closed_arc(start: RationalAngle, end: RationalAngle) -> Self {
        if start == end {
            return Self::point(start);
        }
        let mut r = Region {
            cuts: vec![Cut { at: start, point: true, after: true }, Cut { at: end, point: true, after: false }],
            whole: false,
        };
        r.cuts.sort_by_key(|c| c.at);
        r
    }

    /// Index of the last breakpoint at or before `x`, cyclically.
    fn prev_cut(&self, x: RationalAngle) -> usize {
        match self.cuts.iter().rposition(|c| c.at <= x) {
            Some(i) => i,
            None => self.cuts.len() - 1,
        }
    }

    pub fn contains(&self, x: RationalAngle) -> bool {
        if self.cuts.is_empty() {
            return self.whole;
        }
        let i = self.prev_cut(x);
        let c = &self.cuts[i];
        if c.at == x {
            c.point
        } else {
            c.after
        }
    }

    /// Membership of the open gap immediately after `x`.
    fn after(&self, x: RationalAngle) -> bool {
        if self.cuts.is_empty() {
            return self.whole;
        }
        self.cuts[self.prev_cut(x)].after
    }

    /// Membership of the open gap immediately before `x`.
    fn before(&self, x: RationalAngle) -> bool {
        if self.cuts.is_empty() {
            return self.whole;
        }
        match self.cuts.iter().rposition(|c| c.at < x) {
            Some(i) => self.cuts[i].after,
            None => self.cuts[self.cuts.len() - 1].after,
        }
    }

    /// True when `x` has a neighbourhood inside the set.
    pub fn interior_contains(&self, x: RationalAngle) -> bool {
        self.contains(x) && self.after(x) && self.before(x)
    }

    fn normalize(mut self) -> Self {
        loop {
            let n = self.cuts.len();
            if n == 0 {
                return self;
            }
            let redundant = (0..n).find(|&i| {
                let prev = self.cuts[(i + n - 1) % n].after;
                let c = self.cuts[i];
                c.point == c.after && c.after == prev
            });
            match redundant {
                Some(i) => {
                    let c = self.cuts.remove(i);
                    if self.cuts.is_empty() {
                        self.whole = c.point;
                    }
                }
                None => {
                    self.whole = false;
                    return self;
                }
            }
        }
    }

    fn combine(&self, other: &Region, op: impl Fn(bool, bool) -> bool) -> Region {
        let at: BTreeSet<RationalAngle> = self.cuts.iter().chain(other.cuts.iter()).map(|c| c.at).collect();
        let cuts = at
            .into_iter()
            .map(|x| Cut {
                at: x,
                point: op(self.contains(x), other.contains(x)),
                after: op(self.after(x), other.after(x)),
            })
            .collect();
        Region { cuts, whole: op(self.whole, other.whole) }.normalize()
    }

    pub fn union(&self, other: &Region) -> Region {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> Region {
        Region {
            cuts: self.cuts.iter().map(|c| Cut { at: c.at, point: !c.point, after: !c.after }).collect(),
            whole: !self.whole,
        }
        .normalize()
    }

    pub fn rotate(&self, t: RationalAngle) -> Region {
        let mut cuts: Vec<Cut> = self.cuts.iter().map(|c| Cut { at: c.at + t, ..*c }).collect();
        cuts.sort_by_key(|c| c.at);
        Region { cuts, whole: self.whole }
    }

    pub fn is_closed(&self) -> bool {
        let n = self.cuts.len();
        (0..n).all(|i| {
            let c = self.cuts[i];
            let prev = self.cuts[(i + n - 1) % n].after;
            c.point || !(c.after || prev)
        })
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty() && !self.whole
    }

    pub fn is_full(&self) -> bool {
        self.cuts.is_empty() && self.whole
    }

    /// Breakpoints of the set, in increasing order.
    pub fn breakpoints(&self) -> Vec<RationalAngle> {
        self.cuts.iter().map(|c| c.at).collect()
    }
}

/// A closed subset of the circle: finitely many rational points and closed arcs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CircleSet(Region);

/// A closed arc given by its endpoints, running counterclockwise.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Arc {
    pub start: RationalAngle,
    pub end: RationalAngle,
}

impl Arc {
    /// Length in `(0, 1)`; arcs in canonical form are never degenerate or full.
    pub fn length(&self) -> Rat {
        let l = (self.end - self.start).value();
        if l.is_zero() {
            Rat::one()
        } else {
            l
        }
    }
}

impl CircleSet {
    pub fn empty() -> Self {
        CircleSet(Region::empty())
    }

    pub fn full() -> Self {
        CircleSet(Region::full())
    }

    pub fn point(a: RationalAngle) -> Self {
        CircleSet(Region::point(a))
    }

    pub fn arc(start: RationalAngle, end: RationalAngle) -> Self {
        CircleSet(Region::closed_arc(start, end))
    }

    pub fn from_points(points: impl IntoIterator<Item = RationalAngle>) -> Self {
        points.into_iter().fold(Self::empty(), |acc, p| acc.union(&Self::point(p)))
    }

    pub fn from_parts(
        points: impl IntoIterator<Item = RationalAngle>,
        arcs: impl IntoIterator<Item = (RationalAngle, RationalAngle)>,
        full: bool,
    ) -> Self {
        if full {
            return Self::full();
        }
        let base = Self::from_points(points);
        arcs.into_iter().fold(base, |acc, (s, e)| acc.union(&Self::arc(s, e)))
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn union(&self, other: &CircleSet) -> CircleSet {
        CircleSet(self.0.union(&other.0))
    }

    pub fn intersect(&self, other: &CircleSet) -> CircleSet {
        CircleSet(self.0.intersect(&other.0))
    }

    pub fn rotate(&self, t: RationalAngle) -> CircleSet {
        CircleSet(self.0.rotate(t))
    }

    pub fn contains(&self, x: RationalAngle) -> bool {
        self.0.contains(x)
    }

    pub fn interior_contains(&self, x: RationalAngle) -> bool {
        self.0.interior_contains(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    /// True when the set is stable under rotation by `1/p`.
    pub fn invariant_p(&self, p: u32) -> bool {
        assert!(p >= 1, "rotation order must be positive");
        self.rotate(RationalAngle::new(1, p as i64)) == *self
    }

    /// Image under `z -> z^p`.
    pub fn power_image(&self, p: u32) -> CircleSet {
        assert!(p >= 1, "power must be positive");
        if self.is_full() {
            return Self::full();
        }
        let p = p as i64;
        let mut out = Self::from_points(self.points().into_iter().map(|a| a * p));
        for arc in self.arcs() {
            let len = arc.length() * p;
            if len >= Rat::one() {
                return Self::full();
            }
            let s = arc.start * p;
            out = out.union(&Self::arc(s, s + RationalAngle::from_ratio(len)));
        }
        out
    }

    /// Isolated points, in increasing order.
    pub fn points(&self) -> Vec<RationalAngle> {
        let cuts = &self.0.cuts;
        let n = cuts.len();
        (0..n)
            .filter(|&i| cuts[i].point && !cuts[i].after && !cuts[(i + n - 1) % n].after)
            .map(|i| cuts[i].at)
            .collect()
    }

    /// Maximal arcs, ordered by start point.
    pub fn arcs(&self) -> Vec<Arc> {
        let cuts = &self.0.cuts;
        let n = cuts.len();
        let mut out = Vec::new();
        for i in 0..n {
            if cuts[i].after && !cuts[(i + n - 1) % n].after {
                let mut j = (i + 1) % n;
                while cuts[j].after {
                    j = (j + 1) % n;
                }
                out.push(Arc { start: cuts[i].at, end: cuts[j].at });
            }
        }
        out.sort();
        out
    }

    /// Total length of the arcs.
    pub fn measure(&self) -> Rat {
        if self.is_full() {
            return Rat::one();
        }
        self.arcs().iter().map(Arc::length).sum()
    }
}

impl TryFrom<Region> for CircleSet {
    type Error = LatticeError;
    fn try_from(r: Region) -> Result<Self, Self::Error> {
        if r.is_closed() {
            Ok(CircleSet(r))
        } else {
            Err(LatticeError::NotClosed)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CircleSetRepr {
    #[serde(default)]
    points: Vec<RationalAngle>,
    #[serde(default)]
    arcs: Vec<(RationalAngle, RationalAngle)>,
    #[serde(default)]
    full: bool,
}

impl Serialize for CircleSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CircleSetRepr {
            points: self.points(),
            arcs: self.arcs().into_iter().map(|a| (a.start, a.end)).collect(),
            full: self.is_full(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CircleSetRepr::deserialize(d)?;
        Ok(CircleSet::from_parts(r.points, r.arcs, r.full))
    }
}
