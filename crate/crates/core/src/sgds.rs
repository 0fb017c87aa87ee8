//! Singly generated dynamical systems `sigma: dom -> X` on a finite discrete
//! set: period data, quasi-orbits, the primitive spectrum and validation of
//! closed invariant sets `Y` in `X x T`.
//!
//! On a discrete space the openness conditions for D-sets of the associated
//! 1-graph reduce to the conditions checked by [`validate_y`], so only the
//! latter are implemented here.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::CircleSet;

pub type PointSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SgdsError {
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("duplicate point {0:?}")]
    DuplicatePoint(String),
    #[error("Y has no fibre over {0:?}")]
    YNotTotal(String),
}

/// The JSON form: points in `X` and the map, with points outside the domain
/// left out of `sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgdsRepr {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct Sgds {
    points: Vec<String>,
    index: HashMap<String, usize>,
    sigma: Vec<Option<usize>>,
}

impl Sgds {
    pub fn new(points: Vec<String>, sigma: &BTreeMap<String, String>) -> Result<Sgds, SgdsError> {
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(SgdsError::DuplicatePoint(p.clone()));
            }
        }
        let mut map = vec![None; points.len()];
        for (a, b) in sigma {
            let look = |n: &String| index.get(n).copied().ok_or_else(|| SgdsError::UnknownPoint(n.clone()));
            map[look(a)?] = Some(look(b)?);
        }
        Ok(Sgds { points, index, sigma: map })
    }

    /// A system on `0..n` named `x0, x1, ..`, with `sigma[i]` the image of `i`.
    pub fn from_map(sigma: Vec<Option<usize>>) -> Sgds {
        let points: Vec<String> = (0..sigma.len()).map(|i| format!("x{i}")).collect();
        let index = points.iter().cloned().zip(0..).collect();
        assert!(sigma.iter().flatten().all(|&j| j < points.len()), "image outside X");
        Sgds { points, index, sigma }
    }

    pub fn from_repr(r: &SgdsRepr) -> Result<Sgds, SgdsError> {
        Sgds::new(r.x.clone(), &r.sigma)
    }

    pub fn to_repr(&self) -> SgdsRepr {
        SgdsRepr {
            x: self.points.clone(),
            sigma: (0..self.len())
                .filter_map(|i| self.sigma[i].map(|j| (self.points[i].clone(), self.points[j].clone())))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn point(&self, name: &str) -> Result<usize, SgdsError> {
        self.index.get(name).copied().ok_or_else(|| SgdsError::UnknownPoint(name.to_string()))
    }

    pub fn sigma(&self, x: usize) -> Option<usize> {
        self.sigma[x]
    }

    pub fn names(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|&x| self.points[x].clone()).collect()
    }
}

/// The eventual period `p` and preperiod `l` of a point, with
/// `sigma^(l+p)(x) = sigma^l(x)` for the least such `p`, then the least `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PeriodData {
    Finite { p: u32, l: u32 },
    Infinite,
}

impl PeriodData {
    pub fn is_periodic(&self) -> bool {
        matches!(self, PeriodData::Finite { .. })
    }
}

impl fmt::Display for PeriodData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodData::Finite { p, l } => write!(f, "p={p} l={l}"),
            PeriodData::Infinite => f.write_str("p=inf l=inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Count {
    Finite(u32),
    Inf(String),
}

#[derive(Serialize, Deserialize)]
struct PeriodRepr {
    p: Count,
    l: Count,
}

impl Serialize for PeriodData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match *self {
            PeriodData::Finite { p, l } => PeriodRepr { p: Count::Finite(p), l: Count::Finite(l) },
            PeriodData::Infinite => PeriodRepr { p: Count::Inf("inf".into()), l: Count::Inf("inf".into()) },
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PeriodRepr::deserialize(d)? {
            PeriodRepr { p: Count::Finite(p), l: Count::Finite(l) } if p > 0 => Ok(PeriodData::Finite { p, l }),
            PeriodRepr { p: Count::Inf(a), l: Count::Inf(b) } if a == "inf" && b == "inf" => Ok(PeriodData::Infinite),
            _ => Err(serde::de::Error::custom("p and l must be finite together (p >= 1) or both \"inf\"")),
        }
    }
}

/// Follows the forward orbit until it repeats or leaves the domain.
pub fn period_data(s: &Sgds, x: usize) -> PeriodData {
    let mut first_seen = HashMap::new();
    let mut at = x;
    for i in 0u32.. {
        if let Some(&j) = first_seen.get(&at) {
            return PeriodData::Finite { p: i - j, l: j };
        }
        first_seen.insert(at, i);
        match s.sigma(at) {
            Some(y) => at = y,
            None => return PeriodData::Infinite,
        }
    }
    unreachable!()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub aperiodic: PointSet,
    pub periodic: PointSet,
}

/// Splits `X` into aperiodic and periodic points. Every periodic point of a
/// finite discrete system is isolated in its orbit.
pub fn classify(s: &Sgds) -> Classification {
    let (periodic, aperiodic) = (0..s.len()).partition(|&x| period_data(s, x).is_periodic());
    Classification { aperiodic, periodic }
}

/// Classes of `x ~ y` iff `sigma^m(x) = sigma^n(y)` for some `m, n`, sorted.
pub fn quasi_orbits(s: &Sgds) -> Vec<PointSet> {
    let mut parent: Vec<usize> = (0..s.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for x in 0..s.len() {
        if let Some(y) = s.sigma(x) {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut classes: BTreeMap<usize, PointSet> = BTreeMap::new();
    for x in 0..s.len() {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().insert(x);
    }
    classes.into_values().collect()
}

/// A family of primitive ideals: one point per aperiodic quasi-orbit, and a
/// circle of points, parametrized by `w = z^p`, per periodic one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SgdsFamily {
    Point { class: PointSet },
    Fiber { class: PointSet, cycle: Vec<usize>, p: u32 },
}

pub fn sgds_prim(s: &Sgds) -> Vec<SgdsFamily> {
    quasi_orbits(s)
        .into_iter()
        .map(|class| {
            let x = *class.first().expect("classes are nonempty");
            match period_data(s, x) {
                PeriodData::Infinite => SgdsFamily::Point { class },
                PeriodData::Finite { p, l } => {
                    let mut at = x;
                    for _ in 0..l {
                        at = s.sigma(at).expect("periodic orbits stay in the domain");
                    }
                    let mut cycle = vec![at];
                    for _ in 1..p {
                        at = s.sigma(at).expect("periodic orbits stay in the domain");
                        cycle.push(at);
                    }
                    let start = cycle.iter().enumerate().min_by_key(|(_, &c)| c).map(|(i, _)| i).unwrap();
                    cycle.rotate_left(start);
                    SgdsFamily::Fiber { class, cycle, p }
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YViolation {
    /// `Y_x != Y_sigma(x)`.
    NotInvariant { x: usize, image: usize },
    /// A proper nonempty fibre over a point that is not periodic.
    NotPeriodic { x: usize },
    /// A proper nonempty fibre not invariant under rotation by `1/p(x)`.
    NotRotationInvariant { x: usize, p: u32 },
}

impl YViolation {
    /// The label of the failed condition: `(ii)` for constancy along
    /// `sigma`, `(iii)` for the constraints on proper fibres.
    pub fn condition(&self) -> &'static str {
        match self {
            YViolation::NotInvariant { .. } => "(ii)",
            YViolation::NotPeriodic { .. } | YViolation::NotRotationInvariant { .. } => "(iii)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YReport {
    pub violation: Option<YViolation>,
    /// Conditions that hold automatically for this system.
    pub vacuous: Vec<String>,
}

impl YReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that `Y` (one closed fibre per point) is the preimage of a closed
/// invariant set: fibres are constant along `sigma`, and a fibre other than
/// the empty set and the whole circle sits over a periodic point and is
/// invariant under rotation by `1/p`.
pub fn validate_y(s: &Sgds, y: &[CircleSet]) -> Result<YReport, SgdsError> {
    if y.len() < s.len() {
        return Err(SgdsError::YNotTotal(s.name(y.len()).to_string()));
    }
    if y.len() > s.len() {
        return Err(SgdsError::UnknownPoint(format!("#{}", s.len())));
    }
    let vacuous = vec![
        "closedness of Y: fibres are closed circle sets and X is discrete".to_string(),
        "neighbourhood clause: V = {x0} works because X is discrete".to_string(),
    ];
    let violation = check_y(s, y);
    Ok(YReport { violation, vacuous })
}

fn check_y(s: &Sgds, y: &[CircleSet]) -> Option<YViolation> {
    for x in 0..s.len() {
        if let Some(image) = s.sigma(x) {
            if y[x] != y[image] {
                return Some(YViolation::NotInvariant { x, image });
            }
        }
    }
    for x in 0..s.len() {
        if y[x].is_empty() || y[x].is_full() {
            continue;
        }
        match period_data(s, x) {
            PeriodData::Infinite => return Some(YViolation::NotPeriodic { x }),
            PeriodData::Finite { p, .. } if !y[x].invariant_p(p) => {
                return Some(YViolation::NotRotationInvariant { x, p })
            }
            PeriodData::Finite { .. } => {}
        }
    }
    None
}

/// Reads `Y` keyed by point name; every point needs a fibre.
pub fn y_from_names(s: &Sgds, named: &BTreeMap<String, CircleSet>) -> Result<Vec<CircleSet>, SgdsError> {
    for n in named.keys() {
        s.point(n)?;
    }
    (0..s.len())
        .map(|x| named.get(s.name(x)).cloned().ok_or_else(|| SgdsError::YNotTotal(s.name(x).to_string())))
        .collect()
}
