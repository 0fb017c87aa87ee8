use std::collections::BTreeSet;

use super::angle::Rat;
use super::subgroup::{CharacterVector, IntSubgroup};
use super::LatticeError;

/// The support `S_n` of one sample: a finite set of lattice points or a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleSet {
    Finite(BTreeSet<Vec<i64>>),
    Subgroup(IntSubgroup),
}

impl SampleSet {
    pub fn contains(&self, l: &[i64]) -> bool {
        match self {
            SampleSet::Finite(s) => s.contains(l),
            SampleSet::Subgroup(g) => g.contains(l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub set: SampleSet,
    pub chi: CharacterVector,
}

/// Finite-horizon test that `1_{S_n}(l) |chi_n(l) - chi(l)| -> 0` for every `l`
/// in `test_set`.
///
/// The sample list is read as a sequence that stays at its last entry, so for
/// each `l` the test asks for an index `N` in the list after which every sample
/// containing `l` is within chordal distance `eps` of `chi(l)`.
pub fn converges_along(
    samples: &[Sample],
    t: &CharacterVector,
    test_set: &[Vec<i64>],
    eps: Rat,
) -> Result<bool, LatticeError> {
    if samples.is_empty() {
        return Err(LatticeError::EmptySamples);
    }
    let k = t.k();
    for s in samples {
        if s.chi.k() != k {
            return Err(LatticeError::RankMismatch { expected: k, found: s.chi.k() });
        }
    }
    if let Some(l) = test_set.iter().find(|l| l.len() != k) {
        return Err(LatticeError::RankMismatch { expected: k, found: l.len() });
    }
    Ok(test_set.iter().all(|l| tail_start(samples, t, l, eps).is_some()))
}

/// Smallest index from which every sample containing `l` is `eps`-close.
pub fn tail_start(samples: &[Sample], t: &CharacterVector, l: &[i64], eps: Rat) -> Option<usize> {
    let target = t.pair(l);
    let close = |s: &Sample| !s.set.contains(l) || s.chi.pair(l).chord_lt(&target, eps);
    let bad = samples.iter().rposition(|s| !close(s));
    match bad {
        None => Some(0),
        Some(i) if i + 1 < samples.len() => Some(i + 1),
        Some(_) => None,
    }
}
