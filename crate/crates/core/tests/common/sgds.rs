//! Exhaustive self-maps and the direct Y-filter.

use primtop_core::lattice::{CircleSet, RationalAngle};

/// Every partial self-map of `0..n`, `None` meaning outside the domain.
pub fn all_maps(n: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m: Vec<Option<usize>>| {
                std::iter::once(None).chain((0..n).map(Some)).map(move |c| [m.clone(), vec![c]].concat())
            })
            .collect();
    }
    out
}

pub fn iterate(map: &[Option<usize>], x: usize, n: usize) -> Option<usize> {
    (0..n).try_fold(x, |at, _| map[at])
}

/// Least `p >= 1` with `sigma^(m+p) x = sigma^m x` for some `m`, found by
/// trying every `m, p <= |X|`.
pub fn brute_period(map: &[Option<usize>], x: usize) -> Option<u32> {
    let n = map.len();
    (1..=n)
        .find(|&p| {
            (0..=n).any(|m| matches!((iterate(map, x, m + p), iterate(map, x, m)), (Some(a), Some(b)) if a == b))
        })
        .map(|p| p as u32)
}

pub fn brute_preperiod(map: &[Option<usize>], x: usize, p: usize) -> u32 {
    (0..=map.len()).find(|&m| iterate(map, x, m + p).is_some() && iterate(map, x, m + p) == iterate(map, x, m)).unwrap()
        as u32
}

pub fn alphabet() -> Vec<CircleSet> {
    let a = RationalAngle::new;
    vec![
        CircleSet::empty(),
        CircleSet::full(),
        CircleSet::point(a(0, 1)),
        CircleSet::point(a(1, 3)),
        CircleSet::from_points([a(0, 1), a(1, 2)]),
        CircleSet::from_points([a(0, 1), a(1, 3), a(2, 3)]),
    ]
}

/// The filter written straight from the conditions: constant along `sigma`,
/// and proper fibres sit over periodic points and are unchanged by rotating
/// through `1/p`.
pub fn brute_valid(map: &[Option<usize>], y: &[CircleSet]) -> bool {
    let along = (0..map.len()).all(|x| map[x].is_none_or(|z| y[x] == y[z]));
    let proper = (0..map.len()).all(|x| {
        if y[x].is_empty() || y[x].is_full() {
            return true;
        }
        match brute_period(map, x) {
            None => false,
            Some(p) => y[x].rotate(RationalAngle::new(1, p as i64)) == y[x],
        }
    });
    along && proper
}
