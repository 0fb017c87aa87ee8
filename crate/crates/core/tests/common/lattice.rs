//! Random matrices, subgroups and circle sets, with direct checks that do not
//! go through the library's own reductions.

use primtop_core::lattice::matrix::{det, matmul};
use primtop_core::lattice::{
    converges_along, smith_normal_form, CharacterVector, CircleSet, IMatrix, IntSubgroup, Rat, RationalAngle, Sample,
    SampleSet,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(r: &mut ChaCha8Rng) -> (IMatrix, usize) {
    let (m, n) = (r.gen_range(1..=4), r.gen_range(1..=4));
    ((0..m).map(|_| (0..n).map(|_| r.gen_range(-9..=9)).collect()).collect(), n)
}

/// Unimodular transforms, a diagonal divisibility chain and `U A V = D`.
pub fn check_snf(a: &IMatrix, cols: usize) -> Result<(), String> {
    let s = smith_normal_form(a, cols);
    let m = a.len();
    if det(&s.u).abs() != 1 || det(&s.v).abs() != 1 {
        return Err(format!("transforms not unimodular for {a:?}"));
    }
    if matmul(&matmul(&s.u, a, m, cols), &s.v, cols, cols) != s.d {
        return Err(format!("U A V != D for {a:?}"));
    }
    for i in 0..m {
        for j in 0..cols {
            let on = i == j && i < s.rank;
            if on != (s.d[i][j] != 0) {
                return Err(format!("D not diagonal of rank {} for {a:?}", s.rank));
            }
        }
    }
    let inv = s.invariants();
    if inv.iter().any(|&d| d <= 0) || inv.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(format!("invariants {inv:?} do not form a divisibility chain"));
    }
    Ok(())
}

pub fn random_subgroup(r: &mut ChaCha8Rng, k: usize) -> IntSubgroup {
    let gens: Vec<Vec<i64>> =
        (0..r.gen_range(0..=k + 1)).map(|_| (0..k).map(|_| r.gen_range(-6..=6)).collect()).collect();
    IntSubgroup::new(k, &gens).unwrap()
}

pub fn random_angle(r: &mut ChaCha8Rng, max_den: i64) -> RationalAngle {
    let q = r.gen_range(1..=max_den);
    RationalAngle::new(r.gen_range(0..q), q)
}

pub fn random_character(r: &mut ChaCha8Rng, k: usize, max_den: i64) -> CharacterVector {
    CharacterVector((0..k).map(|_| random_angle(r, max_den)).collect())
}

pub fn random_circle_set(r: &mut ChaCha8Rng) -> CircleSet {
    if r.gen_ratio(1, 12) {
        return CircleSet::full();
    }
    let points: Vec<RationalAngle> = (0..r.gen_range(0..3)).map(|_| random_angle(r, 12)).collect();
    let arcs: Vec<(RationalAngle, RationalAngle)> =
        (0..r.gen_range(0..3)).map(|_| (random_angle(r, 12), random_angle(r, 12))).collect();
    CircleSet::from_parts(points, arcs, false)
}

/// A grid of step `1/(2n)` for `n` a common multiple of every denominator
/// involved: membership on it decides equality of such sets.
pub fn grid(sets: &[&CircleSet], extra: i64) -> Vec<RationalAngle> {
    let mut n: i64 = extra;
    for c in sets {
        for a in c.points().into_iter().chain(c.arcs().into_iter().flat_map(|a| [a.start, a.end])) {
            n = num_integer::lcm(n, a.denom());
        }
    }
    (0..2 * n).map(|i| RationalAngle::new(i, 2 * n)).collect()
}

/// A constant subgroup sequence, characters `t_n = t + nu'_n + delta_n` with
/// `nu'_n` in the annihilator and `delta_n` either tiny or a coarse shift,
/// and a box of test vectors.
pub struct EquivInstance {
    pub s: IntSubgroup,
    pub t: CharacterVector,
    pub samples: Vec<CharacterVector>,
    pub test_set: Vec<Vec<i64>>,
    pub eps: Rat,
}

/// Elements of `S^perp` with coordinates in `(1/12) Z`.
pub fn annihilator_grid(s: &IntSubgroup) -> Vec<CharacterVector> {
    let mut out = Vec::new();
    for a in 0..12 {
        for b in 0..12 {
            let nu = CharacterVector(vec![RationalAngle::new(a, 12), RationalAngle::new(b, 12)]);
            if s.basis().iter().all(|l| nu.pair(l).is_zero()) {
                out.push(nu);
            }
        }
    }
    out
}

pub fn random_equiv_instance(r: &mut ChaCha8Rng) -> EquivInstance {
    let gens: Vec<Vec<i64>> = (0..r.gen_range(0..=2)).map(|_| (0..2).map(|_| r.gen_range(-2..=2)).collect()).collect();
    let s = IntSubgroup::new(2, &gens).unwrap();
    let t = random_character(r, 2, 12);
    let perp = annihilator_grid(&s);
    let len = r.gen_range(1..=6);
    let samples = (0..len)
        .map(|_| {
            let nu = &perp[r.gen_range(0..perp.len())];
            let delta = if r.gen_bool(0.5) {
                CharacterVector(vec![
                    RationalAngle::new(r.gen_range(-1..=1), 1000),
                    RationalAngle::new(r.gen_range(-1..=1), 1000),
                ])
            } else {
                CharacterVector(vec![
                    RationalAngle::new(r.gen_range(0..12), 12),
                    RationalAngle::new(r.gen_range(0..12), 12),
                ])
            };
            t.add(nu).add(&delta)
        })
        .collect();
    let test_set = (-2..=2).flat_map(|a| (-2..=2).map(move |b| vec![a, b])).collect();
    EquivInstance { s, t, samples, test_set, eps: Rat::new(1, 10) }
}

/// Convergence along the constant sequence `S`.
pub fn along(inst: &EquivInstance) -> bool {
    let samples: Vec<Sample> =
        inst.samples.iter().map(|c| Sample { set: SampleSet::Subgroup(inst.s.clone()), chi: c.clone() }).collect();
    converges_along(&samples, &inst.t, &inst.test_set, inst.eps).unwrap()
}

/// Whether some choice `nu_n` in the annihilator grid makes `t_n + nu_n`
/// converge to `t` on the whole test box.
pub fn corrected(inst: &EquivInstance) -> bool {
    let perp = annihilator_grid(&inst.s);
    let close = |c: &CharacterVector| inst.test_set.iter().all(|l| c.pair(l).chord_lt(&inst.t.pair(l), inst.eps));
    let best: Vec<CharacterVector> = inst
        .samples
        .iter()
        .map(|c| perp.iter().map(|nu| c.add(nu)).find(|x| close(x)).unwrap_or_else(|| c.clone()))
        .collect();
    let full = IntSubgroup::full(2);
    let samples: Vec<Sample> =
        best.into_iter().map(|chi| Sample { set: SampleSet::Subgroup(full.clone()), chi }).collect();
    converges_along(&samples, &inst.t, &inst.test_set, inst.eps).unwrap()
}
