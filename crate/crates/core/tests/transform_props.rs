use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use primtop_core::lattice::RationalAngle;
use primtop_core::transform::{
    delta, dual_group, quasi_orbits, stabilizer, DeltaPoint, FiniteAction, FiniteGroup, TransformError,
};

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// The group of permutations generated by `gens`.
fn perm_group(gens: &[Vec<usize>]) -> FiniteGroup {
    let n = gens[0].len();
    let mut elems = vec![(0..n).collect::<Vec<usize>>()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let c = compose(&elems[i], g);
            if !elems.contains(&c) {
                elems.push(c);
            }
        }
        i += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| elems.iter().position(|c| *c == compose(a, b)).unwrap()).collect())
        .collect();
    FiniteGroup::from_table((0..elems.len()).map(|i| format!("g{i}")).collect(), table).unwrap()
}

fn abelian(orders: &[usize]) -> FiniteGroup {
    let elems: Vec<Vec<usize>> = orders.iter().fold(vec![Vec::new()], |acc, &m| {
        acc.into_iter().flat_map(|v| (0..m).map(move |x| [v.clone(), vec![x]].concat())).collect()
    });
    let add = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
        (0..orders.len()).map(|i| (a[i] + b[i]) % orders[i]).collect()
    };
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| elems.iter().position(|c| *c == add(a, b)).unwrap()).collect())
        .collect();
    FiniteGroup::from_table((0..elems.len()).map(|i| format!("a{i}")).collect(), table).unwrap()
}

fn quaternions() -> FiniteGroup {
    // (sign, unit) with unit 0..4 = 1, i, j, k.
    let unit = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let code = |neg: bool, u: usize| u + 4 * neg as usize;
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = unit(a % 4, b % 4);
                    code(s ^ (a >= 4) ^ (b >= 4), u)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table((0..8).map(|i| format!("q{i}")).collect(), table).unwrap()
}

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    let mut out: Vec<(&str, FiniteGroup)> = Vec::new();
    let names = ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8"];
    for (n, name) in (1..=8).zip(names) {
        out.push((name, abelian(&[n])));
    }
    out.push(("Z2xZ2", abelian(&[2, 2])));
    out.push(("Z2xZ4", abelian(&[2, 4])));
    out.push(("Z2^3", abelian(&[2, 2, 2])));
    out.push(("S3", perm_group(&[vec![1, 0, 2], vec![1, 2, 0]])));
    out.push(("D4", perm_group(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])));
    out.push(("Q8", quaternions()));
    out
}

/// Every action of `g` on `0..n`, found by sending a generating set to
/// permutations and keeping the assignments that extend to homomorphisms.
fn all_actions(g: &FiniteGroup, n: usize) -> Vec<FiniteAction> {
    let gens = generators(g, &(0..g.order()).collect::<Vec<_>>());
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut img: HashMap<usize, Vec<usize>> = HashMap::from([(g.identity(), (0..n).collect())]);
        let mut frontier = vec![g.identity()];
        let mut ok = true;
        while let Some(a) = frontier.pop() {
            for (i, &s) in gens.iter().enumerate() {
                let b = g.mul(s, a);
                let p = compose(&perms[choice[i]], &img[&a]);
                match img.get(&b) {
                    Some(q) if *q != p => ok = false,
                    Some(_) => {}
                    None => {
                        img.insert(b, p);
                        frontier.push(b);
                    }
                }
            }
        }
        if ok {
            let act: Vec<Vec<usize>> = (0..g.order()).map(|a| img[&a].clone()).collect();
            if let Ok(a) = FiniteAction::new(g.clone(), (0..n).map(|i| format!("x{i}")).collect(), act) {
                out.push(a);
            }
        }
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            return out;
        }
    }
}

/// A generating set of `h`, chosen greedily.
fn generators(g: &FiniteGroup, h: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    while g.generated(&gens).len() < h.len() {
        let span = g.generated(&gens);
        gens.push(*h.iter().find(|a| !span.contains(a)).unwrap());
    }
    gens
}

/// Homomorphisms `H -> Q/Z`: every assignment of values in `(1/|H|) Z / Z`
/// to a generating set, kept when it extends consistently along words.
fn brute_characters(g: &FiniteGroup, h: &[usize]) -> BTreeSet<Vec<RationalAngle>> {
    let m = h.len();
    let gens = generators(g, h);
    let mut out = BTreeSet::new();
    for vals in (0..gens.len()).map(|_| 0..m).multi_cartesian_product() {
        let mut chi: HashMap<usize, RationalAngle> = HashMap::from([(g.identity(), RationalAngle::ZERO)]);
        let mut frontier = vec![g.identity()];
        let mut ok = true;
        while let Some(a) = frontier.pop() {
            for (s, &v) in gens.iter().zip(&vals) {
                let b = g.mul(*s, a);
                let x = chi[&a] + RationalAngle::new(v as i64, m as i64);
                match chi.get(&b) {
                    Some(y) => ok &= *y == x,
                    None => {
                        chi.insert(b, x);
                        frontier.push(b);
                    }
                }
            }
        }
        if ok {
            out.insert(h.iter().map(|a| chi[a]).collect());
        }
    }
    out
}

#[test]
fn klein_four_dual() {
    let g = abelian(&[2, 2]);
    let d = dual_group(&g, &[0, 1, 2, 3]).unwrap();
    assert_eq!(d.invariant_factors, vec![2, 2]);
    assert_eq!(d.characters.iter().cloned().collect::<BTreeSet<_>>(), brute_characters(&g, &[0, 1, 2, 3]));
}

#[test]
fn duals_of_all_abelian_subgroups_match_enumeration() {
    for (name, g) in groups() {
        let subgroups: BTreeSet<Vec<usize>> = (0..g.order())
            .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
            .map(|(a, b)| g.generated(&[a, b]))
            .collect();
        for h in subgroups {
            if !g.commute(&h) {
                continue;
            }
            let d = dual_group(&g, &h).unwrap();
            let set: BTreeSet<_> = d.characters.iter().cloned().collect();
            assert_eq!(set.len(), d.len());
            assert_eq!(set, brute_characters(&g, &h), "{name} {h:?}");
            assert_eq!(d.invariant_factors.iter().product::<i64>() as usize, h.len());
        }
    }
}

#[test]
fn delta_is_well_defined_on_all_small_actions() {
    let mut count = 0;
    for (name, g) in groups() {
        let full = g
            .commute(&(0..g.order()).collect::<Vec<_>>())
            .then(|| dual_group(&g, &(0..g.order()).collect::<Vec<_>>()).unwrap());
        for n in 1..=4 {
            for a in all_actions(&g, n) {
                count += 1;
                let stabs: Vec<_> = (0..n).map(|x| stabilizer(&a, x)).collect();
                let d = match delta(&a) {
                    Ok(d) => d,
                    Err(TransformError::NonAbelianStabilizer(_)) => {
                        assert!(stabs.iter().any(|s| !s.abelian));
                        continue;
                    }
                    Err(e) => panic!("{name}: {e}"),
                };
                // Character counting over every point.
                for x in 0..n {
                    let over = d.points.iter().filter(|p| p.x == x).count();
                    assert_eq!(over, stabs[x].elements.len());
                }
                // The action descends: identity, compatibility, and the
                // projection to X is equivariant.
                let e = g.identity();
                for i in 0..d.points.len() {
                    assert_eq!(d.act[e][i], i);
                    for s in 0..g.order() {
                        assert_eq!(d.points[d.act[s][i]].x, a.apply(s, d.points[i].x));
                        for t in 0..g.order() {
                            assert_eq!(d.act[g.mul(s, t)][i], d.act[s][d.act[t][i]], "{name}");
                        }
                    }
                }
                // For abelian groups the restriction map from X x G^ is
                // constant on identified pairs and intertwines the actions.
                if let Some(full) = &full {
                    for x in 0..n {
                        for chi in 0..full.len() {
                            let restrict = |y: usize| -> usize {
                                let vals: Vec<_> = d.duals[y].subgroup.iter().map(|&h| full.eval(chi, h)).collect();
                                d.position(DeltaPoint { x: y, chi: d.duals[y].position(&vals).unwrap() })
                            };
                            for s in 0..g.order() {
                                assert_eq!(d.act[s][restrict(x)], restrict(a.apply(s, x)));
                            }
                        }
                    }
                }
                // Quasi-orbits are unions of orbits and cover Delta once.
                let classes = quasi_orbits(&d);
                assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), d.points.len());
                for c in &classes {
                    for &i in c {
                        for s in 0..g.order() {
                            assert!(c.contains(&d.act[s][i]));
                        }
                    }
                    let xs: BTreeSet<usize> = c.iter().map(|&i| d.points[i].x).collect();
                    assert!(a.orbits().iter().any(|o| o.iter().copied().collect::<BTreeSet<_>>() == xs));
                }
            }
        }
    }
    assert_eq!(count, 730);
}
