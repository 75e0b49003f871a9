//! Weight multiplicities of the constructed irreducibles against an
//! independent Freudenthal recursion written here.

use std::collections::BTreeMap;

use bgg_core::repn::{irrep, Algebra};
use bgg_core::rootdata::{build_root_system, RootSystem, Weight};
use bgg_core::Q;
use num_traits::{ToPrimitive, Zero};

fn compositions(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(parts - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn freudenthal(rs: &RootSystem, lam: &Weight) -> BTreeMap<Weight, usize> {
    let n = rs.rank;
    let simple: Vec<Weight> = (0..n).map(|i| Weight::root(n, i, i + 1)).collect();
    let positive: Vec<Weight> = rs.positive_pairs.iter().map(|&(i, j)| Weight::root(n, i, j)).collect();
    let rho = rs.rho.clone();
    let norm = |w: &Weight| rs.pair(w, w);
    let top = norm(&lam.add(&rho));
    // λ - w0 λ bounds the depth
    let lowest = Weight::from_eps(&lam.to_eps().into_iter().rev().collect::<Vec<_>>());
    let depth: usize = rs.simple_root_coords(&lam.sub(&lowest)).iter().map(|c| c.to_usize().unwrap()).sum();
    let mut mult: BTreeMap<Weight, Q> = BTreeMap::new();
    mult.insert(lam.clone(), Q::from_integer(1.into()));
    for d in 1..=depth {
        for comp in compositions(n, d) {
            let mu = comp.iter().zip(&simple).fold(lam.clone(), |acc, (&c, a)| acc.sub(&a.scale(&Q::from_integer(c.into()))));
            let denom = &top - norm(&mu.add(&rho));
            if denom.is_zero() {
                continue;
            }
            let mut sum = Q::zero();
            for a in &positive {
                let mut j = 1;
                loop {
                    let nu = mu.add(&a.scale(&Q::from_integer(j.into())));
                    let diff = rs.simple_root_coords(&lam.sub(&nu));
                    if diff.iter().any(|c| c < &Q::zero()) {
                        break;
                    }
                    if let Some(m) = mult.get(&nu) {
                        sum += m * rs.pair(&nu, a);
                    }
                    j += 1;
                }
            }
            let m = Q::from_integer(2.into()) * sum / denom;
            if !m.is_zero() {
                mult.insert(mu, m);
            }
        }
    }
    mult.into_iter().map(|(w, m)| (w, m.to_usize().unwrap())).collect()
}

fn check(rank: usize, lam: &[i64]) -> usize {
    let rs = build_root_system(rank).unwrap();
    let lam = Weight::from_ints(lam);
    let oracle = freudenthal(&rs, &lam);
    let m = irrep(&Algebra::g(rank), &lam).unwrap();
    let mut built: BTreeMap<Weight, usize> = BTreeMap::new();
    for w in m.weight_multiset() {
        *built.entry(w).or_default() += 1;
    }
    assert_eq!(built, oracle, "weight multiplicities of {lam}");
    oracle.values().sum()
}

#[test]
fn multiplicities_match_freudenthal() {
    for lam in [[0, 0], [1, 0], [1, 1], [2, 1], [2, 2], [3, 0], [3, 2]] {
        check(2, &lam);
    }
    for lam in [[1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 2, 0], [1, 1, 0], [2, 0, 1], [1, 1, 1]] {
        check(3, &lam);
    }
    check(4, &[1, 0, 0, 1]);
}

#[test]
fn frozen_dimensions_and_zero_weights() {
    let cases: [(usize, &[i64], usize, usize); 5] = [
        (2, &[1, 1], 8, 2),
        (2, &[2, 2], 27, 3),
        (3, &[1, 0, 1], 15, 3),
        (3, &[0, 2, 0], 20, 2),
        (3, &[1, 1, 1], 64, 0),
    ];
    for (rank, lam, dim, zero_mult) in cases {
        assert_eq!(check(rank, lam), dim);
        let m = irrep(&Algebra::g(rank), &Weight::from_ints(lam)).unwrap();
        assert_eq!(m.multiplicity(&Weight::zero(rank)), zero_mult, "{lam:?}");
    }
}
