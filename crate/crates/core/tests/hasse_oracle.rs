//! Hasse quotients against brute-force enumeration of the symmetric group.

use std::collections::BTreeSet;

use bgg_core::rootdata::{build_root_system, permutations, NodeSet, Perm, Weight};

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

/// Permutations preserving the blocks cut out by the crossed nodes.
fn block_preserving(n: usize, crossed: &[usize]) -> Vec<Vec<usize>> {
    let block = |i: usize| crossed.iter().filter(|&&c| c <= i).count();
    permutations(n).into_iter().filter(|p| p.iter().enumerate().all(|(i, &j)| block(i) == block(j))).collect()
}

fn subsets(rank: usize) -> Vec<Vec<usize>> {
    (0..1u32 << rank).map(|m| (1..=rank).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect()
}

#[test]
fn relative_quotients_match_brute_force() {
    for rank in 1..=3 {
        let rs = build_root_system(rank).unwrap();
        let n = rank + 1;
        let zero = Weight::zero(rank);
        for q in subsets(rank) {
            for p in subsets(rank).into_iter().filter(|p| p.iter().all(|x| q.contains(x))) {
                let (np, nq) = (NodeSet::new(p.clone()), NodeSet::new(q.clone()));
                let graded = rs.relative_hasse_quotient(&np, &nq).unwrap();
                let wp = block_preserving(n, &p);
                let wq = block_preserving(n, &q);
                let count: usize = graded.iter().map(Vec::len).sum();
                assert_eq!(count * wq.len(), wp.len(), "p={p:?} q={q:?}");
                // ρ-shifted orbit of 0 under W_p, kept where q-dominant
                let brute: BTreeSet<(usize, Weight)> = wp
                    .iter()
                    .map(|w| (inversions(w), rs.affine_action_perm(&Perm(w.clone()), &zero)))
                    .filter(|(_, mu)| mu.is_dominant_for(&nq))
                    .collect();
                let ours: BTreeSet<(usize, Weight)> = graded
                    .iter()
                    .enumerate()
                    .flat_map(|(l, ws)| ws.iter().map(move |w| (l, w.clone())))
                    .map(|(l, w)| {
                        assert_eq!(w.to_perm(rank).length(), l);
                        (l, rs.affine_action(&w, &zero).unwrap())
                    })
                    .collect();
                assert_eq!(ours, brute, "p={p:?} q={q:?}");
            }
        }
    }
}

#[test]
fn frozen_quotient_sizes() {
    let rs = build_root_system(3).unwrap();
    let sizes = |p: &[usize], q: &[usize]| -> Vec<usize> {
        rs.relative_hasse_quotient(&NodeSet::new(p.to_vec()), &NodeSet::new(q.to_vec())).unwrap().iter().map(Vec::len).collect()
    };
    assert_eq!(sizes(&[1], &[1, 2]), [1, 1, 1]);
    assert_eq!(sizes(&[], &[1, 2, 3]), [1, 3, 5, 6, 5, 3, 1]);
    assert_eq!(sizes(&[], &[2]), [1, 1, 2, 1, 1]);
    assert_eq!(sizes(&[2], &[1, 2, 3]), [1, 2, 1]);
}
