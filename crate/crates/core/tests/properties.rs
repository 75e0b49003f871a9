//! Property tests for the structural invariants.

use bgg_core::bgg::{make_compressable, Machine};
use bgg_core::homology::{build_labelled, homology, kostant_predict};
use bgg_core::parabolic::PairSpec;
use bgg_core::pathgeom::{self, BundleName, PathGeomCase};
use bgg_core::rational::qf;
use bgg_core::repn::{casimir_eigenvalue, casimir_matrix, irrep, Algebra};
use bgg_core::rootdata::{build_root_system, Perm, Weight};
use bgg_core::matrix::QMatrix;
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(Perm)
}

fn rational_weight(rank: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec((-6i64..6, 1i64..4), rank).prop_map(|v| Weight(v.into_iter().map(|(n, d)| qf(n, d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn affine_action_composes(a in perm(4), b in perm(4), lam in rational_weight(3)) {
        let rs = build_root_system(3).unwrap();
        let lhs = rs.affine_action_perm(&a.compose(&b), &lam);
        let rhs = rs.affine_action_perm(&a, &rs.affine_action_perm(&b, &lam));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn form_is_weyl_invariant(w in perm(4), x in rational_weight(3), y in rational_weight(3)) {
        let rs = build_root_system(3).unwrap();
        prop_assert_eq!(rs.pair(&w.act(&x), &w.act(&y)), rs.pair(&x, &y));
    }

    #[test]
    fn reduced_words_have_length(w in perm(5)) {
        let word = w.reduced_word();
        prop_assert_eq!(word.len(), w.length());
        prop_assert_eq!(Perm::from_word(5, &word), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn irreps_satisfy_relations_and_casimir(a in 0i64..3, b in 0i64..3) {
        let alg = Algebra::g(2);
        let lam = Weight::from_ints(&[a, b]);
        let m = irrep(&alg, &lam).unwrap();
        prop_assert!(m.check_relations().is_ok());
        let c = casimir_matrix(&m);
        prop_assert_eq!(&c, &QMatrix::scalar(m.dim(), &casimir_eigenvalue(&alg, &lam)));
        for i in 1..=2 {
            prop_assert!(c.commutator(m.e(i)).is_zero());
            prop_assert!(c.commutator(m.f(i)).is_zero());
        }
    }

    #[test]
    fn path_pair_complexes(a in -8i64..4, d in 1i64..3, b in 0i64..2, c in 0i64..2) {
        let pair = PairSpec::parse("A3 p=1 q=1,2").unwrap().build().unwrap();
        let lam = Weight(vec![qf(a, d), qf(b, 1), qf(c, 1)]);
        let cx = build_labelled(&pair, &lam).unwrap();
        let inv = cx.check_invariants();
        prop_assert!(inv.ok(), "{:?}", inv);
        if d == 1 {
            prop_assert_eq!(homology(&cx).unwrap().labels(), kostant_predict(&pair, &lam).unwrap());
        }
    }

    #[test]
    fn splitting_and_inverse(seed in 0u64..1_000_000) {
        let pair = PairSpec::parse("A2 p=- q=1,2").unwrap().build().unwrap();
        let cx = build_labelled(&pair, &Weight::from_ints(&[0, 1])).unwrap();
        for k in 0..cx.top() {
            let op = make_compressable(&cx, k, Some(seed)).unwrap();
            let m = Machine::new(&cx, k, &op.matrix).unwrap();
            prop_assert!(m.splitting_verdicts().ok());
            prop_assert!(m.q_verdicts(&cx).unwrap().ok());
        }
    }
}

proptest! {
    #[test]
    fn classifier_cases_are_exclusive(w in -20i64..10, k in 0u32..8, l in 0u32..8) {
        let case = PathGeomCase::int(w, k, l);
        let lab = case.label();
        let hits = pathgeom::subsequence_conditions(&lab.0[0], &lab.0[1], &lab.0[2]);
        prop_assert!(hits.iter().filter(|&&h| h).count() <= 1);
        let s = pathgeom::sequence(&case);
        for (b, w) in s.bundles.iter().zip(&s.weights) {
            prop_assert_eq!(&b.to_weight(), w);
            prop_assert_eq!(&BundleName::parse(&b.to_string()).unwrap(), b);
        }
    }

    #[test]
    fn walls_agree_with_regularity(w in -12i64..4, k in 0u32..5, l in 0u32..5) {
        let rs = build_root_system(3).unwrap();
        let case = PathGeomCase::int(w, k, l);
        prop_assert_eq!(rs.character_is_regular(&case.label()).unwrap(), !pathgeom::singular_character(&case).singular);
    }
}
