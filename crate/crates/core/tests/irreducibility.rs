//! Irreducibility of constructed modules: exactly one highest weight vector.

use bgg_core::parabolic::PairSpec;
use bgg_core::homology::coefficient;
use bgg_core::repn::{adjoint_module, dual, irrep, Algebra};
use bgg_core::rootdata::{NodeSet, Weight};
use std::collections::BTreeSet;

fn singular_vectors(m: &bgg_core::repn::WeightModule) -> usize {
    let weights: BTreeSet<Weight> = m.weights.iter().cloned().collect();
    weights.iter().map(|w| m.highest_weight_space_dim(w)).sum()
}

#[test]
fn irreducibles_have_one_singular_vector() {
    for lam in [[0, 0, 0], [1, 0, 0], [0, 1, 1], [2, 0, 1], [1, 1, 1]] {
        let m = irrep(&Algebra::g(3), &Weight::from_ints(&lam)).unwrap();
        assert_eq!(singular_vectors(&m), 1, "{lam:?}");
        assert_eq!(singular_vectors(&dual(&m)), 1, "dual of {lam:?}");
    }
    assert_eq!(singular_vectors(&adjoint_module(&Algebra::g(3))), 1);
}

#[test]
fn levi_coefficients_are_irreducible_per_factor() {
    let pair = PairSpec::parse("A3 p=1 q=1,2").unwrap().build().unwrap();
    for lam in [[0, 1, 0], [-2, 1, 1], [3, 0, 2]] {
        let v = coefficient(&pair, &Weight::from_ints(&lam)).unwrap();
        assert_eq!(singular_vectors(&v), 1, "{lam:?}");
    }
    let levi = Algebra::levi(3, &NodeSet::new([2]));
    let m = irrep(&levi, &Weight::from_ints(&[1, 0, 2])).unwrap();
    assert_eq!(m.dim(), 6);
    assert_eq!(singular_vectors(&m), 1);
}

#[test]
fn reducible_tensor_has_several() {
    let std = irrep(&Algebra::g(2), &Weight::from_ints(&[1, 0])).unwrap();
    let t = bgg_core::repn::tensor(&std, &dual(&std)).unwrap();
    assert_eq!(singular_vectors(&t), 2);
}
