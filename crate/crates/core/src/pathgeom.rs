//! Path geometries in dimension five: sl(4) with `p` the stabiliser of a
//! line and `q` the stabiliser of a line inside a plane.
//!
//! Weights are in fundamental coordinates `(a, b, c)`; the coefficient for a
//! case `(w, k, ℓ)` has label `(w+k, ℓ, k)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{BggError, Result};
use crate::homology::{build_labelled, homology};
use crate::parabolic::{build_pair, ParabolicPair};
use crate::rational::{display_q, format_q, is_integer, parse_q, q, Q};
use crate::rootdata::{build_root_system, NodeSet, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathGeomCase {
    pub w: Q,
    pub k: u32,
    pub l: u32,
}

impl PathGeomCase {
    pub fn new(w: Q, k: u32, l: u32) -> Self {
        PathGeomCase { w, k, l }
    }

    pub fn int(w: i64, k: u32, l: u32) -> Self {
        PathGeomCase { w: q(w), k, l }
    }

    fn kq(&self) -> Q {
        q(self.k as i64)
    }

    fn lq(&self) -> Q {
        q(self.l as i64)
    }

    /// Coefficient label `(w+k, ℓ, k)`.
    pub fn label(&self) -> Weight {
        Weight(vec![&self.w + self.kq(), self.lq(), self.kq()])
    }
}

/// `S^c V*(A,B)`, the symmetric power of the dual standard bundle twisted
/// by the density pair `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleName {
    pub c: u32,
    pub a: Q,
    pub b: Q,
}

impl BundleName {
    pub fn to_weight(&self) -> Weight {
        let c = q(self.c as i64);
        Weight(vec![&self.a + &c, &self.b - q(2) * &c, c])
    }

    pub fn from_weight(w: &Weight) -> Result<BundleName> {
        if w.0.len() != 3 {
            return Err(BggError::Shape(format!("bundle weights live in rank 3, got {w}")));
        }
        let c = &w.0[2];
        if !is_integer(c) || c < &Q::zero() {
            return Err(BggError::Representability(format!("third coordinate of {w} is not a symmetric power degree")));
        }
        let ci = c.to_integer().try_into().map_err(|_| BggError::Parse(format!("degree {c} too large")))?;
        Ok(BundleName { c: ci, a: &w.0[0] - c, b: &w.0[1] + q(2) * c })
    }

    pub fn parse(s: &str) -> Result<BundleName> {
        let err = || BggError::Parse(format!("expected S^c V*(A,B), got {s:?}"));
        let rest = s.trim().strip_prefix("S^").ok_or_else(err)?;
        let (c, rest) = rest.split_once(' ').ok_or_else(err)?;
        let inner = rest.trim().strip_prefix("V*(").and_then(|r| r.strip_suffix(')')).ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        Ok(BundleName { c: c.parse().map_err(|_| err())?, a: parse_q(a.trim())?, b: parse_q(b.trim())? })
    }
}

impl fmt::Display for BundleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{} V*({},{})", self.c, display_q(&self.a), display_q(&self.b))
    }
}

impl Serialize for BundleName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Sequence {
    pub weights: [Weight; 3],
    pub bundles: [BundleName; 3],
    /// Orders of the two operators.
    pub orders: (u32, u32),
}

pub fn sequence(case: &PathGeomCase) -> Sequence {
    let (w, k, l) = (&case.w, case.kq(), case.lq());
    let two = q(2);
    let weights = [
        Weight(vec![w + &k, l.clone(), k.clone()]),
        Weight(vec![w + &k + &l + Q::one(), -&l - &two, &k + &l + Q::one()]),
        Weight(vec![w + &two * &k + &l + &two, -&k - &l - q(3), l.clone()]),
    ];
    let density = &two * &k + &l;
    let bundles = [
        BundleName { c: case.k, a: w.clone(), b: density.clone() },
        BundleName { c: case.k + case.l + 1, a: w.clone(), b: density },
        BundleName { c: case.l, a: w + &two * &k + &two, b: &l - &k - q(3) },
    ];
    Sequence { weights, bundles, orders: (case.l + 1, case.k + 1) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsequenceCase {
    CaseA,
    CaseB,
    CaseC,
    CaseD,
    None,
}

impl SubsequenceCase {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CaseA => "case-A",
            Self::CaseB => "case-B",
            Self::CaseC => "case-C",
            Self::CaseD => "case-D",
            Self::None => "none",
        }
    }
}

/// Conditions in terms of `(a, b, c)`, each evaluated separately so that
/// overlaps can be detected.
pub fn subsequence_conditions(a: &Q, b: &Q, c: &Q) -> [bool; 4] {
    let ab = a + b;
    let abc = &ab + c;
    [
        *a >= Q::zero(),
        *a <= q(-2) && ab >= q(-1),
        ab <= q(-3) && abc >= q(-2),
        abc <= q(-4),
    ]
}

/// Which standard sequence contains the three bundles; only integral `w`
/// can qualify.
pub fn classify(case: &PathGeomCase) -> SubsequenceCase {
    if !is_integer(&case.w) {
        return SubsequenceCase::None;
    }
    let lab = case.label();
    let hits = subsequence_conditions(&lab.0[0], &lab.0[1], &lab.0[2]);
    match hits.iter().position(|&h| h) {
        Some(0) => SubsequenceCase::CaseA,
        Some(1) => SubsequenceCase::CaseB,
        Some(2) => SubsequenceCase::CaseC,
        Some(3) => SubsequenceCase::CaseD,
        _ => SubsequenceCase::None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Singularity {
    pub singular: bool,
    /// 1, 2 or 3 for `w = -1-k`, `w = -2-k-ℓ`, `w = -3-2k-ℓ`.
    pub wall: Option<u8>,
}

pub fn singular_character(case: &PathGeomCase) -> Singularity {
    let (k, l) = (case.kq(), case.lq());
    let walls = [-Q::one() - &k, q(-2) - &k - &l, q(-3) - q(2) * &k - &l];
    let wall = walls.iter().position(|x| *x == case.w).map(|i| i as u8 + 1);
    Singularity { singular: wall.is_some(), wall }
}

#[derive(Clone, Debug, Serialize)]
pub struct WallCrossCheck {
    pub cases: usize,
    /// Cases where the wall list and the regularity test disagree.
    pub discrepancies: Vec<(String, u32, u32)>,
}

/// Compares the wall list with the regularity of `λ+ρ` over `w ∈ [-4,0]`,
/// `k, ℓ ∈ [0,4]`.
pub fn wall_cross_check() -> Result<WallCrossCheck> {
    let rs = build_root_system(3)?;
    let mut discrepancies = Vec::new();
    let mut cases = 0;
    for w in -4..=0 {
        for k in 0..5 {
            for l in 0..5 {
                let case = PathGeomCase::int(w, k, l);
                cases += 1;
                let regular = rs.character_is_regular(&case.label())?;
                if regular == singular_character(&case).singular {
                    discrepancies.push((format_q(&case.w), k, l));
                }
            }
        }
    }
    Ok(WallCrossCheck { cases, discrepancies })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorBundle {
    pub label: String,
    pub weight: Weight,
}

/// The tensor bundle `T^k_ℓ[w+2ℓ]` with its weight `(k-2ℓ, ℓ, k)`.
pub fn tensor_bundle(case: &PathGeomCase) -> TensorBundle {
    let shift = &case.w + q(2) * case.lq();
    let (k, l) = (case.kq(), case.lq());
    TensorBundle {
        label: format!("T^{}_{}[{}]", case.k, case.l, display_q(&shift)),
        weight: Weight(vec![&k - q(2) * &l, l, k]),
    }
}

pub fn path_pair() -> Result<ParabolicPair> {
    let rs = build_root_system(3)?;
    build_pair(&rs, &NodeSet::new([1]), &NodeSet::new([1, 2]))
}

#[derive(Clone, Debug, Serialize)]
pub struct EngineCheck {
    pub expected: Vec<Weight>,
    pub computed: Vec<Vec<Weight>>,
    pub matches: bool,
}

/// Runs the homology engine on the path pair and compares the labels of
/// `H_0, H_1, H_2` with the sequence weights.
pub fn validate_against_engine(case: &PathGeomCase) -> Result<EngineCheck> {
    let lab = case.label();
    if !lab.0[1..].iter().all(|x| is_integer(x) && *x >= Q::zero()) {
        return Err(BggError::Representability(format!("{lab} is not dominant integral for the Levi factor")));
    }
    let pair = path_pair()?;
    let cx = build_labelled(&pair, &lab)?;
    let computed = homology(&cx)?.labels();
    let expected = sequence(case).weights.to_vec();
    let matches = computed.len() == 3 && computed.iter().zip(&expected).all(|(c, e)| c.len() == 1 && &c[0] == e);
    Ok(EngineCheck { expected, computed, matches })
}

#[derive(Clone, Debug, Serialize)]
pub struct PathGeomReport {
    pub w: String,
    pub k: u32,
    pub l: u32,
    pub sequence: Sequence,
    pub classification: SubsequenceCase,
    pub singularity: Singularity,
    pub tensor_bundle: TensorBundle,
    pub engine: Option<EngineCheck>,
    pub notes: Vec<&'static str>,
}

pub fn report(case: &PathGeomCase, validate: bool) -> Result<PathGeomReport> {
    let engine = if validate { Some(validate_against_engine(case)?) } else { None };
    Ok(PathGeomReport {
        w: format_q(&case.w),
        k: case.k,
        l: case.l,
        sequence: sequence(case),
        classification: classify(case),
        singularity: singular_character(case),
        tensor_bundle: tensor_bundle(case),
        engine,
        notes: vec![
            "operator orders are asserted from symbol arguments, not computed",
            "the first operator in the sequence can be resolved by the tensor bundle",
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn sequence_rows() {
        let s = sequence(&PathGeomCase::int(0, 0, 0));
        assert_eq!(s.weights, [Weight::from_ints(&[0, 0, 0]), Weight::from_ints(&[1, -2, 1]), Weight::from_ints(&[2, -3, 0])]);
        assert_eq!(s.orders, (1, 1));
        let s = sequence(&PathGeomCase::int(0, 1, 0));
        let names: Vec<String> = s.bundles.iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["S^1 V*(0,2)", "S^2 V*(0,2)", "S^0 V*(4,-4)"]);
        assert_eq!(s.orders, (1, 2));
        for (b, w) in s.bundles.iter().zip(&s.weights) {
            assert_eq!(&b.to_weight(), w);
            assert_eq!(&BundleName::from_weight(w).unwrap(), b);
            assert_eq!(BundleName::parse(&b.to_string()).unwrap(), *b);
        }
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(classify(&PathGeomCase::int(0, 0, 0)), SubsequenceCase::CaseA);
        assert_eq!(classify(&PathGeomCase::int(-2, 0, 1)), SubsequenceCase::CaseB);
        assert_eq!(classify(&PathGeomCase::new(qf(1, 2), 3, 3)), SubsequenceCase::None);
    }

    #[test]
    fn walls() {
        let s = singular_character(&PathGeomCase::int(-1, 0, 0));
        assert!(s.singular && s.wall == Some(1));
        assert!(!singular_character(&PathGeomCase::int(0, 0, 0)).singular);
        assert!(wall_cross_check().unwrap().discrepancies.is_empty());
    }

    #[test]
    fn tensor_labels() {
        assert_eq!(tensor_bundle(&PathGeomCase::int(0, 0, 0)).label, "T^0_0[0]");
        assert_eq!(tensor_bundle(&PathGeomCase::int(0, 1, 1)).label, "T^1_1[2]");
        let t = tensor_bundle(&PathGeomCase::int(2, 0, 1));
        assert_eq!(t.label, "T^0_1[4]");
        assert_eq!(t.weight, Weight::from_ints(&[-2, 1, 0]));
        // the Levi part of the weight matches the degree-zero weight
        let s = sequence(&PathGeomCase::int(2, 0, 1));
        assert_eq!(t.weight.0[1..], s.weights[0].0[1..]);
    }

    #[test]
    fn engine_examples() {
        for (w, k, l) in [(0, 0, 0), (0, 1, 0), (1, 0, 1)] {
            let r = validate_against_engine(&PathGeomCase::int(w, k, l)).unwrap();
            assert!(r.matches, "{r:?}");
        }
    }
}
