//! Nested parabolic pairs `q ⊂ p ⊂ sl(n+1)` given by crossed nodes.
//!
//! Root vectors are the matrix units `E_ij` (0-based, `i != j`).  The bracket
//! `[E_ij, E_kl] = δ_jk E_il - δ_li E_kj` has integer structure constants, and
//! `[E_ij, E_ji] = E_ii - E_jj = H_i + ... + H_{j-1}` for `i < j`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{BggError, Result};
use crate::matrix::{span_basis, QMatrix};
use crate::rational::{q, Q};
use crate::rootdata::{build_root_system, NodeSet, RootSystem, Weight};

pub type Root = (usize, usize);

/// Result of bracketing two root vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBracket {
    Zero,
    /// `c * E_ab`
    Root(i64, Root),
    /// `E_ii - E_jj`
    Cartan(usize, usize),
}

pub fn root_bracket(x: Root, y: Root) -> RootBracket {
    let ((i, j), (k, l)) = (x, y);
    if j == k && l == i {
        return RootBracket::Cartan(i, j);
    }
    if j == k {
        return RootBracket::Root(1, (i, l));
    }
    if l == i {
        return RootBracket::Root(-1, (k, j));
    }
    RootBracket::Zero
}

/// Dense element of gl(N), used for brute-force checks and pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlElem {
    pub n: usize,
    pub a: Vec<Q>,
}

impl GlElem {
    pub fn zero(n: usize) -> Self {
        GlElem { n, a: vec![Q::zero(); n * n] }
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut e = Self::zero(n);
        e.a[i * n + j] = Q::one();
        e
    }

    /// `H_m = E_{m-1,m-1} - E_{m,m}` for a 1-based node `m`.
    pub fn coroot(n: usize, m: usize) -> Self {
        let mut e = Self::zero(n);
        e.a[(m - 1) * n + m - 1] = Q::one();
        e.a[m * n + m] = -Q::one();
        e
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &GlElem) -> GlElem {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if !y.is_zero() {
                        out.a[i * n + j] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, o: &GlElem) -> GlElem {
        let ab = self.mul(o);
        let ba = o.mul(self);
        GlElem { n: self.n, a: ab.a.iter().zip(&ba.a).map(|(x, y)| x - y).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Trace form `tr(xy)`.
    pub fn trace_form(&self, o: &GlElem) -> Q {
        self.mul(o).trace()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    pub coeff: i64,
    pub result: usize,
}

/// A nested pair of standard parabolics `q ⊂ p` of `sl(rank+1)`.
#[derive(Clone, Debug)]
pub struct ParabolicPair {
    pub rs: RootSystem,
    pub crossed_p: NodeSet,
    pub crossed_q: NodeSet,
    /// Positive roots of `q₊`, ordered by q-grading then lexicographically.
    pub basis_q_plus: Vec<Root>,
    /// Positive roots of `p₊` in the same order.
    pub basis_p_plus: Vec<Root>,
    /// Roots of `q₊ \ p₊`, a basis of `q₊/p₊`.
    pub basis_rel: Vec<Root>,
    /// q-grading of each element of `basis_q_plus`.
    pub grading: Vec<i64>,
    /// Nonzero brackets inside `q₊` (indices into `basis_q_plus`).
    pub bracket_table: Vec<BracketEntry>,
    rel_index: HashMap<Root, usize>,
}

pub fn build_pair(rs: &RootSystem, crossed_p: &NodeSet, crossed_q: &NodeSet) -> Result<ParabolicPair> {
    crossed_p.validate(rs.rank)?;
    crossed_q.validate(rs.rank)?;
    if !crossed_p.is_subset(crossed_q) {
        return Err(BggError::Nesting(format!("p crosses {crossed_p:?}, q crosses {crossed_q:?}")));
    }
    let order = |x: &NodeSet| {
        let mut r: Vec<Root> = rs.positive_pairs.iter().copied().filter(|&(i, j)| x.grading(i, j) > 0).collect();
        r.sort_by_key(|&(i, j)| (crossed_q.grading(i, j), i, j));
        r
    };
    let basis_q_plus = order(crossed_q);
    let basis_p_plus = order(crossed_p);
    let basis_rel: Vec<Root> = basis_q_plus.iter().copied().filter(|&(i, j)| crossed_p.grading(i, j) == 0).collect();
    let grading = basis_q_plus.iter().map(|&(i, j)| crossed_q.grading(i, j)).collect();
    let index: HashMap<Root, usize> = basis_q_plus.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut bracket_table = Vec::new();
    for (a, &x) in basis_q_plus.iter().enumerate() {
        for (b, &y) in basis_q_plus.iter().enumerate() {
            if let RootBracket::Root(c, z) = root_bracket(x, y) {
                let result = *index.get(&z).ok_or_else(|| BggError::Internal("q₊ not closed under bracket".into()))?;
                bracket_table.push(BracketEntry { left: a, right: b, coeff: c, result });
            }
        }
    }
    let rel_index = basis_rel.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    Ok(ParabolicPair {
        rs: rs.clone(),
        crossed_p: crossed_p.clone(),
        crossed_q: crossed_q.clone(),
        basis_q_plus,
        basis_p_plus,
        basis_rel,
        grading,
        bracket_table,
        rel_index,
    })
}

/// Parsed `"A3 p=1 q=1,2"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSpec {
    pub rank: usize,
    pub crossed_p: NodeSet,
    pub crossed_q: NodeSet,
}

impl PairSpec {
    /// `p` defaults to the empty set and `q` to `p`.
    pub fn parse(s: &str) -> Result<PairSpec> {
        let mut toks = s.split_whitespace();
        let head = toks.next().ok_or_else(|| BggError::Parse("empty pair spec".into()))?;
        let rank = parse_algebra(head)?;
        let (mut p, mut qq) = (None, None);
        for t in toks {
            let (key, val) = t.split_once('=').ok_or_else(|| BggError::Parse(format!("expected key=value, got {t:?}")))?;
            let slot = match key {
                "p" => &mut p,
                "q" => &mut qq,
                _ => return Err(BggError::Parse(format!("unknown key {key:?}"))),
            };
            if slot.is_some() {
                return Err(BggError::Parse(format!("duplicate key {key:?}")));
            }
            *slot = Some(NodeSet::parse(val)?);
        }
        let crossed_p = p.unwrap_or_default();
        let crossed_q = qq.unwrap_or_else(|| crossed_p.clone());
        crossed_p.validate(rank)?;
        crossed_q.validate(rank)?;
        if !crossed_p.is_subset(&crossed_q) {
            return Err(BggError::Nesting(format!("p crosses {crossed_p:?}, q crosses {crossed_q:?}")));
        }
        Ok(PairSpec { rank, crossed_p, crossed_q })
    }

    pub fn render(&self) -> String {
        format!("A{} p={} q={}", self.rank, self.crossed_p.render(), self.crossed_q.render())
    }

    pub fn build(&self) -> Result<ParabolicPair> {
        build_pair(&build_root_system(self.rank)?, &self.crossed_p, &self.crossed_q)
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `"A3"` -> 3.
pub fn parse_algebra(s: &str) -> Result<usize> {
    let digits = s.strip_prefix('A').ok_or_else(|| BggError::Parse(format!("expected A<rank>, got {s:?}")))?;
    if digits.is_empty() || digits.len() > 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(BggError::Parse(format!("expected A<rank>, got {s:?}")));
    }
    let rank: usize = digits.parse().map_err(|_| BggError::Parse(format!("bad rank in {s:?}")))?;
    if rank == 0 || rank > crate::rootdata::MAX_RANK {
        return Err(BggError::UnsupportedRank(rank));
    }
    Ok(rank)
}

/// One simple factor of a Levi subalgebra.
#[derive(Clone, Debug, Serialize)]
pub struct LeviComponent {
    /// Nodes of `g` forming this factor, in order.
    pub nodes: Vec<usize>,
    #[serde(skip)]
    pub root_system: RootSystem,
    /// Nodes of the factor (1-based, local numbering) crossed by `q`.
    pub crossed_q_local: Vec<usize>,
}

/// Semisimple part of the Levi factor of `p` as a product of type A factors,
/// together with the embedding of their nodes into the Dynkin diagram of `g`.
#[derive(Clone, Debug, Serialize)]
pub struct LeviSubsystem {
    pub components: Vec<LeviComponent>,
    /// Number of crossed nodes of `p`, the dimension of the centre.
    pub center_dim: usize,
}

impl LeviSubsystem {
    pub fn semisimple_rank(&self) -> usize {
        self.components.iter().map(|c| c.nodes.len()).sum()
    }

    pub fn simple_nodes(&self) -> Vec<usize> {
        self.components.iter().flat_map(|c| c.nodes.iter().copied()).collect()
    }
}

impl ParabolicPair {
    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn n_letters(&self) -> usize {
        self.rs.rank + 1
    }

    pub fn rel_dim(&self) -> usize {
        self.basis_rel.len()
    }

    pub fn rel_index(&self, r: Root) -> Option<usize> {
        self.rel_index.get(&r).copied()
    }

    /// q-grading of a relative basis element.
    pub fn rel_grading(&self, a: usize) -> i64 {
        let (i, j) = self.basis_rel[a];
        self.crossed_q.grading(i, j)
    }

    pub fn rel_weight(&self, a: usize) -> Weight {
        let (i, j) = self.basis_rel[a];
        Weight::root(self.rank(), i, j)
    }

    /// Bracket in `q₊/p₊`: `[X_a, X_b] = c X_d`, or `None`.
    pub fn rel_bracket(&self, a: usize, b: usize) -> Option<(i64, usize)> {
        match root_bracket(self.basis_rel[a], self.basis_rel[b]) {
            RootBracket::Root(c, z) => self.rel_index(z).map(|d| (c, d)),
            _ => None,
        }
    }

    /// Whether the relative nilradical is abelian.
    pub fn rel_is_abelian(&self) -> bool {
        (0..self.rel_dim()).all(|a| (0..self.rel_dim()).all(|b| self.rel_bracket(a, b).is_none()))
    }

    /// Roots of the Levi factor of `p` (both signs).
    pub fn levi_p_roots(&self) -> Vec<Root> {
        levi_roots(self.rank(), &self.crossed_p)
    }

    pub fn levi_root_system(&self) -> LeviSubsystem {
        let free = self.crossed_p.complement(self.rank());
        let mut components = Vec::new();
        let mut run: Vec<usize> = Vec::new();
        let flush = |run: &mut Vec<usize>, out: &mut Vec<LeviComponent>| {
            if run.is_empty() {
                return;
            }
            let crossed_q_local = run.iter().enumerate().filter(|(_, &m)| self.crossed_q.contains(m)).map(|(k, _)| k + 1).collect();
            out.push(LeviComponent {
                nodes: run.clone(),
                root_system: build_root_system(run.len()).expect("component rank within range"),
                crossed_q_local,
            });
            run.clear();
        };
        for m in 1..=self.rank() {
            if free.contains(m) {
                run.push(m);
            } else {
                flush(&mut run, &mut components);
            }
        }
        flush(&mut run, &mut components);
        LeviSubsystem { components, center_dim: self.crossed_p.len() }
    }

    /// Brute-force structural checks on the stored data.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(BggError::Internal(format!("parabolic pair: {m}")));
        let n = self.n_letters();
        let in_p_plus = |(i, j): Root| self.crossed_p.grading(i, j) > 0;
        let in_q_plus = |(i, j): Root| self.crossed_q.grading(i, j) > 0;
        if !self.basis_p_plus.iter().all(|&r| in_q_plus(r)) {
            return fail("p₊ ⊄ q₊");
        }
        // [p₊, p] ⊆ p₊, checked on root vectors; Cartan elements preserve root spaces.
        let all_roots: Vec<Root> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        for &x in &self.basis_p_plus {
            for &y in all_roots.iter().filter(|&&(i, j)| self.crossed_p.grading(i, j) >= 0) {
                match root_bracket(x, y) {
                    RootBracket::Root(_, z) if !in_p_plus(z) => return fail("p₊ is not an ideal in p"),
                    RootBracket::Cartan(..) => return fail("p₊ pairs with p"),
                    _ => {}
                }
            }
        }
        // [p₊, q₊] ⊆ p₊ makes the bracket on q₊/p₊ independent of representatives.
        for &x in &self.basis_p_plus {
            for &y in &self.basis_q_plus {
                if let RootBracket::Root(_, z) = root_bracket(x, y) {
                    if !in_p_plus(z) {
                        return fail("bracket on q₊/p₊ not well defined");
                    }
                }
            }
        }
        for e in &self.bracket_table {
            if self.grading[e.left] + self.grading[e.right] != self.grading[e.result] {
                return fail("grading not additive");
            }
        }
        // Jacobi on basis triples, via matrices.
        let mats: Vec<GlElem> = self.basis_q_plus.iter().map(|&(i, j)| GlElem::unit(n, i, j)).collect();
        for x in &mats {
            for y in &mats {
                for z in &mats {
                    let s1 = x.bracket(&y.bracket(z));
                    let s2 = y.bracket(&z.bracket(x));
                    let s3 = z.bracket(&x.bracket(y));
                    let tot = GlElem { n, a: (0..n * n).map(|k| &s1.a[k] + &s2.a[k] + &s3.a[k]).collect() };
                    if !tot.is_zero() {
                        return fail("Jacobi identity");
                    }
                }
            }
        }
        // Table agrees with matrix brackets.
        for e in &self.bracket_table {
            let lhs = mats[e.left].bracket(&mats[e.right]);
            let (i, j) = self.basis_q_plus[e.result];
            let mut rhs = GlElem::unit(n, i, j);
            rhs.a[i * n + j] = q(e.coeff);
            if lhs != rhs {
                return fail("bracket table");
            }
        }
        Ok(())
    }

    /// Weight multisets of `(q₊/p₊)*` and of `p/q`.
    pub fn duality_weights(&self) -> (Vec<Weight>, Vec<Weight>) {
        let mut dual: Vec<Weight> = (0..self.rel_dim()).map(|a| self.rel_weight(a).neg()).collect();
        let mut pq: Vec<Weight> = self
            .levi_p_roots()
            .into_iter()
            .filter(|&(i, j)| self.crossed_q.grading(i, j) < 0)
            .map(|(i, j)| Weight::root(self.rank(), i, j))
            .collect();
        dual.sort();
        pq.sort();
        (dual, pq)
    }

    pub fn invariant_pairing(&self) -> InvariantPairing {
        InvariantPairing::new(self)
    }

    pub fn dump(&self) -> PairDump {
        let w = |r: &[Root]| r.iter().map(|&(i, j)| Weight::root(self.rank(), i, j)).collect();
        PairDump {
            rank: self.rank(),
            crossed_p: self.crossed_p.clone(),
            crossed_q: self.crossed_q.clone(),
            q_plus: self.basis_q_plus.clone(),
            q_plus_weights: w(&self.basis_q_plus),
            p_plus: self.basis_p_plus.clone(),
            rel: self.basis_rel.clone(),
            rel_weights: w(&self.basis_rel),
            grading: self.grading.clone(),
            brackets: self.bracket_table.clone(),
            levi: self.levi_root_system(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDump {
    pub rank: usize,
    pub crossed_p: NodeSet,
    pub crossed_q: NodeSet,
    pub q_plus: Vec<Root>,
    pub q_plus_weights: Vec<Weight>,
    pub p_plus: Vec<Root>,
    pub rel: Vec<Root>,
    pub rel_weights: Vec<Weight>,
    pub grading: Vec<i64>,
    pub brackets: Vec<BracketEntry>,
    pub levi: LeviSubsystem,
}

/// Roots `(i, j)`, `i != j`, of the Levi factor for the crossing `x`, ordered
/// positive first.
pub fn levi_roots(rank: usize, x: &NodeSet) -> Vec<Root> {
    let n = rank + 1;
    let mut out: Vec<Root> = Vec::new();
    for sign in [true, false] {
        for i in 0..n {
            for j in i + 1..n {
                if x.grading(i, j) == 0 {
                    out.push(if sign { (i, j) } else { (j, i) });
                }
            }
        }
    }
    out
}

/// Trace form on `p/p₊`, identified with the Levi factor `l_p` spanned by its
/// root vectors and the coroots `H_1..H_n`.
#[derive(Clone, Debug)]
pub struct InvariantPairing {
    pub basis: Vec<GlElem>,
    /// Root of each basis element; `None` for Cartan elements.
    pub roots: Vec<Option<Root>>,
    pub matrix: QMatrix,
}

impl InvariantPairing {
    fn new(pair: &ParabolicPair) -> Self {
        let n = pair.n_letters();
        let mut basis = Vec::new();
        let mut roots = Vec::new();
        for r in pair.levi_p_roots() {
            basis.push(GlElem::unit(n, r.0, r.1));
            roots.push(Some(r));
        }
        for m in 1..=pair.rank() {
            basis.push(GlElem::coroot(n, m));
            roots.push(None);
        }
        let d = basis.len();
        let dense: Vec<Vec<Q>> = basis.iter().map(|x| basis.iter().map(|y| x.trace_form(y)).collect()).collect();
        InvariantPairing { matrix: QMatrix::from_dense(d, d, &dense), basis, roots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.rank() == self.dim()
    }

    fn coords(&self, x: &GlElem) -> Vec<Q> {
        let cols: Vec<Vec<Q>> = self.basis.iter().map(|b| b.a.clone()).collect();
        let m = QMatrix::from_columns(x.a.len(), &cols);
        m.solve(&x.a).expect("element lies in the Levi factor")
    }

    /// `B([x,y],z) + B(y,[x,z]) = 0` on all basis triples.
    pub fn is_invariant(&self) -> bool {
        for x in &self.basis {
            for y in &self.basis {
                let xy = x.bracket(y);
                for z in &self.basis {
                    if xy.trace_form(z) + y.trace_form(&x.bracket(z)) != Q::zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks that the annihilator of `q/p₊` inside `p/p₊` is `q₊/p₊`.
    pub fn annihilator_is_rel(&self, pair: &ParabolicPair) -> bool {
        let d = self.dim();
        let in_q: Vec<usize> = (0..d)
            .filter(|&k| match self.roots[k] {
                Some((i, j)) => pair.crossed_q.grading(i, j) >= 0,
                None => true,
            })
            .collect();
        // x annihilates q/p₊ iff (B x)_k = 0 for every k in q.
        let ann = self.matrix.select_rows(&in_q).nullspace();
        let rel: Vec<Vec<Q>> = pair.basis_rel.iter().map(|&(i, j)| self.coords(&GlElem::unit(pair.n_letters(), i, j))).collect();
        span_basis(d, &ann) == span_basis(d, &rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(rank: usize, p: &[usize], qq: &[usize]) -> ParabolicPair {
        build_pair(&build_root_system(rank).unwrap(), &NodeSet::new(p.iter().copied()), &NodeSet::new(qq.iter().copied())).unwrap()
    }

    #[test]
    fn path_pair_dimensions() {
        let pp = pair(3, &[1], &[1, 2]);
        assert_eq!(pp.basis_p_plus.len(), 3);
        assert_eq!(pp.basis_q_plus.len(), 5);
        assert_eq!(pp.rel_dim(), 2);
        assert_eq!(pp.basis_rel, vec![(1, 2), (1, 3)]);
        assert!(pp.rel_is_abelian());
        pp.check_invariants().unwrap();
    }

    #[test]
    fn degenerate_pairs() {
        let pp = pair(3, &[2], &[2]);
        assert_eq!(pp.rel_dim(), 0);
        let pp = pair(2, &[], &[1]);
        assert_eq!(pp.basis_q_plus.len(), 2);
        assert_eq!(pp.rel_dim(), 2);
        assert!(build_pair(&build_root_system(3).unwrap(), &NodeSet::new([2]), &NodeSet::new([1])).is_err());
    }

    #[test]
    fn levi_examples() {
        let l = pair(3, &[1], &[1, 2]).levi_root_system();
        assert_eq!(l.components.len(), 1);
        assert_eq!(l.components[0].nodes, vec![2, 3]);
        assert_eq!(l.components[0].crossed_q_local, vec![1]);
        let l = pair(3, &[], &[2]).levi_root_system();
        assert_eq!(l.semisimple_rank(), 3);
        let l = pair(3, &[1, 2, 3], &[1, 2, 3]).levi_root_system();
        assert!(l.components.is_empty());
        assert_eq!(l.center_dim, 3);
    }

    #[test]
    fn pairing_properties() {
        for (p, qq) in [(vec![1], vec![1, 2]), (vec![], vec![1, 2, 3]), (vec![2], vec![1, 2])] {
            let pp = pair(3, &p, &qq);
            let b = pp.invariant_pairing();
            assert!(b.is_nondegenerate());
            assert!(b.is_invariant());
            assert!(b.annihilator_is_rel(&pp));
            let (x, y) = pp.duality_weights();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn pair_spec_round_trip() {
        let s = PairSpec::parse("A3 p=1 q=1,2").unwrap();
        assert_eq!(s.render(), "A3 p=1 q=1,2");
        assert_eq!(PairSpec::parse("A3 q=2,1").unwrap().render(), "A3 p=- q=1,2");
        assert_eq!(PairSpec::parse("A2").unwrap().render(), "A2 p=- q=-");
        for bad in ["", "B3", "A3 p=2 q=1", "A3 p=1 p=1", "A3 x=1", "A3 q=5", "A9", "A3 p"] {
            assert!(PairSpec::parse(bad).is_err(), "{bad:?}");
        }
    }
}
