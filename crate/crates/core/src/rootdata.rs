//! Type A root data: weights in fundamental coordinates, the Weyl group as
//! permutations, the affine action and parabolic coset representatives.
//!
//! Internally a weight of A_n is also viewed through its epsilon coordinates
//! `x_0..x_n` (normalised so `x_n = 0`), with `a_m = x_{m-1} - x_m`.  The
//! simple root `alpha_m` is `e_{m-1} - e_m` and a Weyl element `w` stored as a
//! permutation `s` acts by `(w x)[s(i)] = x[i]`.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{BggError, Result};
use crate::rational::{display_q, q, Q};

pub const MAX_RANK: usize = 7;

/// Exact weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Q>);

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(display_q).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serialize_q_vec(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::rational::deserialize_q_vec(d).map(Weight)
    }
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Weight(c.iter().map(|&x| q(x)).collect())
    }

    /// Parses `"1,0,-1/2"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        crate::rational::parse_q_list(s).map(Weight)
    }

    /// Parses the JSON form, an array of `"num/den"` strings.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| BggError::Parse(format!("weight JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weight serialises")
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, node: usize) -> &Q {
        &self.0[node - 1]
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    /// Dominance only at the nodes not in `crossed`.
    pub fn is_dominant_for(&self, crossed: &NodeSet) -> bool {
        self.0.iter().enumerate().all(|(i, a)| crossed.contains(i + 1) || !a.is_negative())
    }

    pub fn is_integral_for(&self, crossed: &NodeSet) -> bool {
        self.0.iter().enumerate().all(|(i, a)| crossed.contains(i + 1) || a.is_integer())
    }

    /// Epsilon coordinates, length `rank + 1`, last one zero.
    pub fn to_eps(&self) -> Vec<Q> {
        let n = self.0.len();
        let mut x = vec![Q::zero(); n + 1];
        for i in (0..n).rev() {
            x[i] = &x[i + 1] + &self.0[i];
        }
        x
    }

    pub fn from_eps(x: &[Q]) -> Weight {
        Weight((1..x.len()).map(|m| &x[m - 1] - &x[m]).collect())
    }

    /// The root `e_i - e_j` (0-based, `i != j`) of A_{n}.
    pub fn root(rank: usize, i: usize, j: usize) -> Weight {
        let mut x = vec![Q::zero(); rank + 1];
        x[i] += Q::one();
        x[j] -= Q::one();
        Weight::from_eps(&x)
    }
}

/// Sorted set of 1-based Dynkin nodes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(Vec<usize>);

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.render_list())
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for NodeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        let mut v: Vec<usize> = nodes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }

    pub fn all(rank: usize) -> Self {
        NodeSet((1..=rank).collect())
    }

    /// Accepts `"1,2"`, `"{1,2}"`, and `""`, `"-"`, `"{}"` for the empty set.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('{').and_then(|u| u.strip_suffix('}')).unwrap_or(t);
        if t.is_empty() || t == "-" {
            return Ok(NodeSet::empty());
        }
        let mut v = Vec::new();
        for part in t.split(',') {
            let p = part.trim();
            if p.is_empty() || p.len() > 3 || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(BggError::Parse(format!("invalid node {p:?} in {s:?}")));
            }
            let n: usize = p.parse().map_err(|_| BggError::Parse(format!("invalid node {p:?}")))?;
            if n == 0 {
                return Err(BggError::Parse("nodes are numbered from 1".into()));
            }
            v.push(n);
        }
        let set = NodeSet::new(v.iter().copied());
        if set.0.len() != v.len() {
            return Err(BggError::Parse(format!("repeated node in {s:?}")));
        }
        Ok(set)
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&n| n > rank) {
            Some(n) => Err(BggError::Shape(format!("node {n} outside 1..={rank}"))),
            None => Ok(()),
        }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|&n| other.contains(n))
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.iter().copied().filter(|&n| !other.contains(n)).collect())
    }

    /// Complement inside `1..=rank`.
    pub fn complement(&self, rank: usize) -> NodeSet {
        NodeSet((1..=rank).filter(|&n| !self.contains(n)).collect())
    }

    fn render_list(&self) -> String {
        self.0.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Canonical text form: `"1,2"`, or `"-"` when empty.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            "-".into()
        } else {
            self.render_list()
        }
    }

    /// Number of crossed nodes among the simple roots of `e_i - e_j`, `i < j`.
    pub fn grading(&self, i: usize, j: usize) -> i64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let g = self.0.iter().filter(|&&m| a < m && m <= b).count() as i64;
        if i < j {
            g
        } else {
            -g
        }
    }

    /// Maximal runs of epsilon indices not separated by a crossed node; the
    /// Levi factor of the parabolic is block diagonal with these blocks.
    pub fn blocks(&self, rank: usize) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for m in 1..=rank {
            if self.contains(m) {
                out.push(start..m);
                start = m;
            }
        }
        out.push(start..rank + 1);
        out
    }
}

/// Weyl group element of A_n as a permutation of `0..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Simple reflection `s_m` (1-based node) on `n` letters.
    pub fn simple(n: usize, m: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(m - 1, m);
        p
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        Perm(inv)
    }

    pub fn length(&self) -> usize {
        let p = &self.0;
        let mut c = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn from_word(n: usize, word: &[usize]) -> Perm {
        word.iter().fold(Self::identity(n), |acc, &m| acc.compose(&Self::simple(n, m)))
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut w = self.clone();
        let mut word = Vec::new();
        while w.length() > 0 {
            // smallest left descent: s_m w is shorter iff w^{-1} alpha_m < 0
            let inv = w.inverse();
            let m = (1..n).find(|&m| inv.0[m - 1] > inv.0[m]).expect("nontrivial element has a descent");
            word.push(m);
            w = Self::simple(n, m).compose(&w);
        }
        word
    }

    pub fn act_eps(&self, x: &[Q]) -> Vec<Q> {
        let mut y = vec![Q::zero(); x.len()];
        for (i, v) in x.iter().enumerate() {
            y[self.0[i]] = v.clone();
        }
        y
    }

    pub fn act(&self, lam: &Weight) -> Weight {
        Weight::from_eps(&self.act_eps(&lam.to_eps()))
    }

    /// Sign of `w^{-1}(e_i - e_j)`; true when it is a positive root.
    pub fn inverse_keeps_positive(&self, i: usize, j: usize) -> bool {
        let inv = self.inverse();
        inv.0[i] < inv.0[j]
    }
}

/// Reduced word of a Weyl group element; `[i1, .., ik]` means `s_i1 ... s_ik`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylWord {
    pub word: Vec<usize>,
    pub length: usize,
}

impl Serialize for WeylWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord { word: Vec::new(), length: 0 }
    }

    pub fn from_perm(p: &Perm) -> Self {
        let word = p.reduced_word();
        WeylWord { length: word.len(), word }
    }

    /// Any word in the simple reflections; the result is the canonical
    /// reduced word of the same element.
    pub fn from_letters(rank: usize, letters: &[usize]) -> Result<Self> {
        if let Some(&m) = letters.iter().find(|&&m| m == 0 || m > rank) {
            return Err(BggError::Shape(format!("reflection index {m} outside 1..={rank}")));
        }
        Ok(Self::from_perm(&Perm::from_word(rank + 1, letters)))
    }

    /// Parses a JSON array of reflection indices, e.g. `[1,2]`.
    pub fn from_json(rank: usize, s: &str) -> Result<Self> {
        let letters: Vec<usize> = serde_json::from_str(s).map_err(|e| BggError::Parse(format!("Weyl word JSON: {e}")))?;
        if letters.len() > 64 {
            return Err(BggError::Parse("Weyl word longer than 64 letters".into()));
        }
        Self::from_letters(rank, &letters)
    }

    pub fn to_perm(&self, rank: usize) -> Perm {
        Perm::from_word(rank + 1, &self.word)
    }

    pub fn render(&self) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|m| format!("s{m}")).collect::<Vec<_>>().join("")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub simple_roots: Vec<Weight>,
    /// Positive roots ordered by height, then by first index.
    pub positive_roots: Vec<Weight>,
    /// `(i, j)` with `i < j` for each positive root `e_i - e_j`.
    pub positive_pairs: Vec<(usize, usize)>,
    pub rho: Weight,
    /// Gram matrix of the trace form on fundamental weights (inverse Cartan).
    pub form: Vec<Vec<Q>>,
}

pub fn build_root_system(rank: usize) -> Result<RootSystem> {
    if rank == 0 || rank > MAX_RANK {
        return Err(BggError::UnsupportedRank(rank));
    }
    let n = rank;
    let cartan_matrix: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let simple_roots = (1..=n).map(|m| Weight::root(n, m - 1, m)).collect();
    let mut positive_pairs: Vec<(usize, usize)> = Vec::new();
    for h in 1..=n {
        for i in 0..=n - h {
            positive_pairs.push((i, i + h));
        }
    }
    let positive_roots = positive_pairs.iter().map(|&(i, j)| Weight::root(n, i, j)).collect();
    let big_n = (n + 1) as i64;
    let form = (1..=n as i64)
        .map(|i| (1..=n as i64).map(|j| Q::new(i.min(j).into(), 1.into()) * Q::new((big_n - i.max(j)).into(), big_n.into())).collect())
        .collect();
    Ok(RootSystem { rank, cartan_matrix, simple_roots, positive_roots, positive_pairs, rho: Weight(vec![Q::one(); n]), form })
}

impl RootSystem {
    pub fn n_letters(&self) -> usize {
        self.rank + 1
    }

    pub fn check_weight(&self, lam: &Weight) -> Result<()> {
        if lam.rank() != self.rank {
            Err(BggError::Shape(format!("weight has {} coordinates, rank is {}", lam.rank(), self.rank)))
        } else {
            Ok(())
        }
    }

    pub fn pair(&self, mu: &Weight, nu: &Weight) -> Q {
        let mut s = Q::zero();
        for i in 0..self.rank {
            if mu.0[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if !nu.0[j].is_zero() {
                    s += &mu.0[i] * &self.form[i][j] * &nu.0[j];
                }
            }
        }
        s
    }

    /// `<lam, (e_i - e_j)^vee>`; roots have squared length 2 so coroot = root.
    pub fn coroot_pairing(&self, lam: &Weight, i: usize, j: usize) -> Q {
        let x = lam.to_eps();
        &x[i] - &x[j]
    }

    /// Coordinates over the simple roots (inverse Cartan applied).
    pub fn simple_root_coords(&self, lam: &Weight) -> Vec<Q> {
        (0..self.rank).map(|i| (0..self.rank).map(|j| &self.form[i][j] * &lam.0[j]).sum()).collect()
    }

    /// Casimir eigenvalue `<lam, lam + 2 rho>` in the trace-form normalisation.
    pub fn casimir_eigenvalue(&self, lam: &Weight) -> Q {
        let two_rho = self.rho.scale(&q(2));
        self.pair(lam, &lam.add(&two_rho))
    }

    pub fn weyl_group_order(&self) -> u64 {
        (1..=self.n_letters() as u64).product()
    }

    pub fn act(&self, w: &WeylWord, lam: &Weight) -> Result<Weight> {
        self.check_weight(lam)?;
        Ok(w.to_perm(self.rank).act(lam))
    }

    /// `w . lam = w(lam + rho) - rho`.
    pub fn affine_action(&self, w: &WeylWord, lam: &Weight) -> Result<Weight> {
        self.check_weight(lam)?;
        Ok(self.affine_action_perm(&w.to_perm(self.rank), lam))
    }

    pub fn affine_action_perm(&self, p: &Perm, lam: &Weight) -> Weight {
        p.act(&lam.add(&self.rho)).sub(&self.rho)
    }

    pub fn character_is_regular(&self, lam: &Weight) -> Result<bool> {
        self.check_weight(lam)?;
        let x = lam.add(&self.rho).to_eps();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                if x[i] == x[j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Positive roots `(i, j)` of the Levi factor of the parabolic with the
    /// given crossed nodes.
    pub fn levi_positive_pairs(&self, crossed: &NodeSet) -> Vec<(usize, usize)> {
        self.positive_pairs.iter().copied().filter(|&(i, j)| crossed.grading(i, j) == 0).collect()
    }

    /// Longest element of the Weyl group of the Levi factor.
    pub fn levi_longest(&self, crossed: &NodeSet) -> Perm {
        let mut p = vec![0; self.n_letters()];
        for b in crossed.blocks(self.rank) {
            for i in b.clone() {
                p[i] = b.start + b.end - 1 - i;
            }
        }
        Perm(p)
    }

    /// Elements of the Weyl group of the Levi of `crossed` (block permutations).
    pub fn levi_weyl_group(&self, crossed: &NodeSet) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.n_letters())];
        for b in crossed.blocks(self.rank) {
            let perms = permutations(b.len());
            let mut next = Vec::with_capacity(out.len() * perms.len());
            for base in &out {
                for p in &perms {
                    let mut v = base.0.clone();
                    for (k, &t) in p.iter().enumerate() {
                        v[b.start + k] = b.start + t;
                    }
                    next.push(Perm(v));
                }
            }
            out = next;
        }
        out
    }

    /// Minimal length representatives `W^q` of `W_q \ W`, graded by length.
    pub fn hasse_quotient(&self, crossed: &NodeSet) -> Result<Vec<Vec<WeylWord>>> {
        self.relative_hasse_quotient(&NodeSet::empty(), crossed)
    }

    /// The same inside `W_p` for nested crossings `crossed_p ⊆ crossed_q`:
    /// elements `w` of `W_p` with `w^{-1} alpha_j > 0` for every node `j`
    /// not crossed in `q`.
    pub fn relative_hasse_quotient(&self, crossed_p: &NodeSet, crossed_q: &NodeSet) -> Result<Vec<Vec<WeylWord>>> {
        crossed_p.validate(self.rank)?;
        crossed_q.validate(self.rank)?;
        if !crossed_p.is_subset(crossed_q) {
            return Err(BggError::Nesting(format!("{crossed_p:?} ⊄ {crossed_q:?}")));
        }
        let free: Vec<usize> = crossed_q.complement(self.rank).nodes().to_vec();
        let mut words: Vec<WeylWord> = self
            .levi_weyl_group(crossed_p)
            .into_iter()
            .filter(|w| free.iter().all(|&m| w.inverse_keeps_positive(m - 1, m)))
            .map(|w| WeylWord::from_perm(&w))
            .collect();
        words.sort();
        words.sort_by_key(|w| w.length);
        let top = words.last().map(|w| w.length).unwrap_or(0);
        let mut graded = vec![Vec::new(); top + 1];
        for w in words {
            graded[w.length].push(w);
        }
        Ok(graded)
    }

    /// Weyl dimension formula for the Levi factor of `crossed`.
    pub fn weyl_dimension(&self, lam: &Weight, crossed: &NodeSet) -> Q {
        let x = lam.add(&self.rho).to_eps();
        let r = self.rho.to_eps();
        let mut d = Q::one();
        for (i, j) in self.levi_positive_pairs(crossed) {
            d *= (&x[i] - &x[j]) / (&r[i] - &r[j]);
        }
        d
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn small_ranks() {
        let a1 = build_root_system(1).unwrap();
        assert_eq!(a1.positive_roots.len(), 1);
        assert_eq!(a1.rho, w(&[1]));
        let a2 = build_root_system(2).unwrap();
        assert_eq!(a2.positive_roots.len(), 3);
        let a3 = build_root_system(3).unwrap();
        assert_eq!(a3.positive_roots.len(), 6);
        assert_eq!(a3.weyl_group_order(), 24);
        assert!(matches!(build_root_system(0), Err(BggError::UnsupportedRank(0))));
        assert!(build_root_system(8).is_err());
    }

    #[test]
    fn roots_have_length_two_and_rho_is_half_sum() {
        for n in 1..=MAX_RANK {
            let rs = build_root_system(n).unwrap();
            let mut sum = Weight::zero(n);
            for a in &rs.positive_roots {
                assert_eq!(rs.pair(a, a), q(2));
                sum = sum.add(a);
            }
            assert_eq!(sum.scale(&crate::rational::qf(1, 2)), rs.rho);
            for (i, a) in rs.simple_roots.iter().enumerate() {
                let row: Vec<Q> = rs.cartan_matrix[i].iter().map(|&c| q(c)).collect();
                assert_eq!(a.0, row);
            }
        }
    }

    #[test]
    fn affine_action_examples() {
        let rs = build_root_system(2).unwrap();
        let s1 = WeylWord::from_letters(2, &[1]).unwrap();
        assert_eq!(rs.affine_action(&WeylWord::identity(), &w(&[3, 5])).unwrap(), w(&[3, 5]));
        assert_eq!(rs.affine_action(&s1, &w(&[-1, 4])).unwrap(), w(&[-1, 4]));
        assert_eq!(rs.affine_action(&s1, &w(&[0, 0])).unwrap(), w(&[-2, 1]));
        assert!(rs.affine_action(&s1, &w(&[0])).is_err());
    }

    #[test]
    fn hasse_examples() {
        let a2 = build_root_system(2).unwrap();
        let h = a2.hasse_quotient(&NodeSet::new([1])).unwrap();
        let words: Vec<Vec<usize>> = h.iter().flatten().map(|w| w.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![1, 2]]);
        assert_eq!(a2.hasse_quotient(&NodeSet::empty()).unwrap(), vec![vec![WeylWord::identity()]]);
        let a3 = build_root_system(3).unwrap();
        let h = a3.hasse_quotient(&NodeSet::new([1, 2])).unwrap();
        assert_eq!(h.iter().map(|g| g.len()).sum::<usize>(), 12);
        assert_eq!(h.len() - 1, 5);
    }

    #[test]
    fn regularity() {
        let a2 = build_root_system(2).unwrap();
        assert!(a2.character_is_regular(&w(&[0, 0])).unwrap());
        assert!(!a2.character_is_regular(&w(&[-1, 0])).unwrap());
        let a3 = build_root_system(3).unwrap();
        for k in 0..3 {
            let lam = w(&[-1 - k + k, 2, k]);
            assert!(!a3.character_is_regular(&lam).unwrap());
        }
    }

    #[test]
    fn reduced_words_are_lex_smallest() {
        let p = Perm::from_word(3, &[2, 1, 2]);
        assert_eq!(p.reduced_word(), vec![1, 2, 1]);
        assert_eq!(WeylWord::from_letters(2, &[1, 1]).unwrap(), WeylWord::identity());
        assert_eq!(WeylWord::from_json(2, "[2,1,2]").unwrap().word, vec![1, 2, 1]);
        assert!(WeylWord::from_json(2, "[3]").is_err());
    }

    #[test]
    fn nodeset_parse_render() {
        assert_eq!(NodeSet::parse("2,1").unwrap(), NodeSet::new([1, 2]));
        assert_eq!(NodeSet::parse("{}").unwrap(), NodeSet::empty());
        assert_eq!(NodeSet::parse("-").unwrap().render(), "-");
        assert!(NodeSet::parse("1,1").is_err());
        assert!(NodeSet::parse("0").is_err());
        assert!(NodeSet::parse("1,,2").is_err());
        assert_eq!(NodeSet::new([1, 3]).blocks(3), vec![0..1, 1..3, 3..4]);
    }

    #[test]
    fn weight_json() {
        let lam = Weight(vec![q(1), crate::rational::qf(-1, 2)]);
        let s = lam.to_json();
        assert_eq!(s, r#"["1/1","-1/2"]"#);
        assert_eq!(Weight::from_json(&s).unwrap(), lam);
        assert!(Weight::from_json("[1]").is_err());
    }

    #[test]
    fn predicates() {
        let x = NodeSet::new([1]);
        let lam = Weight(vec![crate::rational::qf(-1, 2), q(0), q(2)]);
        assert!(!lam.is_dominant());
        assert!(!lam.is_integral());
        assert!(lam.is_dominant_for(&x));
        assert!(lam.is_integral_for(&x));
    }
}

