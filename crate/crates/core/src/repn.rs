//! Explicit finite-dimensional modules with exact action matrices.
//!
//! A module stores one matrix per root vector `E_ab` of its acting algebra
//! (`sl(n+1)` or a Levi factor of it); the Cartan part acts through the
//! recorded weights.  Irreducibles are cut out of tensor products of
//! exterior powers of the standard representation.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{BggError, Result};
use crate::matrix::QMatrix;
use crate::parabolic::{levi_roots, root_bracket, Root, RootBracket};
use crate::rational::{format_q, q, qf, Q};
use crate::rootdata::{build_root_system, NodeSet, Perm, RootSystem, Weight};

pub const DEFAULT_MAX_DIM: usize = 20_000;

/// Dimension guard, overridable through `BGG_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("BGG_MAX_DIM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

fn guard(dim: usize) -> Result<()> {
    guard_with(dim, max_dim())
}

fn guard_with(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        Err(BggError::TooLarge { dim, limit })
    } else {
        Ok(())
    }
}

/// The Levi factor `l_X` of `sl(rank+1)` for the crossed nodes `X`; `X = ∅`
/// is the whole algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Algebra {
    pub rank: usize,
    pub crossed: NodeSet,
}

impl Algebra {
    pub fn g(rank: usize) -> Self {
        Algebra { rank, crossed: NodeSet::empty() }
    }

    pub fn levi(rank: usize, crossed: &NodeSet) -> Self {
        Algebra { rank, crossed: crossed.clone() }
    }

    pub fn n_letters(&self) -> usize {
        self.rank + 1
    }

    /// Root vectors of the algebra, positive ones first.
    pub fn roots(&self) -> Vec<Root> {
        levi_roots(self.rank, &self.crossed)
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots().into_iter().filter(|&(i, j)| i < j).collect()
    }

    /// Simple nodes of the semisimple part.
    pub fn simple_nodes(&self) -> Vec<usize> {
        (1..=self.rank).filter(|&m| !self.crossed.contains(m)).collect()
    }

    pub fn contains_root(&self, (i, j): Root) -> bool {
        self.crossed.grading(i, j) == 0
    }

    /// `l_self ⊇ l_other`.
    pub fn contains(&self, other: &Algebra) -> bool {
        self.rank == other.rank && self.crossed.is_subset(&other.crossed)
    }

    pub fn root_system(&self) -> RootSystem {
        build_root_system(self.rank).expect("rank validated on construction")
    }

    /// Half the sum of the positive roots of the algebra.
    pub fn rho(&self) -> Weight {
        let mut r = Weight::zero(self.rank);
        for (i, j) in self.positive_roots() {
            r = r.add(&Weight::root(self.rank, i, j));
        }
        r.scale(&qf(1, 2))
    }

    pub fn longest_element(&self) -> Perm {
        self.root_system().levi_longest(&self.crossed)
    }
}

/// Casimir eigenvalue `<lam, lam + 2 rho_l>` of the irreducible module of
/// `alg` with highest weight `lam` (trace-form normalisation).
pub fn casimir_eigenvalue(alg: &Algebra, lam: &Weight) -> Q {
    let rs = alg.root_system();
    rs.pair(lam, &lam.add(&alg.rho().scale(&q(2))))
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    pub algebra: Algebra,
    pub highest_weight: Option<Weight>,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    /// Character of the centre added on top of the integral construction,
    /// in fundamental coordinates (zero at uncrossed nodes).
    pub central_twist: Vec<Q>,
    ops: BTreeMap<Root, QMatrix>,
}

impl WeightModule {
    pub fn from_parts(
        algebra: Algebra,
        highest_weight: Option<Weight>,
        labels: Vec<String>,
        weights: Vec<Weight>,
        ops: BTreeMap<Root, QMatrix>,
    ) -> Result<Self> {
        let d = weights.len();
        if labels.len() != d {
            return Err(BggError::Shape("labels and weights differ in length".into()));
        }
        for r in algebra.roots() {
            match ops.get(&r) {
                Some(m) if m.nrows() == d && m.ncols() == d => {}
                _ => return Err(BggError::Shape(format!("missing or misshapen action of E{r:?}"))),
            }
        }
        let rank = algebra.rank;
        Ok(WeightModule { central_twist: vec![Q::zero(); rank], algebra, highest_weight, labels, weights, ops })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank
    }

    /// Action of the root vector `E_ij`.
    pub fn op(&self, r: Root) -> &QMatrix {
        self.ops.get(&r).unwrap_or_else(|| panic!("E{r:?} is not in the acting algebra"))
    }

    pub fn try_op(&self, r: Root) -> Option<&QMatrix> {
        self.ops.get(&r)
    }

    pub fn e(&self, m: usize) -> &QMatrix {
        self.op((m - 1, m))
    }

    pub fn f(&self, m: usize) -> &QMatrix {
        self.op((m, m - 1))
    }

    pub fn h(&self, m: usize) -> QMatrix {
        let d = self.dim();
        QMatrix::from_triplets(d, d, (0..d).map(|k| (k, k, self.weights[k].0[m - 1].clone())))
    }

    /// Diagonal action of `E_ii - E_jj`.
    fn cartan(&self, i: usize, j: usize) -> QMatrix {
        let d = self.dim();
        QMatrix::from_triplets(
            d,
            d,
            (0..d).map(|k| {
                let x = self.weights[k].to_eps();
                (k, k, &x[i] - &x[j])
            }),
        )
    }

    /// Commutation relations of all root vectors, compatibility of the
    /// action with the recorded weights, and the Chevalley relations.
    pub fn check_relations(&self) -> Result<()> {
        let fail = |m: String| Err(BggError::Internal(format!("module relations: {m}")));
        let roots = self.algebra.roots();
        for &x in &roots {
            let mx = self.op(x);
            let wx = Weight::root(self.rank(), x.0, x.1);
            for (row, col, _) in mx.triplets() {
                if self.weights[row] != self.weights[col].add(&wx) {
                    return fail(format!("E{x:?} does not shift weights by its root"));
                }
            }
            for &y in &roots {
                let lhs = mx.commutator(self.op(y));
                let rhs = match root_bracket(x, y) {
                    RootBracket::Zero => QMatrix::zeros(self.dim(), self.dim()),
                    RootBracket::Root(c, z) => self.op(z).scale(&q(c)),
                    RootBracket::Cartan(i, j) => self.cartan(i, j),
                };
                if lhs != rhs {
                    return fail(format!("[E{x:?}, E{y:?}]"));
                }
            }
        }
        let rs = self.algebra.root_system();
        for &i in &self.algebra.simple_nodes() {
            for &j in &self.algebra.simple_nodes() {
                let ef = self.e(i).commutator(self.f(j));
                let want = if i == j { self.h(i) } else { QMatrix::zeros(self.dim(), self.dim()) };
                if ef != want {
                    return fail(format!("[e{i}, f{j}]"));
                }
                let he = self.h(i).commutator(self.e(j));
                if he != self.e(j).scale(&q(rs.cartan_matrix[j - 1][i - 1])) {
                    return fail(format!("[h{i}, e{j}]"));
                }
            }
        }
        Ok(())
    }

    /// Dimension of the space of weight `mu` killed by every raising operator.
    pub fn highest_weight_space_dim(&self, mu: &Weight) -> usize {
        let idx: Vec<usize> = (0..self.dim()).filter(|&k| &self.weights[k] == mu).collect();
        if idx.is_empty() {
            return 0;
        }
        let mut stack: Option<QMatrix> = None;
        for m in self.algebra.simple_nodes() {
            let part = self.e(m).select_columns(&idx);
            stack = Some(match stack {
                None => part,
                Some(s) => s.vstack(&part),
            });
        }
        match stack {
            None => idx.len(),
            Some(s) => idx.len() - s.rank(),
        }
    }

    /// Sorted weight multiset.
    pub fn weight_multiset(&self) -> Vec<Weight> {
        let mut w = self.weights.clone();
        w.sort();
        w
    }

    pub fn multiplicity(&self, mu: &Weight) -> usize {
        self.weights.iter().filter(|w| *w == mu).count()
    }

    pub fn dump(&self) -> ModuleDump {
        let trip = |m: &QMatrix| m.triplets().into_iter().map(|(i, j, x)| (i, j, format_q(&x))).collect();
        let mut generators = BTreeMap::new();
        for m in self.algebra.simple_nodes() {
            generators.insert(format!("e{m}"), trip(self.e(m)));
            generators.insert(format!("f{m}"), trip(self.f(m)));
        }
        for m in 1..=self.rank() {
            generators.insert(format!("h{m}"), trip(&self.h(m)));
        }
        ModuleDump {
            algebra: self.algebra.clone(),
            dim: self.dim(),
            highest_weight: self.highest_weight.clone(),
            central_twist: Weight(self.central_twist.clone()),
            labels: self.labels.clone(),
            weights: self.weights.clone(),
            generators,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleDump {
    pub algebra: Algebra,
    pub dim: usize,
    pub highest_weight: Option<Weight>,
    pub central_twist: Weight,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    /// Sparse triplets `(row, col, "num/den")`.
    pub generators: BTreeMap<String, Vec<(usize, usize, String)>>,
}

pub fn trivial(alg: &Algebra) -> WeightModule {
    let ops = alg.roots().into_iter().map(|r| (r, QMatrix::zeros(1, 1))).collect();
    let zero = Weight::zero(alg.rank);
    WeightModule::from_parts(alg.clone(), Some(zero.clone()), vec!["1".into()], vec![zero], ops).expect("trivial module")
}

/// Span bookkeeping in the tensor space during irrep construction; vectors
/// are keyed by monomial index and kept in reduced echelon form.
#[derive(Default)]
struct SpaceBasis {
    rows: Vec<BTreeMap<usize, Q>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl SpaceBasis {
    fn reduce(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = v.clone();
        for (c, x) in v {
            if let Some(&r) = self.pivot_row.get(c) {
                for (k, y) in &self.rows[r] {
                    let e = out.entry(*k).or_insert_with(Q::zero);
                    *e -= x * y;
                    if e.is_zero() {
                        out.remove(k);
                    }
                }
            }
        }
        out
    }

    fn insert(&mut self, v: &BTreeMap<usize, Q>) -> Option<BTreeMap<usize, Q>> {
        let r = self.reduce(v);
        let (&p, lead) = r.iter().next()?;
        let lead = lead.clone();
        let r: BTreeMap<usize, Q> = r.into_iter().map(|(k, x)| (k, x / &lead)).collect();
        for row in self.rows.iter_mut() {
            if let Some(x) = row.get(&p).cloned() {
                for (k, y) in &r {
                    let e = row.entry(*k).or_insert_with(Q::zero);
                    *e -= &x * y;
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r.clone());
        Some(r)
    }

    /// Rows in pivot order with their pivots.
    fn ordered(&self) -> Vec<(usize, &BTreeMap<usize, Q>)> {
        self.pivot_row.iter().map(|(&p, &r)| (p, &self.rows[r])).collect()
    }
}

/// Tensor product of exterior powers of the standard module with monomials
/// stored as one bitmask per factor.
struct Tensor {
    n: usize,
    mons: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl Tensor {
    fn id(&mut self, m: Vec<u8>) -> usize {
        if let Some(&k) = self.index.get(&m) {
            return k;
        }
        let k = self.mons.len();
        self.index.insert(m.clone(), k);
        self.mons.push(m);
        k
    }

    /// Occupation numbers, i.e. epsilon coordinates of the weight.
    fn eps(&self, k: usize) -> Vec<i64> {
        let mut x = vec![0i64; self.n];
        for s in &self.mons[k] {
            for (a, xa) in x.iter_mut().enumerate() {
                if s >> a & 1 == 1 {
                    *xa += 1;
                }
            }
        }
        x
    }

    /// `E_ab` applied to a vector.
    fn apply(&mut self, a: usize, b: usize, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        let (lo, hi) = (a.min(b), a.max(b));
        let between: u8 = ((1u16 << hi) - (1u16 << (lo + 1))) as u8;
        for (&k, c) in v {
            let m = self.mons[k].clone();
            for f in 0..m.len() {
                let s = m[f];
                if s >> b & 1 == 1 && s >> a & 1 == 0 {
                    let mut m2 = m.clone();
                    m2[f] = s & !(1 << b) | (1 << a);
                    let sign = (s & between).count_ones() % 2 == 1;
                    let k2 = self.id(m2);
                    let e = out.entry(k2).or_insert_with(Q::zero);
                    if sign {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                    if e.is_zero() {
                        out.remove(&k2);
                    }
                }
            }
        }
        out
    }
}

/// Irreducible module of `alg` with highest weight `lam`, which must be
/// dominant and integral at the uncrossed nodes; the coordinates at crossed
/// nodes are an arbitrary rational central character.
pub fn irrep(alg: &Algebra, lam: &Weight) -> Result<WeightModule> {
    irrep_with_limit(alg, lam, max_dim())
}

pub fn irrep_with_limit(alg: &Algebra, lam: &Weight, limit: usize) -> Result<WeightModule> {
    let rs = build_root_system(alg.rank)?;
    rs.check_weight(lam)?;
    if !lam.is_dominant_for(&alg.crossed) || !lam.is_integral_for(&alg.crossed) {
        return Err(BggError::Representability(format!(
            "highest weight {lam} is not dominant integral at the nodes {:?}",
            alg.simple_nodes()
        )));
    }
    let expected = rs.weyl_dimension(lam, &alg.crossed);
    let expected: usize = crate::rational::to_i64(&expected).filter(|&d| d > 0).ok_or_else(|| BggError::Internal("Weyl dimension".into()))? as usize;
    guard_with(expected, limit)?;
    let n = alg.n_letters();
    let mut lam_int = lam.clone();
    let mut factors: Vec<u8> = Vec::new();
    for m in 1..=alg.rank {
        if alg.crossed.contains(m) {
            lam_int.0[m - 1] = Q::zero();
        } else {
            let c = crate::rational::to_i64(&lam.0[m - 1]).expect("checked integral") as usize;
            for _ in 0..c {
                factors.push(((1u16 << m) - 1) as u8);
            }
        }
    }
    let twist = lam.sub(&lam_int);
    let mut t = Tensor { n, mons: Vec::new(), index: HashMap::new() };
    let v0 = t.id(factors);
    let mut spaces: Vec<(Vec<i64>, SpaceBasis)> = Vec::new();
    let mut space_of: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut queue: std::collections::VecDeque<BTreeMap<usize, Q>> = Default::default();
    let start: BTreeMap<usize, Q> = [(v0, Q::one())].into_iter().collect();
    let mut sb = SpaceBasis::default();
    sb.insert(&start);
    let e0 = t.eps(v0);
    space_of.insert(e0.clone(), 0);
    spaces.push((e0, sb));
    queue.push_back(start);
    let mut count = 1usize;
    let lowering: Vec<usize> = alg.simple_nodes();
    while let Some(v) = queue.pop_front() {
        for &m in &lowering {
            let w = t.apply(m, m - 1, &v);
            let Some((&k, _)) = w.iter().next() else { continue };
            let eps = t.eps(k);
            let si = match space_of.get(&eps) {
                Some(&s) => s,
                None => {
                    spaces.push((eps.clone(), SpaceBasis::default()));
                    space_of.insert(eps, spaces.len() - 1);
                    spaces.len() - 1
                }
            };
            if let Some(r) = spaces[si].1.insert(&w) {
                count += 1;
                if count > expected {
                    return Err(BggError::Internal("irrep construction exceeded the Weyl dimension".into()));
                }
                queue.push_back(r);
            }
        }
    }
    if count != expected {
        return Err(BggError::Internal(format!("irrep dimension {count}, Weyl formula {expected}")));
    }
    // Module basis: weight spaces in discovery order, rows by pivot.
    let mut labels = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let mut index_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vectors: Vec<BTreeMap<usize, Q>> = Vec::with_capacity(count);
    for (si, (eps, sb)) in spaces.iter().enumerate() {
        let x: Vec<Q> = eps.iter().map(|&v| q(v)).collect();
        let w = Weight::from_eps(&x).add(&twist);
        for (p, row) in sb.ordered() {
            index_of.insert((si, p), vectors.len());
            labels.push(format!("v{}", vectors.len()));
            weights.push(w.clone());
            vectors.push(row.clone());
        }
    }
    let mut ops = BTreeMap::new();
    for (a, b) in alg.roots() {
        let mut trip = Vec::new();
        for (col, v) in vectors.iter().enumerate() {
            let w = t.apply(a, b, v);
            let Some((&k, _)) = w.iter().next() else { continue };
            let si = *space_of
                .get(&t.eps(k))
                .ok_or_else(|| BggError::Internal("root vector left the module".into()))?;
            // Coordinates are the values at the pivots; verify the expansion.
            let mut rebuilt: BTreeMap<usize, Q> = BTreeMap::new();
            for (p, row) in spaces[si].1.ordered() {
                if let Some(c) = w.get(&p) {
                    trip.push((index_of[&(si, p)], col, c.clone()));
                    for (kk, y) in row {
                        let e = rebuilt.entry(*kk).or_insert_with(Q::zero);
                        *e += c * y;
                    }
                }
            }
            rebuilt.retain(|_, x| !x.is_zero());
            if rebuilt != w {
                return Err(BggError::Internal(format!("E({a},{b}) does not preserve the submodule")));
            }
        }
        ops.insert((a, b), QMatrix::from_triplets(count, count, trip));
    }
    let mut m = WeightModule::from_parts(alg.clone(), Some(lam.clone()), labels, weights, ops)?;
    m.central_twist = twist.0;
    Ok(m)
}

/// Adds a central character (one rational per crossed node).
pub fn twist(m: &WeightModule, central: &[Q]) -> Result<WeightModule> {
    let crossed = m.algebra.crossed.nodes();
    if central.len() != crossed.len() {
        return Err(BggError::Shape(format!("centre has dimension {}, got {} values", crossed.len(), central.len())));
    }
    let mut shift = Weight::zero(m.rank());
    for (&node, c) in crossed.iter().zip(central) {
        shift.0[node - 1] = c.clone();
    }
    let mut out = m.clone();
    out.weights = m.weights.iter().map(|w| w.add(&shift)).collect();
    out.highest_weight = m.highest_weight.as_ref().map(|w| w.add(&shift));
    out.central_twist = Weight(m.central_twist.clone()).add(&shift).0;
    Ok(out)
}

pub fn dual(m: &WeightModule) -> WeightModule {
    let ops = m.ops.iter().map(|(r, a)| (*r, a.transpose().neg())).collect();
    let w0 = m.algebra.longest_element();
    WeightModule {
        algebra: m.algebra.clone(),
        highest_weight: m.highest_weight.as_ref().map(|w| w0.act(w).neg()),
        labels: m.labels.iter().map(|l| format!("{l}*")).collect(),
        weights: m.weights.iter().map(|w| w.neg()).collect(),
        central_twist: m.central_twist.iter().map(|x| -x).collect(),
        ops,
    }
}

fn same_algebra(a: &WeightModule, b: &WeightModule) -> Result<()> {
    if a.algebra != b.algebra {
        return Err(BggError::Shape("modules over different algebras".into()));
    }
    Ok(())
}

pub fn tensor(a: &WeightModule, b: &WeightModule) -> Result<WeightModule> {
    same_algebra(a, b)?;
    guard(a.dim() * b.dim())?;
    let (ia, ib) = (QMatrix::identity(a.dim()), QMatrix::identity(b.dim()));
    let ops = a.ops.iter().map(|(r, x)| (*r, x.kron(&ib).add(&ia.kron(b.op(*r))))).collect();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
            weights.push(a.weights[i].add(&b.weights[j]));
        }
    }
    Ok(WeightModule {
        algebra: a.algebra.clone(),
        highest_weight: match (&a.highest_weight, &b.highest_weight) {
            (Some(x), Some(y)) => Some(x.add(y)),
            _ => None,
        },
        labels,
        weights,
        central_twist: Weight(a.central_twist.clone()).add(&Weight(b.central_twist.clone())).0,
        ops,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Sorted `k`-subsets (`strict`) or `k`-multisets of `0..n`, lexicographic.
fn index_tuples(n: usize, k: usize, strict: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, strict: bool, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, strict, if strict { i + 1 } else { i }, cur, out);
            cur.pop();
        }
    }
    rec(n, k, strict, 0, &mut cur, &mut out);
    out
}

fn power(m: &WeightModule, k: usize, strict: bool) -> Result<WeightModule> {
    let d = m.dim();
    let size = if strict { binomial(d, k) } else { binomial(d + k - 1, k) };
    guard(size)?;
    let tuples = index_tuples(d, k, strict);
    let index: HashMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let cols: BTreeMap<Root, Vec<Vec<(usize, Q)>>> = m.ops.iter().map(|(r, a)| (*r, a.transpose().to_sparse_rows())).collect();
    let mut ops = BTreeMap::new();
    for (r, colv) in &cols {
        let mut trip = Vec::new();
        for (c, t) in tuples.iter().enumerate() {
            for p in 0..k {
                if !strict && p > 0 && t[p] == t[p - 1] {
                    // each distinct factor once, weighted by its multiplicity
                    continue;
                }
                let mult = if strict { 1 } else { t.iter().filter(|&&x| x == t[p]).count() };
                for (target, x) in &colv[t[p]] {
                    let mut u = t.clone();
                    u.remove(p);
                    let sign = if strict {
                        if u.contains(target) {
                            continue;
                        }
                        let pos = u.iter().filter(|&&y| y < *target).count();
                        // moving from slot p to slot pos
                        let s = (p as i64 - pos as i64).rem_euclid(2) == 1;
                        u.insert(pos, *target);
                        s
                    } else {
                        let pos = u.iter().filter(|&&y| y <= *target).count();
                        u.insert(pos, *target);
                        false
                    };
                    let mut val = x * q(mult as i64);
                    if sign {
                        val = -val;
                    }
                    trip.push((index[&u], c, val));
                }
            }
        }
        ops.insert(*r, QMatrix::from_triplets(size, size, trip));
    }
    let mut labels = Vec::with_capacity(size);
    let mut weights = Vec::with_capacity(size);
    let sep = if strict { "∧" } else { "·" };
    for t in &tuples {
        labels.push(if t.is_empty() { "1".into() } else { t.iter().map(|&i| m.labels[i].clone()).collect::<Vec<_>>().join(sep) });
        weights.push(t.iter().fold(Weight::zero(m.rank()), |acc, &i| acc.add(&m.weights[i])));
    }
    Ok(WeightModule {
        algebra: m.algebra.clone(),
        highest_weight: None,
        labels,
        weights,
        central_twist: Weight(m.central_twist.clone()).scale(&q(k as i64)).0,
        ops,
    })
}

pub fn ext_power(m: &WeightModule, k: usize) -> Result<WeightModule> {
    power(m, k, true)
}

pub fn sym_power(m: &WeightModule, k: usize) -> Result<WeightModule> {
    power(m, k, false)
}

/// `sum_alpha rho(E_alpha) rho(E_-alpha) + diag <mu, mu>` over the roots of
/// the acting algebra.
pub fn casimir_matrix(m: &WeightModule) -> QMatrix {
    let rs = m.algebra.root_system();
    let d = m.dim();
    let mut c = QMatrix::from_triplets(d, d, (0..d).map(|k| (k, k, rs.pair(&m.weights[k], &m.weights[k]))));
    for (i, j) in m.algebra.roots() {
        c = c.add(&m.op((i, j)).mul(m.op((j, i))));
    }
    c
}

/// The module restricted to the Levi of `crossed`, plus the matrices of the
/// root vectors of the nilradical `p₊` for that crossing.
pub fn restrict(m: &WeightModule, crossed: &NodeSet) -> Result<(WeightModule, Vec<(Root, QMatrix)>)> {
    let target = Algebra::levi(m.rank(), crossed);
    if !m.algebra.contains(&target) {
        return Err(BggError::Shape("restriction target is not a subalgebra".into()));
    }
    let ops = m.ops.iter().filter(|(r, _)| target.contains_root(**r)).map(|(r, a)| (*r, a.clone())).collect();
    let nil = m.ops.iter().filter(|((i, j), _)| crossed.grading(*i, *j) > 0).map(|(r, a)| (*r, a.clone())).collect();
    let mut out = WeightModule::from_parts(target, None, m.labels.clone(), m.weights.clone(), ops)?;
    out.central_twist = m.central_twist.clone();
    Ok((out, nil))
}

/// Dimension of `V / p₊ V` for the nilradical of the crossing `crossed`.
pub fn coinvariants_dim(m: &WeightModule, crossed: &NodeSet) -> Result<usize> {
    let (_, nil) = restrict(m, crossed)?;
    if nil.is_empty() {
        return Ok(m.dim());
    }
    let mut stacked = nil[0].1.clone();
    for (_, a) in &nil[1..] {
        stacked = stacked.hstack(a);
    }
    Ok(m.dim() - stacked.rank())
}

/// Adjoint module of `alg` on its root vectors followed by `H_1..H_n`.
pub fn adjoint_module(alg: &Algebra) -> WeightModule {
    let roots = alg.roots();
    let nr = roots.len();
    let d = nr + alg.rank;
    let index: HashMap<Root, usize> = roots.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut ops = BTreeMap::new();
    for &x in &roots {
        let mut trip = Vec::new();
        for (col, &y) in roots.iter().enumerate() {
            match root_bracket(x, y) {
                RootBracket::Zero => {}
                RootBracket::Root(c, z) => trip.push((index[&z], col, q(c))),
                RootBracket::Cartan(i, j) => {
                    let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
                    for mm in lo + 1..=hi {
                        trip.push((nr + mm - 1, col, q(s)));
                    }
                }
            }
        }
        // [E_ab, H_m] = -(e_a - e_b)(H_m) E_ab
        let (a, b) = x;
        for mm in 1..=alg.rank {
            let hv = |t: usize| -> i64 {
                if t == mm - 1 {
                    1
                } else if t == mm {
                    -1
                } else {
                    0
                }
            };
            let v = hv(a) - hv(b);
            if v != 0 {
                trip.push((index[&x], nr + mm - 1, q(-v)));
            }
        }
        ops.insert(x, QMatrix::from_triplets(d, d, trip));
    }
    let mut labels: Vec<String> = roots.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    labels.extend((1..=alg.rank).map(|m| format!("H{m}")));
    let mut weights: Vec<Weight> = roots.iter().map(|&(i, j)| Weight::root(alg.rank, i, j)).collect();
    weights.extend((0..alg.rank).map(|_| Weight::zero(alg.rank)));
    WeightModule::from_parts(alg.clone(), None, labels, weights, ops).expect("adjoint module")
}

trait SparseRows {
    fn to_sparse_rows(&self) -> Vec<Vec<(usize, Q)>>;
}

impl SparseRows for QMatrix {
    fn to_sparse_rows(&self) -> Vec<Vec<(usize, Q)>> {
        (0..self.nrows()).map(|i| self.row(i).clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn small_irreps() {
        let m = irrep(&Algebra::g(1), &w(&[2])).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.weight_multiset(), vec![w(&[-2]), w(&[0]), w(&[2])]);
        m.check_relations().unwrap();
        let adj = irrep(&Algebra::g(3), &w(&[1, 0, 1])).unwrap();
        assert_eq!(adj.dim(), 15);
        adj.check_relations().unwrap();
        let a2 = irrep(&Algebra::g(2), &w(&[1, 1])).unwrap();
        assert_eq!(a2.dim(), 8);
        assert_eq!(a2.multiplicity(&w(&[0, 0])), 2);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(matches!(irrep(&Algebra::g(2), &w(&[-1, 0])), Err(BggError::Representability(_))));
        let half = Weight(vec![qf(1, 2), q(0)]);
        assert!(irrep(&Algebra::g(2), &half).is_err());
        // rational value allowed at a crossed node
        let lev = Algebra::levi(2, &NodeSet::new([1]));
        let m = irrep(&lev, &half).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.central_twist, vec![qf(1, 2), q(0)]);
    }

    #[test]
    fn dimension_guard() {
        let r = irrep_with_limit(&Algebra::g(2), &w(&[2, 2]), 10);
        assert!(matches!(r, Err(BggError::TooLarge { dim: 27, limit: 10 })));
    }

    #[test]
    fn functors() {
        let g3 = Algebra::g(3);
        let std = irrep(&g3, &w(&[1, 0, 0])).unwrap();
        let det = ext_power(&std, 4).unwrap();
        assert_eq!(det.dim(), 1);
        assert_eq!(det.weights[0], w(&[0, 0, 0]));
        assert!(det.op((0, 1)).is_zero());
        let l2 = ext_power(&std, 2).unwrap();
        assert_eq!(l2.dim(), 6);
        l2.check_relations().unwrap();
        let s2 = sym_power(&std, 2).unwrap();
        assert_eq!(s2.dim(), 10);
        s2.check_relations().unwrap();
        let t = tensor(&std, &dual(&std)).unwrap();
        assert_eq!(t.dim(), 16);
        t.check_relations().unwrap();
        let dd = dual(&dual(&std));
        assert_eq!(dd.weights, std.weights);
        assert_eq!(dd.op((1, 0)), std.op((1, 0)));
    }

    #[test]
    fn casimir_values() {
        let g1 = Algebra::g(1);
        let std = irrep(&g1, &w(&[1])).unwrap();
        assert_eq!(casimir_matrix(&std), QMatrix::scalar(2, &qf(3, 2)));
        assert_eq!(casimir_eigenvalue(&g1, &w(&[1])), qf(3, 2));
        let g2 = Algebra::g(2);
        let adj = irrep(&g2, &w(&[1, 1])).unwrap();
        assert_eq!(casimir_matrix(&adj), QMatrix::scalar(8, &q(6)));
        assert!(casimir_matrix(&trivial(&g2)).is_zero());
    }

    #[test]
    fn adjoint_matches_irrep_data() {
        let g2 = Algebra::g(2);
        let adj = adjoint_module(&g2);
        adj.check_relations().unwrap();
        assert_eq!(adj.weight_multiset(), irrep(&g2, &w(&[1, 1])).unwrap().weight_multiset());
        assert_eq!(casimir_matrix(&adj), QMatrix::scalar(8, &q(6)));
        let lev = Algebra::levi(3, &NodeSet::new([1]));
        adjoint_module(&lev).check_relations().unwrap();
    }

    #[test]
    fn restriction_and_coinvariants() {
        let g3 = Algebra::g(3);
        let std = irrep(&g3, &w(&[1, 0, 0])).unwrap();
        let x = NodeSet::new([1]);
        let (r, nil) = restrict(&std, &x).unwrap();
        assert_eq!(nil.len(), 3);
        assert_eq!(r.algebra, Algebra::levi(3, &x));
        // p-grading splits the standard module as 1 + 3
        assert_eq!(coinvariants_dim(&std, &x).unwrap(), 3);
        assert_eq!(coinvariants_dim(&dual(&std), &x).unwrap(), 1);
        assert_eq!(coinvariants_dim(&trivial(&g3), &x).unwrap(), 1);
    }
}
