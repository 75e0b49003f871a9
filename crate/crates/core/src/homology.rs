//! Relative chain complexes `C_k = Λ^k(q₊/p₊) ⊗ V` with the homology
//! differential `∂*`, its partner `∂`, the Laplacian `□`, and everything
//! read off from them: Hodge dimensions, homology summands, spectra and the
//! comparison with the affine Weyl orbit.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{BggError, Result};
use crate::matrix::QMatrix;
use crate::parabolic::{root_bracket, ParabolicPair, RootBracket};
use crate::rational::{q, to_i64, Q};
use crate::repn::{dual, irrep, Algebra, WeightModule};
use crate::rootdata::{build_root_system, NodeSet, Weight};

/// Deliberate corruptions used to check that the test battery notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComplexOptions {
    /// Flip the sign of the module-action term of `∂*`.
    pub flip_action_sign: bool,
}

/// Basis of `C_k`: forms in lexicographic order of their index sets, each
/// tensored with the whole basis of `V`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainSpace {
    pub k: usize,
    /// Index sets over `basis_rel` as bitmasks.
    pub forms: Vec<u64>,
    pub vdim: usize,
    pub weights: Vec<Weight>,
    /// Filtration degree of each basis element.
    pub ell: Vec<i64>,
}

impl ChainSpace {
    pub fn dim(&self) -> usize {
        self.forms.len() * self.vdim
    }

    pub fn index(&self, form: usize, v: usize) -> usize {
        form * self.vdim + v
    }
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub pair: ParabolicPair,
    pub coeff: WeightModule,
    /// Label `λ` when the coefficient is `dual(irrep(λ))` over `l_p`.
    pub label: Option<Weight>,
    pub spaces: Vec<ChainSpace>,
    /// `d_up[k] : C_k -> C_{k+1}` (`∂`); the last one has no rows.
    pub d_up: Vec<QMatrix>,
    /// `d_down[k] : C_k -> C_{k-1}` (`∂*`); the first one has no rows.
    pub d_down: Vec<QMatrix>,
    pub laplacian: Vec<QMatrix>,
    pub options: ComplexOptions,
    /// Raising operators `e_i` (nodes uncrossed in `q`) on each `C_k`.
    raising: Vec<Vec<QMatrix>>,
}

/// Coefficient module with label `λ`: the dual of the `l_p`-irreducible of
/// highest weight `λ`.  Its lowest weight is `-λ`.
pub fn coefficient(pair: &ParabolicPair, label: &Weight) -> Result<WeightModule> {
    let alg = Algebra::levi(pair.rank(), &pair.crossed_p);
    Ok(dual(&irrep(&alg, label)?))
}

pub fn build_complex(pair: &ParabolicPair, coeff: &WeightModule) -> Result<ChainComplex> {
    build_complex_with(pair, coeff, None, ComplexOptions::default())
}

pub fn build_labelled(pair: &ParabolicPair, label: &Weight) -> Result<ChainComplex> {
    build_complex_with(pair, &coefficient(pair, label)?, Some(label.clone()), ComplexOptions::default())
}

fn popcount_below(mask: u64, idx: usize) -> u32 {
    (mask & ((1u64 << idx) - 1)).count_ones()
}

fn positions(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Sorts a sequence of distinct indices, returning the bitmask and whether
/// the sorting permutation is odd; `None` on repetition.
fn sort_sign(seq: &[usize]) -> Option<(u64, bool)> {
    let mut mask = 0u64;
    let mut inv = 0usize;
    for (a, &x) in seq.iter().enumerate() {
        if mask >> x & 1 == 1 {
            return None;
        }
        mask |= 1 << x;
        inv += seq[..a].iter().filter(|&&y| y > x).count();
    }
    Some((mask, inv % 2 == 1))
}

fn signed(neg: bool, x: Q) -> Q {
    if neg {
        -x
    } else {
        x
    }
}

pub fn build_complex_with(
    pair: &ParabolicPair,
    coeff: &WeightModule,
    label: Option<Weight>,
    options: ComplexOptions,
) -> Result<ChainComplex> {
    let rank = pair.rank();
    if coeff.rank() != rank {
        return Err(BggError::Shape(format!("coefficient of rank {} on a pair of rank {rank}", coeff.rank())));
    }
    let lp = Algebra::levi(rank, &pair.crossed_p);
    if !coeff.algebra.contains(&lp) {
        return Err(BggError::NotRelative("coefficient module is not a module over the Levi of p".into()));
    }
    for &(i, j) in &pair.basis_p_plus {
        if let Some(m) = coeff.try_op((i, j)) {
            if !m.is_zero() {
                return Err(BggError::NotRelative(format!("p₊ acts nontrivially (root E{}{})", i + 1, j + 1)));
            }
        }
    }
    let r = pair.rel_dim();
    if r > 20 {
        return Err(BggError::TooLarge { dim: r, limit: 20 });
    }
    let vdim = coeff.dim();
    let total: usize = (0..=r).map(|k| binom(r, k) * vdim).sum();
    if total > crate::repn::max_dim() {
        return Err(BggError::TooLarge { dim: total, limit: crate::repn::max_dim() });
    }
    let rs = &pair.rs;
    let energy = |w: &Weight| -> Q {
        let c = rs.simple_root_coords(w);
        pair.crossed_q.difference(&pair.crossed_p).nodes().iter().map(|&m| c[m - 1].clone()).sum()
    };
    let e_min = coeff.weights.iter().map(&energy).min().unwrap_or_else(Q::zero);
    let mut spaces = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let forms: Vec<u64> = subsets(r, k);
        let mut weights = Vec::with_capacity(forms.len() * vdim);
        let mut ell = Vec::with_capacity(forms.len() * vdim);
        for &f in &forms {
            let fw = positions(f).iter().fold(Weight::zero(rank), |acc, &a| acc.add(&pair.rel_weight(a)));
            for v in 0..vdim {
                let w = fw.add(&coeff.weights[v]);
                let e = energy(&w) - &e_min;
                ell.push(to_i64(&e).ok_or_else(|| BggError::Internal("non-integral filtration degree".into()))?);
                weights.push(w);
            }
        }
        spaces.push(ChainSpace { k, forms, vdim, weights, ell });
    }
    let form_index: Vec<BTreeMap<u64, usize>> =
        spaces.iter().map(|s| s.forms.iter().enumerate().map(|(i, &f)| (f, i)).collect()).collect();
    // Columns of the action matrices: E v = sum_t c_t v_t.
    let cols_of = |root| -> Vec<Vec<(usize, Q)>> {
        let t = coeff.op(root).transpose();
        (0..vdim).map(|v| t.row(v).clone()).collect()
    };
    let pos_cols: Vec<Vec<Vec<(usize, Q)>>> = pair.basis_rel.iter().map(|&x| cols_of(x)).collect();
    let neg_cols: Vec<Vec<Vec<(usize, Q)>>> = pair.basis_rel.iter().map(|&(i, j)| cols_of((j, i))).collect();

    let mut d_down = Vec::with_capacity(r + 1);
    d_down.push(QMatrix::zeros(0, spaces[0].dim()));
    for k in 1..=r {
        let (src, dst) = (&spaces[k], &spaces[k - 1]);
        let mut trip = Vec::new();
        for (fi, &f) in src.forms.iter().enumerate() {
            let pos = positions(f);
            // module action: sum_t (-1)^t X^_t ⊗ X_t v
            for (t0, &a) in pos.iter().enumerate() {
                let rest = f & !(1 << a);
                let ri = form_index[k - 1][&rest];
                let neg = (t0 % 2 == 0) ^ options.flip_action_sign;
                for v in 0..vdim {
                    for (u, c) in &pos_cols[a][v] {
                        trip.push((dst.index(ri, *u), src.index(fi, v), signed(neg, c.clone())));
                    }
                }
            }
            // bracket: sum_{s<t} (-1)^{s+t} [X_s, X_t] ∧ ... ⊗ v
            for s0 in 0..pos.len() {
                for t0 in s0 + 1..pos.len() {
                    let Some((c, z)) = pair.rel_bracket(pos[s0], pos[t0]) else { continue };
                    let rest = f & !(1 << pos[s0]) & !(1 << pos[t0]);
                    if rest >> z & 1 == 1 {
                        continue;
                    }
                    let neg = ((s0 + t0) % 2 == 1) ^ (popcount_below(rest, z) % 2 == 1);
                    let ri = form_index[k - 1][&(rest | 1 << z)];
                    for v in 0..vdim {
                        trip.push((dst.index(ri, v), src.index(fi, v), signed(neg, q(c))));
                    }
                }
            }
        }
        d_down.push(QMatrix::from_triplets(dst.dim(), src.dim(), trip));
    }

    // d eta_g = -sum_{b<b'} eta_g([E_-b, E_-b']) eta_b ∧ eta_b'
    let mut d_eta: Vec<Vec<(usize, usize, Q)>> = vec![Vec::new(); r];
    for b in 0..r {
        for b2 in b + 1..r {
            let (x, y) = (pair.basis_rel[b], pair.basis_rel[b2]);
            if let RootBracket::Root(c, z) = root_bracket((x.1, x.0), (y.1, y.0)) {
                if let Some(g) = pair.rel_index((z.1, z.0)) {
                    d_eta[g].push((b, b2, q(-c)));
                }
            }
        }
    }
    let mut d_up = Vec::with_capacity(r + 1);
    for k in 0..r {
        let (src, dst) = (&spaces[k], &spaces[k + 1]);
        let mut trip = Vec::new();
        for (fi, &f) in src.forms.iter().enumerate() {
            let pos = positions(f);
            // sum_b eta_b ∧ omega ⊗ E_-b v
            for b in 0..r {
                if f >> b & 1 == 1 {
                    continue;
                }
                let neg = popcount_below(f, b) % 2 == 1;
                let ri = form_index[k + 1][&(f | 1 << b)];
                for v in 0..vdim {
                    for (u, c) in &neg_cols[b][v] {
                        trip.push((dst.index(ri, *u), src.index(fi, v), signed(neg, c.clone())));
                    }
                }
            }
            // antiderivation on the form part
            for (t0, &g) in pos.iter().enumerate() {
                for (b, b2, c) in &d_eta[g] {
                    let mut seq = pos.clone();
                    seq.splice(t0..t0 + 1, [*b, *b2]);
                    let Some((mask, odd)) = sort_sign(&seq) else { continue };
                    let neg = odd ^ (t0 % 2 == 1);
                    let ri = form_index[k + 1][&mask];
                    for v in 0..vdim {
                        trip.push((dst.index(ri, v), src.index(fi, v), signed(neg, c.clone())));
                    }
                }
            }
        }
        // overall sign chosen so that □ is positive on im ∂*
        d_up.push(QMatrix::from_triplets(dst.dim(), src.dim(), trip).neg());
    }
    d_up.push(QMatrix::zeros(0, spaces[r].dim()));

    let laplacian = (0..=r)
        .map(|k| {
            let mut l = QMatrix::zeros(spaces[k].dim(), spaces[k].dim());
            if k > 0 {
                l = l.add(&d_up[k - 1].mul(&d_down[k]));
            }
            if k < r {
                l = l.add(&d_down[k + 1].mul(&d_up[k]));
            }
            l
        })
        .collect();

    // e_i = ad on forms plus the action on V, for nodes uncrossed in q.
    let free = pair.crossed_q.complement(rank);
    let mut raising = Vec::with_capacity(r + 1);
    for sp in &spaces {
        let k = sp.k;
        let mut per_node = Vec::new();
        for &m in free.nodes() {
            let alpha = (m - 1, m);
            let vcols = cols_of(alpha);
            let mut trip = Vec::new();
            for (fi, &f) in sp.forms.iter().enumerate() {
                let pos = positions(f);
                for v in 0..vdim {
                    for (u, c) in &vcols[v] {
                        trip.push((sp.index(fi, *u), sp.index(fi, v), c.clone()));
                    }
                }
                for (t0, &a) in pos.iter().enumerate() {
                    let RootBracket::Root(c, z) = root_bracket(alpha, pair.basis_rel[a]) else { continue };
                    let zi = pair.rel_index(z).ok_or_else(|| BggError::Internal("q₊/p₊ not l_q-stable".into()))?;
                    let mut seq = pos.clone();
                    seq[t0] = zi;
                    let Some((mask, odd)) = sort_sign(&seq) else { continue };
                    let ri = form_index[k][&mask];
                    for v in 0..vdim {
                        trip.push((sp.index(ri, v), sp.index(fi, v), signed(odd, q(c))));
                    }
                }
            }
            per_node.push(QMatrix::from_triplets(sp.dim(), sp.dim(), trip));
        }
        raising.push(per_node);
    }

    Ok(ChainComplex {
        pair: pair.clone(),
        coeff: coeff.clone(),
        label,
        spaces,
        d_up,
        d_down,
        laplacian,
        options,
        raising,
    })
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `k`-subsets of `0..n` as bitmasks, lexicographic in their sorted lists.
pub fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(n: usize, k: usize, start: usize, mask: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for i in start..n {
            rec(n, k - 1, i + 1, mask | 1 << i, out);
        }
    }
    rec(n, k, 0, 0, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeDims {
    pub dim: usize,
    /// `rank ∂*` into this degree.
    pub im_dstar: usize,
    pub harmonic: usize,
    /// `rank ∂` into this degree.
    pub im_d: usize,
}

/// Space of highest weight vectors of one weight and filtration degree.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub k: usize,
    pub ell: i64,
    pub weight: Weight,
    /// `-w0(weight)` for the Levi of `q`.
    pub label: Weight,
    #[serde(skip)]
    pub basis: Vec<Vec<Q>>,
    pub dim: usize,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub eigenvalue: Q,
    /// Dimension of the part lying in `im ∂*`.
    pub in_im_dstar: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub d_squared_zero: bool,
    pub dstar_squared_zero: bool,
    pub hodge: Vec<HodgeDims>,
    pub hodge_exact: bool,
    pub filtration_preserved: bool,
    pub euler_chain: i64,
    pub euler_homology: i64,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.d_squared_zero
            && self.dstar_squared_zero
            && self.hodge_exact
            && self.filtration_preserved
            && self.euler_chain == self.euler_homology
    }
}

impl ChainComplex {
    pub fn top(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn dim(&self, k: usize) -> usize {
        self.spaces[k].dim()
    }

    pub fn hodge(&self, k: usize) -> HodgeDims {
        let dim = self.dim(k);
        let im_dstar = if k < self.top() { self.d_down[k + 1].rank() } else { 0 };
        let im_d = if k > 0 { self.d_up[k - 1].rank() } else { 0 };
        let harmonic = dim - self.laplacian[k].rank();
        HodgeDims { dim, im_dstar, harmonic, im_d }
    }

    fn preserves_ell(&self, m: &QMatrix, src: usize, dst: usize) -> bool {
        m.triplets().iter().all(|(i, j, _)| self.spaces[dst].ell[*i] == self.spaces[src].ell[*j])
    }

    pub fn check_invariants(&self) -> InvariantReport {
        let top = self.top();
        let d_squared_zero = (0..top.saturating_sub(1)).all(|k| self.d_up[k + 1].mul(&self.d_up[k]).is_zero());
        let dstar_squared_zero = (2..=top).all(|k| self.d_down[k - 1].mul(&self.d_down[k]).is_zero());
        let hodge: Vec<HodgeDims> = (0..=top).map(|k| self.hodge(k)).collect();
        let hodge_exact = hodge.iter().enumerate().all(|(k, h)| {
            let ker_dstar = h.dim - if k > 0 { self.d_down[k].rank() } else { 0 };
            let ker_d = h.dim - if k < top { self.d_up[k].rank() } else { 0 };
            h.im_dstar + h.harmonic + h.im_d == h.dim
                && ker_dstar == h.im_dstar + h.harmonic
                && ker_d == h.harmonic + h.im_d
        });
        let filtration_preserved = (0..top).all(|k| self.preserves_ell(&self.d_up[k], k, k + 1))
            && (1..=top).all(|k| self.preserves_ell(&self.d_down[k], k, k - 1));
        let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
        let euler_chain = hodge.iter().enumerate().map(|(k, h)| sign(k) * h.dim as i64).sum();
        let euler_homology = hodge.iter().enumerate().map(|(k, h)| sign(k) * h.harmonic as i64).sum();
        InvariantReport { d_squared_zero, dstar_squared_zero, hodge, hodge_exact, filtration_preserved, euler_chain, euler_homology }
    }

    /// Raising operators of the Levi of `q` on `C_k`.
    pub fn raising(&self, k: usize) -> &[QMatrix] {
        &self.raising[k]
    }

    /// Highest weight blocks of `C_k`, with the scalar by which `□` acts.
    pub fn blocks(&self, k: usize) -> Result<Vec<Block>> {
        let sp = &self.spaces[k];
        let mut groups: BTreeMap<(i64, Weight), Vec<usize>> = BTreeMap::new();
        for i in 0..sp.dim() {
            groups.entry((sp.ell[i], sp.weights[i].clone())).or_default().push(i);
        }
        let w0 = self.pair.rs.levi_longest(&self.pair.crossed_q);
        let lap = &self.laplacian[k];
        let mut out = Vec::new();
        for ((ell, weight), idx) in groups {
            let basis = if self.raising[k].is_empty() {
                (0..idx.len()).map(|t| unit(idx.len(), t)).collect()
            } else {
                let mut stacked = self.raising[k][0].select_columns(&idx);
                for e in &self.raising[k][1..] {
                    stacked = stacked.vstack(&e.select_columns(&idx));
                }
                stacked.nullspace()
            };
            if basis.is_empty() {
                continue;
            }
            let embed = |local: &Vec<Q>| -> Vec<Q> {
                let mut v = vec![Q::zero(); sp.dim()];
                for (t, &i) in idx.iter().enumerate() {
                    v[i] = local[t].clone();
                }
                v
            };
            let full: Vec<Vec<Q>> = basis.iter().map(embed).collect();
            let mut eigen: Option<Q> = None;
            for v in &full {
                let lv = lap.mul_vec(v);
                let t = v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector");
                let a = &lv[t] / &v[t];
                if lv.iter().zip(v).any(|(x, y)| *x != &a * y) {
                    return Err(BggError::Internal(format!("□ is not scalar on the block of weight {weight} in degree {k}")));
                }
                match &eigen {
                    None => eigen = Some(a),
                    Some(b) if *b != a => {
                        return Err(BggError::Internal(format!("□ has two eigenvalues on the block of weight {weight}")))
                    }
                    _ => {}
                }
            }
            let eigenvalue = eigen.expect("nonempty block");
            let in_im_dstar = if eigenvalue.is_zero() {
                0
            } else if k == 0 {
                full.len()
            } else {
                full.len() - self.d_down[k].mul(&QMatrix::from_columns(sp.dim(), &full)).rank()
            };
            out.push(Block {
                k,
                ell,
                label: w0.act(&weight).neg(),
                weight,
                dim: full.len(),
                basis: full,
                eigenvalue,
                in_im_dstar,
            });
        }
        Ok(out)
    }

    /// Distinct nonzero eigenvalues of `□` on the graded pieces of `im ∂*`,
    /// per filtration degree.
    pub fn spectrum(&self, k: usize) -> Result<Vec<SpectrumLevel>> {
        let mut levels: BTreeMap<i64, (Vec<Q>, Vec<Q>)> = BTreeMap::new();
        for b in self.blocks(k)? {
            if b.eigenvalue.is_zero() {
                continue;
            }
            let entry = levels.entry(b.ell).or_default();
            if !entry.1.contains(&b.eigenvalue) {
                entry.1.push(b.eigenvalue.clone());
            }
            if b.in_im_dstar > 0 && !entry.0.contains(&b.eigenvalue) {
                entry.0.push(b.eigenvalue.clone());
            }
        }
        Ok(levels
            .into_iter()
            .map(|(ell, (mut im, mut all))| {
                im.sort();
                all.sort();
                SpectrumLevel { ell, eigenvalues: im, all_nonzero: all }
            })
            .collect())
    }
}

fn unit(n: usize, t: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[t] = Q::one();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumLevel {
    pub ell: i64,
    /// The eigenvalues `a^ℓ_r` occurring on `im ∂*`.
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub eigenvalues: Vec<Q>,
    /// All nonzero eigenvalues at this level, including those on `im ∂` only.
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub all_nonzero: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: Weight,
    pub highest_weight: Weight,
    pub ell: i64,
    pub multiplicity: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeHomology {
    pub k: usize,
    pub hodge: HodgeDims,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    /// Labels per degree, repeated by multiplicity and sorted.
    pub fn labels(&self) -> Vec<Vec<Weight>> {
        self.degrees
            .iter()
            .map(|d| {
                let mut v: Vec<Weight> =
                    d.components.iter().flat_map(|c| std::iter::repeat_n(c.label.clone(), c.multiplicity)).collect();
                v.sort();
                v
            })
            .collect()
    }
}

pub fn homology(cx: &ChainComplex) -> Result<HomologySummary> {
    let rs = &cx.pair.rs;
    let mut degrees = Vec::new();
    for k in 0..=cx.top() {
        let hodge = cx.hodge(k);
        let mut components = Vec::new();
        let mut total = 0usize;
        for b in cx.blocks(k)? {
            if !b.eigenvalue.is_zero() {
                continue;
            }
            let dim = to_i64(&rs.weyl_dimension(&b.weight, &cx.pair.crossed_q))
                .filter(|&d| d > 0)
                .ok_or_else(|| BggError::Internal(format!("homology weight {} is not q-dominant", b.weight)))?
                as usize;
            total += dim * b.dim;
            components.push(Component { label: b.label, highest_weight: b.weight, ell: b.ell, multiplicity: b.dim, dim });
        }
        if total != hodge.harmonic {
            return Err(BggError::Internal(format!(
                "degree {k}: summands account for {total} dimensions, ker □ has {}",
                hodge.harmonic
            )));
        }
        components.sort_by(|a, b| a.label.cmp(&b.label));
        degrees.push(DegreeHomology { k, hodge, components });
    }
    Ok(HomologySummary { degrees })
}

/// Labels `w·λ` for `w` in the relative Hasse quotient, graded by length.
pub fn kostant_predict(pair: &ParabolicPair, label: &Weight) -> Result<Vec<Vec<Weight>>> {
    let rs = &pair.rs;
    rs.check_weight(label)?;
    if !label.is_dominant_for(&pair.crossed_p) || !label.is_integral_for(&pair.crossed_p) {
        return Err(BggError::Representability(format!("{label} is not dominant integral for the Levi of p")));
    }
    let graded = rs.relative_hasse_quotient(&pair.crossed_p, &pair.crossed_q)?;
    let mut out: Vec<Vec<Weight>> = graded
        .iter()
        .map(|ws| {
            let mut v: Vec<Weight> = ws.iter().map(|w| rs.affine_action_perm(&w.to_perm(rs.rank), label)).collect();
            v.sort();
            v
        })
        .collect();
    out.resize(pair.rel_dim() + 1, Vec::new());
    Ok(out)
}

/// Normalisation of the Casimir used on the predicted side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CasimirScale {
    /// `<λ, λ + 2ρ>` with the trace form.
    #[default]
    Trace,
    /// Killing-form value, `1/(2N)` times the trace-form one.
    Killing,
}

#[derive(Clone, Debug, Serialize)]
pub struct KostantEntry {
    pub k: usize,
    pub ell: i64,
    pub label: Weight,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub eigenvalue: Q,
    /// `(c(λ) - c(μ)) / 2` in the chosen normalisation.
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub predicted: Q,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KostantReport {
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub kappa: Q,
    pub consistent: bool,
    /// Whether `κ` equals the expected value 1.
    pub calibrated: bool,
    pub entries: Vec<KostantEntry>,
}

/// Checks `2a = κ (c(λ) - c(μ))` on every highest weight block, with `κ`
/// read off the first block where the right side is nonzero.
pub fn kostant_eigenvalue_check(cx: &ChainComplex, scale: CasimirScale) -> Result<KostantReport> {
    let label = cx.label.as_ref().ok_or_else(|| BggError::Shape("coefficient has no recorded label".into()))?;
    let rs = &cx.pair.rs;
    let norm = match scale {
        CasimirScale::Trace => Q::one(),
        CasimirScale::Killing => Q::one() / q(2 * rs.n_letters() as i64),
    };
    let c = |w: &Weight| rs.casimir_eigenvalue(w) * &norm;
    let c_lam = c(label);
    let mut rows = Vec::new();
    for k in 0..=cx.top() {
        for b in cx.blocks(k)? {
            let diff = &c_lam - c(&b.label);
            rows.push((k, b.ell, b.label, b.eigenvalue, diff));
        }
    }
    let kappa = rows
        .iter()
        .find(|r| !r.4.is_zero())
        .map(|r| q(2) * &r.3 / &r.4)
        .unwrap_or_else(Q::one);
    let mut consistent = true;
    let entries = rows
        .into_iter()
        .map(|(k, ell, label, eigenvalue, diff)| {
            let predicted = &kappa * &diff / q(2);
            let ok = predicted == eigenvalue;
            consistent &= ok;
            KostantEntry { k, ell, label, eigenvalue, predicted, ok }
        })
        .collect();
    let report = KostantReport { calibrated: consistent && kappa.is_one(), kappa, consistent, entries };
    if !report.consistent {
        return Err(BggError::Calibration("no single constant relates □ eigenvalues to Casimir differences".into()));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethReport {
    pub left: Vec<Vec<Weight>>,
    pub right: Vec<Vec<Weight>>,
    pub equal: bool,
}

/// Compares `H_k(q₊, Ṽ)` with `⊕_{i+j=k} H_i(q₊/p₊, H_j(p₊, Ṽ))` for the
/// `g`-coefficient with label `label`.
pub fn kunneth_compare(pair: &ParabolicPair, label: &Weight) -> Result<KunnethReport> {
    let rs = build_root_system(pair.rank())?;
    if !label.is_dominant() || !label.is_integral() {
        return Err(BggError::Representability(format!("{label} is not dominant integral for g")));
    }
    let none = NodeSet::empty();
    let full = crate::parabolic::build_pair(&rs, &none, &pair.crossed_q)?;
    let left = homology(&build_labelled(&full, label)?)?.labels();
    let inner_pair = crate::parabolic::build_pair(&rs, &none, &pair.crossed_p)?;
    let inner = homology(&build_labelled(&inner_pair, label)?)?;
    let mut right = vec![Vec::new(); left.len()];
    for (j, d) in inner.degrees.iter().enumerate() {
        for comp in &d.components {
            let h = homology(&build_labelled(pair, &comp.label)?)?.labels();
            for (i, labels) in h.into_iter().enumerate() {
                for _ in 0..comp.multiplicity {
                    right[i + j].extend(labels.iter().cloned());
                }
            }
        }
    }
    for v in right.iter_mut() {
        v.sort();
    }
    let equal = left == right;
    Ok(KunnethReport { left, right, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::PairSpec;
    use crate::repn::trivial;

    fn pair(s: &str) -> ParabolicPair {
        PairSpec::parse(s).unwrap().build().unwrap()
    }

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn path_pair_trivial() {
        let p = pair("A3 p=1 q=1,2");
        let cx = build_labelled(&p, &w(&[0, 0, 0])).unwrap();
        assert_eq!((0..=2).map(|k| cx.dim(k)).collect::<Vec<_>>(), vec![1, 2, 1]);
        let inv = cx.check_invariants();
        assert!(inv.ok(), "{inv:?}");
        let h = homology(&cx).unwrap();
        assert_eq!(h.labels(), vec![vec![w(&[0, 0, 0])], vec![w(&[1, -2, 1])], vec![w(&[2, -3, 0])]]);
        assert_eq!(h.labels(), kostant_predict(&p, &w(&[0, 0, 0])).unwrap());
    }

    #[test]
    fn abelian_trivial_has_zero_dstar() {
        let p = pair("A3 p=1 q=1,2");
        let cx = build_complex(&p, &trivial(&Algebra::levi(3, &p.crossed_p))).unwrap();
        assert!(cx.d_down[1].is_zero());
    }

    #[test]
    fn borel_sl3_adjoint() {
        let p = pair("A2 p=- q=1,2");
        let cx = build_labelled(&p, &w(&[1, 1])).unwrap();
        let inv = cx.check_invariants();
        assert!(inv.ok(), "{inv:?}");
        let h = homology(&cx).unwrap();
        assert_eq!(h.labels(), kostant_predict(&p, &w(&[1, 1])).unwrap());
        let rep = kostant_eigenvalue_check(&cx, CasimirScale::Trace).unwrap();
        assert!(rep.calibrated, "{rep:?}");
    }

    #[test]
    fn action_sign_mutation_breaks_invariants() {
        let p = pair("A2 p=- q=1,2");
        let opts = ComplexOptions { flip_action_sign: true };
        let cx = build_complex_with(&p, &coefficient(&p, &w(&[1, 0])).unwrap(), None, opts).unwrap();
        assert!(!cx.check_invariants().ok());
    }

    #[test]
    fn not_relative() {
        let p = pair("A2 p=1 q=1,2");
        let m = irrep(&Algebra::g(2), &w(&[1, 0])).unwrap();
        assert!(matches!(build_complex(&p, &m), Err(BggError::NotRelative(_))));
    }

    #[test]
    fn kunneth_standard() {
        let p = pair("A3 p=1 q=1,2");
        let r = kunneth_compare(&p, &w(&[1, 0, 0])).unwrap();
        assert!(r.equal, "{r:?}");
    }
}
