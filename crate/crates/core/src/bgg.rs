//! Splitting operators, the inverse operator `Q`, compressed operators and
//! the sequence/insertion checks, all over a built `ChainComplex`.
//!
//! Operators live on the full chain spaces; `T = ∂*𝒟` maps `C_k` into
//! `im ∂*`, and `S`, `Q` are kept both as polynomials in `T` and as
//! evaluated matrices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{BggError, Result};
use crate::homology::{subsets, ChainComplex, SpectrumLevel};
use crate::matrix::{span_rank, vec_is_zero, BasisCoords, QMatrix};
use crate::parabolic::ParabolicPair;
use crate::rational::{q, qf, Q};
use crate::repn::{adjoint_module, Algebra, WeightModule};

/// Univariate polynomial with exact coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn constant(c: Q) -> Poly {
        Poly(vec![c]).trim()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    /// `x - a`.
    pub fn linear(a: &Q) -> Poly {
        Poly(vec![-a.clone(), Q::one()])
    }

    fn trim(mut self) -> Poly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(Q::zero);
        Poly((0..n).map(|i| get(self, i) + get(o, i)).collect()).trim()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trim()
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval(&self, t: &QMatrix) -> QMatrix {
        let n = t.nrows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(t).add(&QMatrix::scalar(n, c));
        }
        acc
    }
}

/// A degree-raising map `C_k -> C_{k+1}`.
#[derive(Clone, Debug)]
pub struct FilteredOperator {
    pub k: usize,
    pub matrix: QMatrix,
    pub seed: Option<u64>,
}

fn random_entry(rng: &mut ChaCha8Rng) -> Q {
    let num: i64 = rng.gen_range(1..=3);
    let num = if rng.gen_bool(0.5) { -num } else { num };
    qf(num, rng.gen_range(1..=2))
}

/// Random matrix `rows x cols` supported where the row filtration degree is
/// strictly larger than the column one, density about one quarter.
fn random_raising(rng: &mut ChaCha8Rng, row_ell: &[i64], col_ell: &[i64]) -> QMatrix {
    let mut trip = Vec::new();
    for (c, lc) in col_ell.iter().enumerate() {
        for (r, lr) in row_ell.iter().enumerate() {
            if lr > lc && rng.gen_bool(0.25) {
                trip.push((r, c, random_entry(rng)));
            }
        }
    }
    QMatrix::from_triplets(row_ell.len(), col_ell.len(), trip)
}

/// `𝒟 = ∂ + N` with `N` pseudorandom and strictly raising the filtration;
/// `seed = None` gives `N = 0`.
pub fn make_compressable(cx: &ChainComplex, k: usize, seed: Option<u64>) -> Result<FilteredOperator> {
    if k >= cx.top() {
        return Err(BggError::Shape(format!("no degree {} above degree {k}", k + 1)));
    }
    let mut matrix = cx.d_up[k].clone();
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        matrix = matrix.add(&random_raising(&mut rng, &cx.spaces[k + 1].ell, &cx.spaces[k].ell));
    }
    Ok(FilteredOperator { k, matrix, seed })
}

/// No entry lowers the filtration degree.
pub fn is_filtration_preserving(cx: &ChainComplex, k: usize, m: &QMatrix) -> bool {
    let (src, dst) = (&cx.spaces[k].ell, &cx.spaces[k + 1].ell);
    m.triplets().iter().all(|(r, c, _)| dst[*r] >= src[*c])
}

/// Filtration preserving with degree-zero part equal to `∂`.
pub fn is_compressable(cx: &ChainComplex, k: usize, m: &QMatrix) -> bool {
    let (src, dst) = (&cx.spaces[k].ell, &cx.spaces[k + 1].ell);
    let diff = m.sub(&cx.d_up[k]);
    is_filtration_preserving(cx, k, m) && diff.triplets().iter().all(|(r, c, _)| dst[*r] > src[*c])
}

/// The model sequence `𝒟_k = ∂`, one matrix per degree (the last maps to 0).
pub fn model_sequence(cx: &ChainComplex) -> Vec<QMatrix> {
    cx.d_up.clone()
}

fn unipotent_inverse(n: &QMatrix) -> QMatrix {
    let d = n.nrows();
    let mut inv = QMatrix::identity(d);
    let mut term = QMatrix::identity(d);
    loop {
        term = term.mul(n).neg();
        if term.is_zero() {
            return inv;
        }
        inv = inv.add(&term);
    }
}

/// `𝒟_k = g_{k+1} ∂ g_k^{-1}` for random unipotent filtration-raising `g_k`;
/// squares to zero and is compressable in every degree.
pub fn conjugated_sequence(cx: &ChainComplex, seed: u64) -> Vec<QMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<QMatrix> = cx
        .spaces
        .iter()
        .map(|s| random_raising(&mut rng, &s.ell, &s.ell).add(&QMatrix::identity(s.dim())))
        .collect();
    let mut out = Vec::new();
    for k in 0..cx.top() {
        let ginv = unipotent_inverse(&gs[k].sub(&QMatrix::identity(cx.dim(k))));
        out.push(gs[k + 1].mul(&cx.d_up[k]).mul(&ginv));
    }
    out.push(cx.d_up[cx.top()].clone());
    out
}

/// Independent random compressable operators in every degree.
pub fn independent_sequence(cx: &ChainComplex, seed: u64) -> Result<Vec<QMatrix>> {
    let mut out = Vec::new();
    for k in 0..cx.top() {
        out.push(make_compressable(cx, k, Some(seed.wrapping_add(k as u64)))?.matrix);
    }
    out.push(cx.d_up[cx.top()].clone());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyLevel {
    pub ell: i64,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub eigenvalues: Vec<Q>,
}

/// A polynomial in `T = ∂*𝒟` with the eigenvalue data it was built from.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorPolynomial {
    pub levels: Vec<PolyLevel>,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub coefficients: Vec<Q>,
    pub degree: usize,
    #[serde(skip)]
    pub poly: Poly,
    #[serde(skip)]
    pub matrix: QMatrix,
}

impl OperatorPolynomial {
    fn new(levels: Vec<PolyLevel>, poly: Poly, t: &QMatrix) -> Self {
        OperatorPolynomial {
            levels,
            coefficients: poly.0.clone(),
            degree: poly.degree().unwrap_or(0),
            matrix: poly.eval(t),
            poly,
        }
    }

    /// Number of linear factors recorded, `Σ_ℓ j_ℓ`.
    pub fn factor_count(&self) -> usize {
        self.levels.iter().map(|l| l.eigenvalues.len()).sum()
    }
}

/// `S_ℓ = (-1)^j / Π a_r · Π (x - a_r)`.
pub fn s_level_poly(eigs: &[Q]) -> Poly {
    let mut p = Poly::one();
    let mut denom = Q::one();
    for a in eigs {
        p = p.mul(&Poly::linear(a));
        denom *= a;
    }
    let sign = if eigs.len() % 2 == 1 { -Q::one() } else { Q::one() };
    p.scale(&(sign / denom))
}

/// `Q̃^ℓ = Σ_r 1/(a_r Π_{s≠r}(a_r - a_s)) Π_{s≠r}(x - a_s)`.
pub fn q_tilde_poly(eigs: &[Q]) -> Poly {
    let mut out = Poly(Vec::new());
    for (r, ar) in eigs.iter().enumerate() {
        let mut p = Poly::one();
        let mut c = ar.clone();
        for (s, as_) in eigs.iter().enumerate() {
            if s != r {
                p = p.mul(&Poly::linear(as_));
                c *= ar - as_;
            }
        }
        out = out.add(&p.scale(&(Q::one() / c)));
    }
    out
}

fn distinct_eigenvalues(cx: &ChainComplex, k: usize) -> Result<Vec<Q>> {
    let mut e: Vec<Q> = cx.blocks(k)?.into_iter().map(|b| b.eigenvalue).collect();
    e.sort();
    e.dedup();
    Ok(e)
}

/// Spectral projector of the diagonalisable `m` onto eigenvalue `a`.
fn spectral_projector(m: &QMatrix, eigs: &[Q], a: &Q) -> QMatrix {
    let n = m.nrows();
    if !eigs.contains(a) {
        return QMatrix::zeros(n, n);
    }
    let mut p = QMatrix::identity(n);
    for b in eigs {
        if b != a {
            p = p.mul(&m.shift(b)).scale(&(Q::one() / (a - b)));
        }
    }
    p
}

fn mul_vecs(m: &QMatrix, vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    vs.iter().map(|v| m.mul_vec(v)).collect()
}

/// The machinery of one degree `k` for a given `𝒟_k : C_k -> C_{k+1}`.
#[derive(Clone, Debug)]
pub struct Machine {
    pub k: usize,
    pub op: QMatrix,
    /// `T = ∂*𝒟` on `C_k`.
    pub t: QMatrix,
    /// Basis of `W = ker ∂*`.
    pub w_basis: Vec<Vec<Q>>,
    /// Basis of `W̃ = im ∂*`.
    pub wt_basis: Vec<Vec<Q>>,
    /// Basis of `ker □`.
    pub harmonic: Vec<Vec<Q>>,
    /// Projection onto `ker □` along `im ∂* ⊕ im ∂`.
    pub p0: QMatrix,
    pub levels: Vec<SpectrumLevel>,
    pub box_eigenvalues: Vec<Q>,
    pub s: OperatorPolynomial,
    pub q: OperatorPolynomial,
}

impl Machine {
    pub fn new(cx: &ChainComplex, k: usize, op: &QMatrix) -> Result<Machine> {
        let dim = cx.dim(k);
        if op.ncols() != dim || op.nrows() != if k < cx.top() { cx.dim(k + 1) } else { 0 } {
            return Err(BggError::Shape(format!("operator in degree {k} has the wrong shape")));
        }
        let t = if k < cx.top() { cx.d_down[k + 1].mul(op) } else { QMatrix::zeros(dim, dim) };
        let w_basis = cx.d_down[k].nullspace();
        let wt_basis = if k < cx.top() { cx.d_down[k + 1].column_space() } else { Vec::new() };
        let harmonic = cx.laplacian[k].nullspace();
        let box_eigenvalues = distinct_eigenvalues(cx, k)?;
        let p0 = spectral_projector(&cx.laplacian[k], &box_eigenvalues, &Q::zero());
        let levels = cx.spectrum(k)?;
        let poly_levels: Vec<PolyLevel> = levels
            .iter()
            .filter(|l| !l.eigenvalues.is_empty())
            .map(|l| PolyLevel { ell: l.ell, eigenvalues: l.eigenvalues.clone() })
            .collect();
        let s_poly = poly_levels.iter().fold(Poly::one(), |acc, l| acc.mul(&s_level_poly(&l.eigenvalues)));
        let mut q_poly = Poly(Vec::new());
        for l in poly_levels.iter().rev() {
            let qt = q_tilde_poly(&l.eigenvalues);
            // Q^{ℓ-1} = Q̃^{ℓ-1} + Q^ℓ (1 - T Q̃^{ℓ-1})
            let x_qt = Poly(vec![Q::zero(), Q::one()]).mul(&qt);
            q_poly = qt.add(&q_poly.mul(&Poly::one().sub(&x_qt)));
        }
        let s = OperatorPolynomial::new(poly_levels.clone(), s_poly, &t);
        let q = OperatorPolynomial::new(poly_levels, q_poly, &t);
        Ok(Machine { k, op: op.clone(), t, w_basis, wt_basis, harmonic, p0, levels, box_eigenvalues, s, q })
    }

    /// `Q` by the Neumann series around `□^{-1}`, evaluated on the basis of
    /// `im ∂*`.
    pub fn neumann_q(&self, cx: &ChainComplex) -> Result<Vec<Vec<Q>>> {
        let lap = &cx.laplacian[self.k];
        let n = lap.nrows();
        let mut inv = QMatrix::zeros(n, n);
        for a in self.box_eigenvalues.iter().filter(|a| !a.is_zero()) {
            inv = inv.add(&spectral_projector(lap, &self.box_eigenvalues, a).scale(&(Q::one() / a)));
        }
        let m = inv.mul(&self.t.sub(lap));
        let cap = cx.spaces[self.k].ell.iter().max().copied().unwrap_or(0) as usize + 3;
        let mut out = Vec::new();
        for v in &self.wt_basis {
            let mut term = inv.mul_vec(v);
            let mut acc = term.clone();
            let mut steps = 0;
            loop {
                term = m.mul_vec(&term).into_iter().map(|x| -x).collect();
                if vec_is_zero(&term) {
                    break;
                }
                acc = crate::matrix::vec_add(&acc, &term);
                steps += 1;
                if steps > cap {
                    return Err(BggError::Internal("Neumann series does not terminate on im ∂*".into()));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn splitting_verdicts(&self) -> SplittingVerdicts {
        let s = &self.s.matrix;
        let sw = mul_vecs(s, &self.w_basis);
        let pi_h_s = self.w_basis.iter().zip(&sw).all(|(w, x)| self.p0.mul_vec(x) == self.p0.mul_vec(w));
        let t_s_zero = sw.iter().all(|x| vec_is_zero(&self.t.mul_vec(x)));
        let s_image_in_w = sw.iter().all(|x| self.w_basis.is_empty() || span_rank(x.len(), &[self.w_basis.clone(), vec![x.clone()]].concat()) == self.w_basis.len());
        let s_kills_im = mul_vecs(s, &self.wt_basis).iter().all(|x| vec_is_zero(x));
        let t_wt = mul_vecs(&self.t, &self.wt_basis);
        let t_injective_on_im = self.wt_basis.is_empty() || span_rank(t_wt[0].len(), &t_wt) == self.wt_basis.len();
        // adding any nonzero element of im ∂* to S(α) must break ∂*𝒟 φ = 0
        let uniqueness = t_wt.iter().all(|x| !vec_is_zero(x));
        SplittingVerdicts {
            pi_h_s,
            t_s_zero,
            s_image_in_w,
            s_kills_im,
            t_injective_on_im,
            uniqueness,
            factor_count: self.s.factor_count(),
            degree: self.s.degree,
        }
    }

    pub fn q_verdicts(&self, cx: &ChainComplex) -> Result<QVerdicts> {
        let qw = mul_vecs(&self.q.matrix, &self.wt_basis);
        let right_inverse = qw.iter().zip(&self.wt_basis).all(|(x, v)| &self.t.mul_vec(x) == v);
        let wt_rank = self.wt_basis.len();
        let image_in_im = qw.iter().all(|x| span_rank(x.len(), &[self.wt_basis.clone(), vec![x.clone()]].concat()) == wt_rank);
        let neumann = self.neumann_q(cx)?;
        let neumann_right_inverse = neumann.iter().zip(&self.wt_basis).all(|(x, v)| &self.t.mul_vec(x) == v);
        let methods_agree = neumann == qw;
        let id_minus_qt = QMatrix::identity(self.t.nrows()).sub(&self.q.matrix.mul(&self.t));
        let one_minus_qt_is_s = self.w_basis.iter().all(|w| id_minus_qt.mul_vec(w) == self.s.matrix.mul_vec(w));
        Ok(QVerdicts { right_inverse, image_in_im, neumann_right_inverse, methods_agree, one_minus_qt_is_s, factor_count: self.q.factor_count(), degree: self.q.degree })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingVerdicts {
    pub pi_h_s: bool,
    pub t_s_zero: bool,
    pub s_image_in_w: bool,
    pub s_kills_im: bool,
    pub t_injective_on_im: bool,
    pub uniqueness: bool,
    pub factor_count: usize,
    pub degree: usize,
}

impl SplittingVerdicts {
    pub fn ok(&self) -> bool {
        self.pi_h_s && self.t_s_zero && self.s_image_in_w && self.s_kills_im && self.t_injective_on_im && self.uniqueness
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QVerdicts {
    pub right_inverse: bool,
    pub image_in_im: bool,
    pub neumann_right_inverse: bool,
    pub methods_agree: bool,
    /// `1 - Q T = S` on `W`.
    pub one_minus_qt_is_s: bool,
    pub factor_count: usize,
    pub degree: usize,
}

impl QVerdicts {
    pub fn ok(&self) -> bool {
        self.right_inverse && self.image_in_im && self.neumann_right_inverse && self.methods_agree && self.one_minus_qt_is_s
    }
}

/// Coordinates of `P0 v` in the harmonic basis.
fn harmonic_coords(m: &Machine, v: &[Q]) -> Result<Vec<Q>> {
    let coords = BasisCoords::new(v.len(), &m.harmonic)?;
    coords
        .coords(&m.p0.mul_vec(v))
        .ok_or_else(|| BggError::Internal("harmonic projection left ker □".into()))
}

/// Matrix of `D = π_H 𝒟 S` from the harmonic basis in degree `k` to the one
/// in degree `k+1`.
pub fn compressed_matrix(cx: &ChainComplex, src: &Machine, dst: Option<&Machine>) -> Result<QMatrix> {
    let Some(dst) = dst else {
        return Ok(QMatrix::zeros(0, src.harmonic.len()));
    };
    let _ = cx;
    let cols: Vec<Vec<Q>> = src
        .harmonic
        .iter()
        .map(|a| harmonic_coords(dst, &src.op.mul_vec(&src.s.matrix.mul_vec(a))))
        .collect::<Result<_>>()?;
    Ok(QMatrix::from_columns(dst.harmonic.len(), &cols))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompressedReport {
    pub k: usize,
    pub harmonic_dims: (usize, usize),
    /// Triplets of the compressed matrix.
    pub matrix: Vec<(usize, usize, String)>,
    pub kernel_intersection_dim: usize,
    pub kernel_maps_to_kernel: bool,
    pub projection_injective: bool,
}

pub fn compressed_report(cx: &ChainComplex, k: usize, op: &QMatrix) -> Result<CompressedReport> {
    let src = Machine::new(cx, k, op)?;
    let dst = if k < cx.top() {
        let z = if k + 1 < cx.top() { cx.d_up[k + 1].clone() } else { QMatrix::zeros(0, cx.dim(k + 1)) };
        Some(Machine::new(cx, k + 1, &z)?)
    } else {
        None
    };
    let d = compressed_matrix(cx, &src, dst.as_ref())?;
    // ker 𝒟 ∩ ker ∂* maps injectively into ker D
    let inter = op.vstack(&cx.d_down[k]).nullspace();
    let images: Vec<Vec<Q>> = inter.iter().map(|v| harmonic_coords(&src, v)).collect::<Result<_>>()?;
    let kernel_maps_to_kernel = images.iter().all(|c| vec_is_zero(&d.mul_vec(c)));
    let projection_injective = images.is_empty() || span_rank(images[0].len(), &images) == images.len();
    Ok(CompressedReport {
        k,
        harmonic_dims: (src.harmonic.len(), dst.as_ref().map_or(0, |m| m.harmonic.len())),
        matrix: d.triplets().into_iter().map(|(i, j, x)| (i, j, crate::rational::format_q(&x))).collect(),
        kernel_intersection_dim: inter.len(),
        kernel_maps_to_kernel,
        projection_injective,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceDegree {
    pub k: usize,
    /// `𝒟_k 𝒟_{k-1} = 0` (vacuous in degree 0).
    pub composes_to_zero: bool,
    /// `ker □^𝒟 ⊆ ker ∂*`.
    pub laplacian_kernel_in_ker_dstar: bool,
    /// `D_k D_{k-1} = 0`; `None` when the hypothesis is not met.
    pub compressed_composes_to_zero: Option<bool>,
    pub compressed_cohomology: usize,
    pub original_cohomology: usize,
    /// Cohomology comparison and the map induced by `S`; `None` when the
    /// hypotheses are not met.
    pub cohomology_match: Option<bool>,
    pub splitting_iso: Option<bool>,
    /// `∂*(φ - 𝒟_{k-1} Q ∂* φ) = 0` for all `φ`.
    pub q_correction: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub degrees: Vec<SequenceDegree>,
    pub hypothesis_met: bool,
}

impl SequenceReport {
    pub fn ok(&self) -> bool {
        self.degrees.iter().all(|d| {
            d.laplacian_kernel_in_ker_dstar
                && d.q_correction
                && d.compressed_composes_to_zero != Some(false)
                && d.cohomology_match != Some(false)
                && d.splitting_iso != Some(false)
        })
    }
}

/// `dim ker(cur) / (im(prev) ∩ ker(cur))`, meaningful even when
/// `cur ∘ prev ≠ 0`.
fn cohomology_dim(prev: Option<&QMatrix>, cur: &QMatrix) -> usize {
    let ker = cur.ncols() - cur.rank();
    let boundaries = prev.map_or(0, |p| p.rank() - cur.mul(p).rank());
    ker - boundaries
}

pub fn sequence_report(cx: &ChainComplex, ops: &[QMatrix]) -> Result<SequenceReport> {
    let top = cx.top();
    if ops.len() != top + 1 {
        return Err(BggError::Shape(format!("expected {} operators, got {}", top + 1, ops.len())));
    }
    let machines: Vec<Machine> = (0..=top).map(|k| Machine::new(cx, k, &ops[k])).collect::<Result<_>>()?;
    let mut compressed = Vec::new();
    for k in 0..=top {
        compressed.push(compressed_matrix(cx, &machines[k], machines.get(k + 1))?);
    }
    let zero_after = |k: usize| -> bool { k == 0 || k > top || ops[k].mul(&ops[k - 1]).is_zero() };
    let mut degrees = Vec::new();
    for k in 0..=top {
        let composes_to_zero = zero_after(k);
        let mut lap = if k < top { cx.d_down[k + 1].mul(&ops[k]) } else { QMatrix::zeros(cx.dim(k), cx.dim(k)) };
        if k > 0 {
            lap = lap.add(&ops[k - 1].mul(&cx.d_down[k]));
        }
        let laplacian_kernel_in_ker_dstar = lap.nullspace().iter().all(|v| vec_is_zero(&cx.d_down[k].mul_vec(v)));
        let compressed_composes_to_zero =
            if k > 0 && composes_to_zero { Some(compressed[k].mul(&compressed[k - 1]).is_zero()) } else { None };
        let prev_c = if k > 0 { Some(&compressed[k - 1]) } else { None };
        let prev_o = if k > 0 { Some(&ops[k - 1]) } else { None };
        let compressed_cohomology = cohomology_dim(prev_c, &compressed[k]);
        let original_cohomology = cohomology_dim(prev_o, &ops[k]);
        let hyp = zero_after(k) && zero_after(k + 1) && (k < 2 || zero_after(k - 1));
        let (cohomology_match, splitting_iso) = if hyp {
            let ker_d = compressed[k].nullspace();
            let lifted: Vec<Vec<Q>> = ker_d
                .iter()
                .map(|c| {
                    let alpha = c.iter().zip(&machines[k].harmonic).fold(vec![Q::zero(); cx.dim(k)], |acc, (x, h)| {
                        crate::matrix::vec_add(&acc, &crate::matrix::vec_scale(h, x))
                    });
                    machines[k].s.matrix.mul_vec(&alpha)
                })
                .collect();
            let closed = lifted.iter().all(|v| vec_is_zero(&ops[k].mul_vec(v)));
            let image: Vec<Vec<Q>> = prev_o.map(|p| p.column_space()).unwrap_or_default();
            let base = image.len();
            let together = span_rank(cx.dim(k), &[image, lifted].concat());
            let induced_rank = together - base;
            (
                Some(compressed_cohomology == original_cohomology),
                Some(closed && induced_rank == original_cohomology && induced_rank == compressed_cohomology),
            )
        } else {
            (None, None)
        };
        let q_correction = if k == 0 {
            true
        } else {
            let dstar = &cx.d_down[k];
            let corr = QMatrix::identity(cx.dim(k)).sub(&ops[k - 1].mul(&machines[k - 1].q.matrix).mul(dstar));
            dstar.mul(&corr).is_zero()
        };
        degrees.push(SequenceDegree {
            k,
            composes_to_zero,
            laplacian_kernel_in_ker_dstar,
            compressed_composes_to_zero,
            compressed_cohomology,
            original_cohomology,
            cohomology_match,
            splitting_iso,
            q_correction,
        });
    }
    let hypothesis_met = (1..=top).all(zero_after);
    Ok(SequenceReport { degrees, hypothesis_met })
}

/// Contraction of the form `mask` with `E_{-β}` for each `β` weighted by
/// `y`, wedged on the left with the 2-form `j`.
fn insert_form(j: u64, mask: u64, beta: usize) -> Option<(u64, bool)> {
    if mask >> beta & 1 == 0 {
        return None;
    }
    // ι_{E_-β} η_I = (-1)^{t-1} η_{I∖β} with t the position of β in I
    let t_odd = (mask & ((1u64 << beta) - 1)).count_ones() % 2 == 1;
    let rest = mask & !(1 << beta);
    if rest & j != 0 {
        return None;
    }
    let jp: Vec<usize> = (0..64).filter(|&i| j >> i & 1 == 1).collect();
    let rp: Vec<usize> = (0..64).filter(|&i| rest >> i & 1 == 1).collect();
    let crossings: usize = jp.iter().map(|&a| rp.iter().filter(|&&b| b < a).count()).sum();
    Some((j | rest, t_odd ^ (crossings % 2 == 1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct InsertionReport {
    pub stable: bool,
    pub e_dim: usize,
    pub f_dim: usize,
    pub pairs_checked: usize,
    /// Indices into the spanning sets of the first failing pair.
    pub witness: Option<(usize, usize)>,
}

/// `F`-insertion stability of `E ⊆ C_k` for `F ⊆ Λ²(q₊/p₊) ⊗ l_p`, with
/// `l_p` in the basis of [`adjoint_module`].
pub fn insertion_stability(cx: &ChainComplex, k: usize, e_span: &[Vec<Q>], f_span: &[Vec<Q>]) -> Result<InsertionReport> {
    let pair = &cx.pair;
    let r = pair.rel_dim();
    if k == 0 || k > cx.top() || k + 1 > r {
        return Err(BggError::Shape(format!("insertion needs 1 <= k < {r}, got {k}")));
    }
    let adj = adjoint_module(&Algebra::levi(pair.rank(), &pair.crossed_p));
    let adim = adj.dim();
    let two_forms = subsets(r, 2);
    let dim_c = cx.dim(k);
    if e_span.iter().any(|v| v.len() != dim_c) {
        return Err(BggError::Shape(format!("E vectors must have length dim C_{k} = {dim_c}")));
    }
    if f_span.iter().any(|v| v.len() != two_forms.len() * adim) {
        return Err(BggError::Shape(format!("F vectors must have length {}", two_forms.len() * adim)));
    }
    // position of E_{-β} in the adjoint basis
    let roots = Algebra::levi(pair.rank(), &pair.crossed_p).roots();
    let neg_pos: Vec<usize> = pair
        .basis_rel
        .iter()
        .map(|&(i, j)| roots.iter().position(|&x| x == (j, i)).expect("negative relative root in l_p"))
        .collect();
    let up = &cx.spaces[k + 1];
    let up_index: BTreeMap<u64, usize> = up.forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let space = &cx.spaces[k];
    let e_basis = crate::matrix::span_basis(dim_c, e_span);
    let e_check = BasisCoords::new(dim_c, &e_basis)?;
    let mut pairs_checked = 0;
    for (ei, phi) in e_span.iter().enumerate() {
        for (fi, psi) in f_span.iter().enumerate() {
            pairs_checked += 1;
            let mut out = vec![Q::zero(); up.dim()];
            for (pi, x) in phi.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (form, v) = (space.forms[pi / space.vdim], pi % space.vdim);
                for (si, y) in psi.iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    let (j, a) = (two_forms[si / adim], si % adim);
                    let Some(beta) = neg_pos.iter().position(|&p| p == a) else { continue };
                    let Some((mask, neg)) = insert_form(j, form, beta) else { continue };
                    let c = x * y;
                    let slot = up.index(up_index[&mask], v);
                    if neg {
                        out[slot] -= c;
                    } else {
                        out[slot] += c;
                    }
                }
            }
            let image = cx.d_down[k + 1].mul_vec(&out);
            if !e_check.contains(&image) {
                return Ok(InsertionReport { stable: false, e_dim: e_basis.len(), f_dim: f_span.len(), pairs_checked, witness: Some((ei, fi)) });
            }
        }
    }
    Ok(InsertionReport { stable: true, e_dim: e_basis.len(), f_dim: f_span.len(), pairs_checked, witness: None })
}

/// Named submodules used by the insertion check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InsertionPreset {
    /// Everything.
    Full,
    Zero,
    /// `Λ² p₊ ⊗ (coefficients)` for the intermediate crossing.
    WedgeInner,
    /// `Λ² p₊ ⊗ g + p₊ ∧ q₊ ⊗ q`.
    WedgeMixed,
    /// `Λ² p₊ ⊗ q`.
    WedgeInnerQ,
}

impl InsertionPreset {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => Self::Full,
            "zero" => Self::Zero,
            "wedge-inner" => Self::WedgeInner,
            "wedge-mixed" => Self::WedgeMixed,
            "wedge-inner-q" => Self::WedgeInnerQ,
            _ => return Err(BggError::Parse(format!("unknown submodule preset {s:?}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Zero => "zero",
            Self::WedgeInner => "wedge-inner",
            Self::WedgeMixed => "wedge-mixed",
            Self::WedgeInnerQ => "wedge-inner-q",
        }
    }
}

/// Spanning set of a preset inside `Λ^k(q₊/p₊) ⊗ M`, where `inner` is the
/// crossing of the intermediate parabolic and `M` has the basis labels of
/// `module` (adjoint-type modules expose root vectors as `E<i><j>`).
pub fn preset_span(
    pair: &ParabolicPair,
    inner: &crate::rootdata::NodeSet,
    module: &WeightModule,
    k: usize,
    preset: InsertionPreset,
) -> Vec<Vec<Q>> {
    let r = pair.rel_dim();
    let forms = subsets(r, k);
    let vdim = module.dim();
    let in_inner = |a: usize| {
        let (i, j) = pair.basis_rel[a];
        inner.grading(i, j) > 0
    };
    // basis vectors of q: Cartan part and root vectors of nonnegative q-grading
    let in_q = |v: usize| -> bool {
        let l = &module.labels[v];
        match l.strip_prefix('E') {
            Some(rest) => {
                let b = rest.as_bytes();
                let (i, j) = ((b[0] - b'1') as usize, (b[1] - b'1') as usize);
                pair.crossed_q.grading(i, j) >= 0
            }
            None => true,
        }
    };
    let mut out = Vec::new();
    for (fi, &f) in forms.iter().enumerate() {
        let members: Vec<usize> = (0..r).filter(|&a| f >> a & 1 == 1).collect();
        let inner_count = members.iter().filter(|&&a| in_inner(a)).count();
        for v in 0..vdim {
            let keep = match preset {
                InsertionPreset::Full => true,
                InsertionPreset::Zero => false,
                InsertionPreset::WedgeInner => inner_count == members.len(),
                InsertionPreset::WedgeInnerQ => inner_count == members.len() && in_q(v),
                InsertionPreset::WedgeMixed => inner_count == members.len() || (inner_count + 1 == members.len() && in_q(v)),
            };
            if keep {
                let mut e = vec![Q::zero(); forms.len() * vdim];
                e[fi * vdim + v] = Q::one();
                out.push(e);
            }
        }
    }
    out
}

/// Sub-sample of vectors from a span, for quick randomised comparisons.
pub fn random_combinations(basis: &[Vec<Q>], count: usize, seed: u64) -> Vec<Vec<Q>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            basis.iter().fold(vec![Q::zero(); basis[0].len()], |acc, b| {
                let c = q(rng.gen_range(-3..=3));
                crate::matrix::vec_add(&acc, &crate::matrix::vec_scale(b, &c))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::build_labelled;
    use crate::parabolic::PairSpec;
    use crate::rootdata::{NodeSet, Weight};

    fn cx(spec: &str, lam: &[i64]) -> ChainComplex {
        let p = PairSpec::parse(spec).unwrap().build().unwrap();
        build_labelled(&p, &Weight::from_ints(lam)).unwrap()
    }

    #[test]
    fn poly_helpers() {
        let p = s_level_poly(&[q(2)]);
        assert_eq!(p, Poly(vec![q(1), qf(-1, 2)]));
        let t = q_tilde_poly(&[q(2), q(3)]);
        // x Q̃(x) agrees with 1 at both eigenvalues
        let xt = Poly(vec![q(0), q(1)]).mul(&t);
        for a in [q(2), q(3)] {
            let v = xt.0.iter().enumerate().fold(q(0), |acc, (i, c)| acc + c * num_traits::pow(a.clone(), i));
            assert_eq!(v, q(1));
        }
    }

    #[test]
    fn model_operator_is_compressable() {
        let c = cx("A3 p=1 q=1,2", &[0, 0, 0]);
        let d0 = make_compressable(&c, 0, None).unwrap();
        assert_eq!(d0.matrix, c.d_up[0]);
        for seed in [1, 2] {
            let d = make_compressable(&c, 1, Some(seed)).unwrap();
            assert!(is_compressable(&c, 1, &d.matrix));
        }
    }

    #[test]
    fn splitting_and_q_on_random_operators() {
        let c = cx("A2 p=- q=1,2", &[1, 0]);
        for seed in 0..3 {
            for k in 0..c.top() {
                let d = make_compressable(&c, k, Some(seed)).unwrap();
                let m = Machine::new(&c, k, &d.matrix).unwrap();
                let sv = m.splitting_verdicts();
                assert!(sv.ok(), "{sv:?}");
                let qv = m.q_verdicts(&c).unwrap();
                assert!(qv.ok(), "{qv:?}");
            }
        }
    }

    #[test]
    fn model_sequence_compresses_to_zero_maps() {
        let c = cx("A3 p=1 q=1,2", &[0, 0, 0]);
        let seq = model_sequence(&c);
        let rep = sequence_report(&c, &seq).unwrap();
        assert!(rep.ok() && rep.hypothesis_met, "{rep:?}");
        let cr = compressed_report(&c, 0, &seq[0]).unwrap();
        assert!(cr.matrix.is_empty());
    }

    #[test]
    fn conjugated_sequence_checks() {
        let c = cx("A2 p=- q=1,2", &[0, 0]);
        let seq = conjugated_sequence(&c, 11);
        for k in 0..c.top() {
            assert!(is_compressable(&c, k, &seq[k]));
        }
        let rep = sequence_report(&c, &seq).unwrap();
        assert!(rep.ok() && rep.hypothesis_met, "{rep:?}");
    }

    #[test]
    fn independent_operators_miss_the_hypothesis() {
        let c = cx("A2 p=- q=1,2", &[1, 0]);
        let seq = independent_sequence(&c, 5).unwrap();
        let rep = sequence_report(&c, &seq).unwrap();
        assert!(!rep.hypothesis_met);
        assert!(rep.degrees.iter().any(|d| d.compressed_composes_to_zero.is_none() && !d.composes_to_zero));
        assert!(rep.degrees.iter().all(|d| d.laplacian_kernel_in_ker_dstar && d.q_correction));
    }

    #[test]
    fn insertion_absolute_case() {
        let p = PairSpec::parse("A3 p=- q=1,2").unwrap().build().unwrap();
        let adj = adjoint_module(&Algebra::g(3));
        let c = crate::homology::build_complex(&p, &adj).unwrap();
        let inner = NodeSet::new([1]);
        let f = preset_span(&p, &inner, &adj, 2, InsertionPreset::WedgeInner);
        let rep = insertion_stability(&c, 2, &f, &f).unwrap();
        assert!(rep.stable, "{rep:?}");
        let zero = insertion_stability(&c, 2, &f, &[]).unwrap();
        assert!(zero.stable);
        let full = preset_span(&p, &inner, &adj, 2, InsertionPreset::Full);
        let rep = insertion_stability(&c, 2, &f, &full).unwrap();
        assert!(!rep.stable && rep.witness.is_some());
    }
}
