//! The BRST element, its differentials and truncated cohomology, together
//! with the independent oracles the cohomology is compared against.
//!
//! Truncation: cochains of Bernstein degree `≤ N`, differentials landing in
//! degree `≤ N + 2`. For each filtration level `k ≤ N` the reported value is
//!
//! `h_N(k) = dim ker(d on C_{≤k}) − dim(d(C_{≤N}) ∩ C_{≤k})`,
//!
//! which decreases in `N` towards the filtered piece of the true cohomology.
//! A cell is flagged stable when `k ≤ N − 2` and `h_N(k) = h_{N−2}(k)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::basis::{exponent_vectors, ghost_basis, weyl_basis, weyl_monomials_of_degree};
use crate::algebra::{
    enumerate_basis, AlgebraError, BrstElement, BrstMonomial, GhostElement, GhostMonomial, PolyElement, WeylElement,
    WeylMonomial,
};
use crate::exact::{
    binomial, expand_product_one_minus, expand_rational_series, frac, int, Echelon, ExactError, Rational,
    SparseMatrix, SparseVec,
};
use crate::models::ReductionSetup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrstError {
    #[error("element is not bihomogeneous in the ghost bigrading")]
    NotBihomogeneous,
    #[error("element is not parity homogeneous")]
    NotHomogeneous,
    #[error("invariants are only computed for torus groups")]
    NonabelianInvariants,
    #[error("degree bound must be even and nonnegative, got {0}")]
    BadBound(i64),
    #[error("weight has length {got}, the setup's torus has rank {expected}")]
    WeightRank { expected: usize, got: usize },
    #[error("differential leaves the weight sector (setup is not graded by this torus)")]
    WeightLeak,
    #[error("generator {0} is not homogeneous")]
    InhomogeneousGenerator(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Coefficient of the cubic ghost term of `Q_c`.
///
/// With moments satisfying `[μ_i, μ_j] = Σ χ^k_ij μ_k`, the term
/// `ψ_k ψ*_i ψ*_j` must enter with `−½` for `Q_c² = 0`; `+½` leaves
/// `Q_c² = Σ χ^k_ij μ_k ψ*_i ψ*_j`.
pub const CUBIC_COEFFICIENT: (i64, i64) = (-1, 2);

/// `Q_c = Σ_i (μ_i + c_i) ⊗ ψ*_i − ½ Σ χ^k_ij ⊗ ψ_k ψ*_i ψ*_j`.
pub fn build_qc(setup: &ReductionSetup) -> BrstElement {
    build_qc_with_cubic(setup, &frac(CUBIC_COEFFICIENT.0, CUBIC_COEFFICIENT.1))
}

/// `Q_c` with an arbitrary cubic coefficient; used to exhibit the sign.
pub fn build_qc_with_cubic(setup: &ReductionSetup, cubic: &Rational) -> BrstElement {
    let (n, g) = (setup.n_vars, setup.g_dim());
    let mut q = BrstElement::zero(n, g);
    for i in 0..g {
        q = &q + &BrstElement::tensor(&setup.shifted_moment(i), &GhostElement::psi_star(g, i));
    }
    for ((i, j, k), chi) in setup.lie.constants() {
        let ghost = GhostElement::psi(g, k)
            .mul(&GhostElement::psi_star(g, i))
            .and_then(|x| x.mul(&GhostElement::psi_star(g, j)))
            .expect("same ghost dimension");
        q = &q + &BrstElement::tensor(&WeylElement::constant(n, chi * cubic), &ghost);
    }
    q
}

/// Ghost bidegree `(−|S|, |T|)` of an element read in the anti-normal basis
/// `ψ*_T ψ_S`, if all terms share it.
pub fn antinormal_bidegree(a: &BrstElement) -> Option<(i64, i64)> {
    let coords = a.to_antinormal();
    let mut it = coords.keys().map(|m| m.ghost.bidegree());
    match it.next() {
        None => Some((0, 0)),
        Some(b) => it.all(|c| c == b).then_some(b),
    }
}

/// A setup together with its BRST element.
#[derive(Debug, Clone)]
pub struct BrstComplex {
    setup: ReductionSetup,
    q: BrstElement,
}

impl BrstComplex {
    pub fn new(setup: ReductionSetup) -> Self {
        let q = build_qc(&setup);
        Self { setup, q }
    }

    pub fn setup(&self) -> &ReductionSetup {
        &self.setup
    }

    pub fn q(&self) -> &BrstElement {
        &self.q
    }

    pub fn n_vars(&self) -> usize {
        self.setup.n_vars
    }

    pub fn g_dim(&self) -> usize {
        self.setup.g_dim()
    }

    /// `[Q_c, a] = Q_c a − (−1)^{|a|} a Q_c`.
    pub fn apply_ad_qc(&self, a: &BrstElement) -> Result<BrstElement, BrstError> {
        self.q.supercommutator(a).map_err(|e| match e {
            AlgebraError::NotHomogeneous => BrstError::NotHomogeneous,
            other => BrstError::Algebra(other),
        })
    }

    fn project(&self, a: &BrstElement, shift: (i64, i64)) -> Result<BrstElement, BrstError> {
        let (m, n) = antinormal_bidegree(a).ok_or(BrstError::NotBihomogeneous)?;
        let target = (m + shift.0, n + shift.1);
        let image = self.apply_ad_qc(a)?.to_antinormal();
        Ok(BrstElement::from_antinormal(
            self.n_vars(),
            self.g_dim(),
            image.into_iter().filter(|(k, _)| k.ghost.bidegree() == target),
        ))
    }

    /// Component of `ad Q_c` of bidegree `(0, +1)`.
    pub fn apply_d_plus(&self, a: &BrstElement) -> Result<BrstElement, BrstError> {
        self.project(a, (0, 1))
    }

    /// Component of `ad Q_c` of bidegree `(+1, 0)`.
    pub fn apply_d_minus(&self, a: &BrstElement) -> Result<BrstElement, BrstError> {
        self.project(a, (1, 0))
    }

    fn check_weight(&self, weight: &[i64]) -> Result<(), BrstError> {
        if weight.len() != self.setup.weight_rank() {
            return Err(BrstError::WeightRank { expected: self.setup.weight_rank(), got: weight.len() });
        }
        Ok(())
    }

    /// Matrix of `ad Q_c : C^n_{λ,≤N} → C^{n+1}_{λ,≤N+2}` in the
    /// [`enumerate_basis`] orderings (columns: domain, rows: codomain).
    pub fn assemble_differential(&self, spec: &TruncationSpec, n: i64) -> Result<SparseMatrix, BrstError> {
        self.check_weight(&spec.weight)?;
        let s = &self.setup;
        let dom = enumerate_basis(s.n_vars, s.g_dim(), n, &spec.weight, &s.variable_weights, spec.degree_bound);
        let cod =
            enumerate_basis(s.n_vars, s.g_dim(), n + 1, &spec.weight, &s.variable_weights, spec.degree_bound + 2);
        let index: HashMap<&BrstMonomial, usize> = cod.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut triplets = Vec::new();
        for (col, m) in dom.iter().enumerate() {
            let img = self.apply_ad_qc(&BrstElement::from_monomial(s.n_vars, s.g_dim(), m.clone(), int(1)))?;
            for (k, c) in img.terms() {
                let row = *index.get(k).ok_or(BrstError::WeightLeak)?;
                triplets.push((row, col, c.clone()));
            }
        }
        Ok(SparseMatrix::from_triplets(cod.len(), dom.len(), triplets)?)
    }
}

/// A weight sector and an even degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationSpec {
    pub weight: Vec<i64>,
    pub degree_bound: i64,
}

impl TruncationSpec {
    pub fn new(weight: Vec<i64>, degree_bound: i64) -> Result<Self, BrstError> {
        if degree_bound < 0 || degree_bound % 2 != 0 {
            return Err(BrstError::BadBound(degree_bound));
        }
        Ok(Self { weight, degree_bound })
    }
}

/// One `(λ, n, k)` cell of a truncated cohomology table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyCell {
    pub weight: Vec<i64>,
    pub ghost_degree: i64,
    pub bound: i64,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub dim: usize,
    pub stable: bool,
}

/// Cells for all ghost degrees `−dim 𝔤..=dim 𝔤` and levels `0..=N` of one sector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub weight: Vec<i64>,
    pub degree_bound: i64,
    pub cells: Vec<CohomologyCell>,
}

impl CohomologyReport {
    /// Dimension at `(n, k)`; ghost degrees outside the table are 0.
    pub fn dim(&self, n: i64, k: i64) -> usize {
        self.cells.iter().find(|c| c.ghost_degree == n && c.bound == k).map_or(0, |c| c.dim)
    }
}

/// A graded family of bases with a differential, as seen by the engine.
trait Frame {
    /// Basis keys of index `idx` and degree `≤ bound`, in ascending degree.
    fn basis(&self, idx: i64, bound: i64) -> Vec<BrstMonomial>;
    /// Image of a basis key, in the coordinates of index `idx + 1`.
    fn apply(&self, key: &BrstMonomial) -> Result<BTreeMap<BrstMonomial, Rational>, BrstError>;
}

struct TotalFrame<'a> {
    complex: &'a BrstComplex,
    weight: &'a [i64],
}

impl Frame for TotalFrame<'_> {
    fn basis(&self, n: i64, bound: i64) -> Vec<BrstMonomial> {
        let s = self.complex.setup();
        enumerate_basis(s.n_vars, s.g_dim(), n, self.weight, &s.variable_weights, bound)
    }

    fn apply(&self, key: &BrstMonomial) -> Result<BTreeMap<BrstMonomial, Rational>, BrstError> {
        let c = self.complex;
        let e = BrstElement::from_monomial(c.n_vars(), c.g_dim(), key.clone(), int(1));
        Ok(c.apply_ad_qc(&e)?.terms().clone())
    }
}

/// Column `j` of the double complex with `d₋`; index `m = −|S|`, keys read
/// in the anti-normal basis.
struct ColumnFrame<'a> {
    complex: &'a BrstComplex,
    weight: &'a [i64],
    column: usize,
}

impl Frame for ColumnFrame<'_> {
    fn basis(&self, m: i64, bound: i64) -> Vec<BrstMonomial> {
        let s = self.complex.setup();
        let ghosts: Vec<GhostMonomial> = ghost_basis(s.g_dim(), self.column as i64 + m)
            .into_iter()
            .filter(|g| g.star.count_ones() as usize == self.column)
            .collect();
        let mut out = Vec::new();
        for w in weyl_basis(s.n_vars, self.weight, &s.variable_weights, bound) {
            for g in &ghosts {
                out.push(BrstMonomial::new(w.clone(), *g));
            }
        }
        out
    }

    fn apply(&self, key: &BrstMonomial) -> Result<BTreeMap<BrstMonomial, Rational>, BrstError> {
        let c = self.complex;
        let e = BrstElement::from_antinormal(c.n_vars(), c.g_dim(), [(key.clone(), int(1))]);
        Ok(c.apply_d_minus(&e)?.to_antinormal())
    }
}

/// Truncated cohomology at index `idx` for levels `0..=bound`.
fn truncated_cells<F: Frame>(frame: &F, weight: &[i64], idx: i64, bound: i64) -> Result<Vec<CohomologyCell>, BrstError> {
    let levels = (bound + 1) as usize;
    let deg = |m: &BrstMonomial| m.weyl.degree() as usize;

    // kernel: columns of d on C^idx_{≤k}, inserted in ascending degree
    let dom = frame.basis(idx, bound);
    let cod = frame.basis(idx + 1, bound + 2);
    let cod_index: HashMap<&BrstMonomial, usize> = cod.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut count_le = vec![0usize; levels];
    let mut rank_le = vec![0usize; levels];
    let mut ech = Echelon::new();
    let mut pos = 0;
    for k in 0..levels {
        while pos < dom.len() && deg(&dom[pos]) <= k {
            ech.insert(to_sparse(&frame.apply(&dom[pos])?, &cod_index)?);
            pos += 1;
        }
        count_le[k] = pos;
        rank_le[k] = ech.rank();
    }

    // image: d(C^{idx−1}_{≤P}) in C^idx coordinates ordered by descending degree
    let mut target = frame.basis(idx, bound + 2);
    target.sort_by_key(|m| std::cmp::Reverse(deg(m)));
    let tgt_index: HashMap<&BrstMonomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let prev = frame.basis(idx - 1, bound);
    let mut ech = Echelon::new();
    let mut snapshot_low = None;
    for m in &prev {
        if snapshot_low.is_none() && deg(m) as i64 > bound - 2 {
            snapshot_low = Some(pivot_histogram(&ech, &target, levels));
        }
        ech.insert(to_sparse(&frame.apply(m)?, &tgt_index)?);
    }
    let hist_high = pivot_histogram(&ech, &target, levels);
    let hist_low = snapshot_low.unwrap_or_else(|| hist_high.clone());

    let mut cells = Vec::with_capacity(levels);
    for k in 0..levels {
        let kernel = count_le[k] - rank_le[k];
        let image = hist_high[k];
        let dim = kernel - image;
        let stable = (k as i64) <= bound - 2 && kernel - hist_low[k] == dim;
        cells.push(CohomologyCell {
            weight: weight.to_vec(),
            ghost_degree: idx,
            bound: k as i64,
            kernel_dim: kernel,
            image_dim: image,
            dim,
            stable,
        });
    }
    Ok(cells)
}

/// `out[k]` = number of pivots in coordinates of degree `≤ k`.
fn pivot_histogram(ech: &Echelon, target: &[BrstMonomial], levels: usize) -> Vec<usize> {
    let mut per = vec![0usize; levels + 3];
    for p in ech.pivot_columns() {
        let d = (target[p].weyl.degree() as usize).min(levels + 2);
        per[d] += 1;
    }
    let mut out = vec![0usize; levels];
    let mut acc = 0;
    for k in 0..levels {
        acc += per[k];
        out[k] = acc;
    }
    out
}

fn to_sparse(
    img: &BTreeMap<BrstMonomial, Rational>,
    index: &HashMap<&BrstMonomial, usize>,
) -> Result<SparseVec, BrstError> {
    let mut v: SparseVec = Vec::with_capacity(img.len());
    for (k, c) in img {
        v.push((*index.get(k).ok_or(BrstError::WeightLeak)?, c.clone()));
    }
    v.sort_by_key(|(i, _)| *i);
    Ok(v)
}

fn require_torus(setup: &ReductionSetup) -> Result<(), BrstError> {
    if !setup.is_torus() {
        return Err(BrstError::NonabelianInvariants);
    }
    Ok(())
}

/// Cells of `H^n(C_λ, ad Q_c)` for one ghost degree.
pub fn brst_sector(complex: &BrstComplex, spec: &TruncationSpec, n: i64) -> Result<Vec<CohomologyCell>, BrstError> {
    require_torus(complex.setup())?;
    complex.check_weight(&spec.weight)?;
    truncated_cells(&TotalFrame { complex, weight: &spec.weight }, &spec.weight, n, spec.degree_bound)
}

/// Truncated BRST cohomology of one weight sector, all ghost degrees.
///
/// Torus groups only: ghosts carry no weight, which is exact for abelian
/// adjoint actions.
pub fn brst_cohomology(complex: &BrstComplex, spec: &TruncationSpec) -> Result<CohomologyReport, BrstError> {
    let d = complex.g_dim() as i64;
    let mut cells = Vec::new();
    for n in -d..=d {
        cells.extend(brst_sector(complex, spec, n)?);
    }
    Ok(CohomologyReport { weight: spec.weight.clone(), degree_bound: spec.degree_bound, cells })
}

/// Truncated `H^m(C^{•,j}, d₋)` for `m = −dim 𝔤..=0`; cells carry `m` as
/// their ghost degree.
pub fn column_cohomology(
    complex: &BrstComplex,
    spec: &TruncationSpec,
    column: usize,
) -> Result<CohomologyReport, BrstError> {
    require_torus(complex.setup())?;
    complex.check_weight(&spec.weight)?;
    let frame = ColumnFrame { complex, weight: &spec.weight, column };
    let d = complex.g_dim() as i64;
    let mut cells = Vec::new();
    for m in -d..=0 {
        cells.extend(truncated_cells(&frame, &spec.weight, m, spec.degree_bound)?);
    }
    Ok(CohomologyReport { weight: spec.weight.clone(), degree_bound: spec.degree_bound, cells })
}

/// `dim` of the weight-`λ`, degree-`≤ k` part of `𝔇(V) / Σ 𝔇(V)(μ_i + c_i)`
/// for `k = 0..=N`, by direct elimination: the relation span at level `k` is
/// `{m (μ_i + c_i) : deg m ≤ k − 2}`.
pub fn lc_table(setup: &ReductionSetup, weight: &[i64], bound: i64) -> Result<Vec<usize>, BrstError> {
    if weight.len() != setup.weight_rank() {
        return Err(BrstError::WeightRank { expected: setup.weight_rank(), got: weight.len() });
    }
    if bound < 0 {
        return Ok(Vec::new());
    }
    let ws = &setup.variable_weights;
    let space = weyl_basis(setup.n_vars, weight, ws, bound);
    let index: HashMap<&WeylMonomial, usize> = space.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut gens: Vec<(u32, WeylElement)> = Vec::new();
    for i in 0..setup.g_dim() {
        let f = setup.shifted_moment(i);
        let fw = match f.torus_weight(ws) {
            crate::algebra::TorusWeight::Homogeneous(w) => w,
            crate::algebra::TorusWeight::Mixed => return Err(BrstError::InhomogeneousGenerator(i)),
        };
        let mw: Vec<i64> = weight.iter().zip(&fw).map(|(a, b)| a - b).collect();
        for m in weyl_basis(setup.n_vars, &mw, ws, bound - 2) {
            let prod = WeylElement::from_monomial(m.clone(), int(1)).mul(&f)?;
            gens.push((m.degree(), prod));
        }
    }
    gens.sort_by_key(|(d, _)| *d);
    let mut ech = Echelon::new();
    let mut out = Vec::with_capacity(bound as usize + 1);
    let mut pos = 0;
    for k in 0..=bound {
        while pos < gens.len() && (gens[pos].0 as i64) <= k - 2 {
            let mut v: SparseVec = Vec::new();
            for (m, c) in gens[pos].1.terms() {
                v.push((*index.get(m).ok_or(BrstError::WeightLeak)?, c.clone()));
            }
            v.sort_by_key(|(i, _)| *i);
            ech.insert(v);
            pos += 1;
        }
        let dim = space.iter().filter(|m| m.degree() as i64 <= k).count();
        out.push(dim - ech.rank());
    }
    Ok(out)
}

/// `lc_table` at the top level `N`.
pub fn lc_oracle(setup: &ReductionSetup, weight: &[i64], bound: i64) -> Result<usize, BrstError> {
    Ok(lc_table(setup, weight, bound)?.last().copied().unwrap_or(0))
}

/// Weight-zero `lc_table`, i.e. the torus invariants of the reduction.
pub fn lc_invariants_oracle(setup: &ReductionSetup, bound: i64) -> Result<Vec<usize>, BrstError> {
    require_torus(setup)?;
    lc_table(setup, &vec![0; setup.weight_rank()], bound)
}

/// Cohomology of `(Λ(𝔤*), λ ∧ ·)` for a torus, by rank computation.
pub fn exterior_weight_cohomology(lambda: &[i64]) -> Vec<usize> {
    let d = lambda.len();
    let subsets = |n: usize| -> Vec<u64> { (0..1u64 << d).filter(|s| s.count_ones() as usize == n).collect() };
    let rank_of = |n: usize| -> usize {
        let target: HashMap<u64, usize> = subsets(n + 1).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut ech = Echelon::new();
        for s in subsets(n) {
            let mut v: SparseVec = Vec::new();
            for (i, &l) in lambda.iter().enumerate() {
                if l == 0 || s >> i & 1 == 1 {
                    continue;
                }
                let sign = if (s & ((1u64 << i) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
                v.push((target[&(s | 1 << i)], int(sign * l)));
            }
            v.sort_by_key(|(i, _)| *i);
            ech.insert(v);
        }
        ech.rank()
    };
    let ranks: Vec<usize> = (0..=d).map(|n| if n < d { rank_of(n) } else { 0 }).collect();
    (0..=d)
        .map(|n| binomial(d as u64, n as u64) as usize - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect()
}

/// Cohomology of `d₊` on `𝔏_c ⊗ Λ(𝔤*)` at weight `λ` for a torus: `d₊` acts
/// on weight-`λ` classes as `λ ∧ ·`, so each cell is
/// `lc_table(λ)[k] · H^n(Λ(𝔤*), λ∧)`.
pub fn dplus_on_lc_cohomology(
    setup: &ReductionSetup,
    spec: &TruncationSpec,
) -> Result<CohomologyReport, BrstError> {
    require_torus(setup)?;
    let lc = lc_table(setup, &spec.weight, spec.degree_bound)?;
    let ext = exterior_weight_cohomology(&spec.weight);
    let mut cells = Vec::new();
    for (n, &h) in ext.iter().enumerate() {
        for (k, &l) in lc.iter().enumerate() {
            cells.push(CohomologyCell {
                weight: spec.weight.clone(),
                ghost_degree: n as i64,
                bound: k as i64,
                kernel_dim: l * h,
                image_dim: 0,
                dim: l * h,
                stable: (k as i64) <= spec.degree_bound - 2,
            });
        }
    }
    Ok(CohomologyReport { weight: spec.weight.clone(), degree_bound: spec.degree_bound, cells })
}

/// Hilbert function of `ℚ[x, ξ]/(f_1, …, f_r)` against the complete
/// intersection series `Π(1 − t^{deg f_i}) / (1 − t)^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertCertificate {
    pub computed: Vec<i128>,
    pub expected: Vec<i128>,
    pub first_failure: Option<usize>,
}

impl HilbertCertificate {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Degreewise comparison through `N`; generators must be homogeneous.
pub fn hilbert_certificate(
    generators: &[PolyElement],
    n_vars: usize,
    bound: usize,
) -> Result<HilbertCertificate, BrstError> {
    let mut degrees = Vec::new();
    for (i, f) in generators.iter().enumerate() {
        if f.is_zero() {
            degrees.push(None);
            continue;
        }
        degrees.push(Some(f.homogeneous_degree().ok_or(BrstError::InhomogeneousGenerator(i))?));
    }
    let mut computed = Vec::with_capacity(bound + 1);
    for k in 0..=bound as u32 {
        let monos = weyl_monomials_of_degree(n_vars, k);
        let index: HashMap<&WeylMonomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ech = Echelon::new();
        for (f, d) in generators.iter().zip(&degrees) {
            let Some(d) = *d else { continue };
            if d > k {
                continue;
            }
            for m in weyl_monomials_of_degree(n_vars, k - d) {
                let prod = f.mul_monomial(&m);
                let mut v: SparseVec = prod.terms().iter().map(|(mm, c)| (index[mm], c.clone())).collect();
                v.sort_by_key(|(i, _)| *i);
                ech.insert(v);
            }
        }
        computed.push((monos.len() - ech.rank()) as i128);
    }
    let factors: Vec<(u32, u32)> = degrees.iter().flatten().map(|&d| (d, 1)).collect();
    let numerator = expand_product_one_minus(&factors);
    let expected = expand_rational_series(&numerator, &[(1, 2 * n_vars as u32)], bound).coefficients().to_vec();
    let first_failure = computed.iter().zip(&expected).position(|(a, b)| a != b);
    Ok(HilbertCertificate { computed, expected, first_failure })
}

/// The certificate for a setup's classical moments.
pub fn koszul_flatness_certificate(setup: &ReductionSetup, bound: usize) -> Result<HilbertCertificate, BrstError> {
    hilbert_certificate(&setup.classical_moments, setup.n_vars, bound)
}

/// A random element, bihomogeneous in the anti-normal bigrading, with a few
/// terms of Bernstein degree `≤ max_degree` and small rational coefficients.
pub fn random_bihomogeneous<R: Rng>(
    n_vars: usize,
    g_dim: usize,
    max_degree: u32,
    rng: &mut R,
) -> BrstElement {
    let s = rng.gen_range(0..=g_dim);
    let t = rng.gen_range(0..=g_dim);
    let subsets = |k: usize| -> Vec<u64> { (0..1u64 << g_dim).filter(|m| m.count_ones() as usize == k).collect() };
    let (ss, ts) = (subsets(s), subsets(t));
    let terms = rng.gen_range(1..=4);
    let mut coords = Vec::new();
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_degree);
        let exps = exponent_vectors(2 * n_vars, deg);
        let mut e = exps[rng.gen_range(0..exps.len())].clone();
        let beta = e.split_off(n_vars);
        let g = GhostMonomial::new(ss[rng.gen_range(0..ss.len())], ts[rng.gen_range(0..ts.len())]);
        let num = rng.gen_range(-5i64..=5);
        let den = rng.gen_range(1i64..=4);
        coords.push((BrstMonomial::new(WeylMonomial::new(e, beta), g), frac(num, den)));
    }
    BrstElement::from_antinormal(n_vars, g_dim, coords)
}

/// Result of the exact identity checks on one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub ad_squared: bool,
    pub d_plus_squared: bool,
    pub d_minus_squared: bool,
    pub anticommute: bool,
    pub sum: bool,
}

impl IdentityCheck {
    pub fn all(&self) -> bool {
        self.ad_squared && self.d_plus_squared && self.d_minus_squared && self.anticommute && self.sum
    }
}

/// `(ad Q_c)² a = 0`, `d₊² a = d₋² a = (d₊d₋ + d₋d₊) a = 0`, `(d₊ + d₋) a = ad Q_c a`.
pub fn check_identities(complex: &BrstComplex, a: &BrstElement) -> Result<IdentityCheck, BrstError> {
    let ad = complex.apply_ad_qc(a)?;
    let dp = complex.apply_d_plus(a)?;
    let dm = complex.apply_d_minus(a)?;
    let dpdm = complex.apply_d_plus(&dm)?;
    let dmdp = complex.apply_d_minus(&dp)?;
    Ok(IdentityCheck {
        ad_squared: complex.apply_ad_qc(&ad)?.is_zero(),
        d_plus_squared: complex.apply_d_plus(&dp)?.is_zero(),
        d_minus_squared: complex.apply_d_minus(&dm)?.is_zero(),
        anticommute: (&dpdm + &dmdp).is_zero(),
        sum: (&(&dp + &dm) - &ad).is_zero(),
    })
}

/// All weights `λ` with `|λ_i| ≤ r`, in lexicographic order.
pub fn weight_box(rank: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|w| {
                (-r..=r).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `Q_c` has ghost degree 1, is odd and (for tori) has weight 0.
pub fn qc_is_well_formed(complex: &BrstComplex) -> bool {
    let q = complex.q();
    let weights_zero = q.terms().keys().all(|m| {
        let w = m.weyl.weight(&complex.setup().variable_weights);
        w.iter().all(|x| *x == 0) || !complex.setup().is_torus()
    });
    q.ghost_degree() == Some(1) && q.parity() == Some(1) && weights_zero && !q.terms().values().any(|c| c.is_zero())
}
