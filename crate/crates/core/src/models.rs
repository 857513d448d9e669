//! Quiver and hypertoric setups, root-system utilities and stability checks.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{PolyElement, WeylElement, WeylMonomial};
use crate::exact::{dense_rank, determinant, fmt_rational, int, kernel_basis, Rational};
use crate::liealg::{
    gl_sum_lie, jacobi_check, torus_lie, validate_character, BasisLabel, Character, LieData, LieError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("arrow {arrow} is a loop")]
    Loop { arrow: usize },
    #[error("arrow {arrow} references a vertex outside 0..{vertices}")]
    BadVertex { arrow: usize, vertices: usize },
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("dimension vector is zero")]
    ZeroDimensionVector,
    #[error("diagram is not affine ADE: {0}")]
    NotAffine(String),
    #[error("unknown diagram `{0}`")]
    UnknownDiagram(String),
    #[error("stability violation: {reason}, witness {witness:?}")]
    StabilityViolation { witness: Vec<i64>, reason: String },
    #[error("theta . v = {0}, expected 0")]
    ThetaNotOrthogonal(String),
    #[error("c . v = {0}, expected 0")]
    CharacterNotOrthogonal(String),
    #[error("matrix is not unimodular: minor on columns {columns:?} equals {value}")]
    NotUnimodular { columns: Vec<usize>, value: String },
    #[error("matrix has rank {rank} < {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
    #[error("symbol of moment {index} differs from its classical moment")]
    SymbolMismatch { index: usize },
    #[error("moments {i}, {j} do not realize the bracket")]
    BracketMismatch { i: usize, j: usize },
    #[error("structure constants fail at {0}")]
    Jacobi(String),
    #[error("character is invalid: {0}")]
    Character(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A quiver without loops; arrows are `(out, in)` pairs indexed by position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub n_vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n_vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self, ModelError> {
        for (k, &(o, i)) in arrows.iter().enumerate() {
            if o >= n_vertices || i >= n_vertices {
                return Err(ModelError::BadVertex { arrow: k, vertices: n_vertices });
            }
            if o == i {
                return Err(ModelError::Loop { arrow: k });
            }
        }
        Ok(Self { n_vertices, arrows })
    }

    fn check_len(&self, what: &'static str, got: usize) -> Result<(), ModelError> {
        if got != self.n_vertices {
            return Err(ModelError::LengthMismatch { what, expected: self.n_vertices, got });
        }
        Ok(())
    }

    /// Symmetrized Tits form matrix `(v, w) = 2 v·w − Σ (v_out w_in + w_out v_in)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_vertices;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(o, i) in &self.arrows {
            c[o][i] -= 1;
            c[i][o] -= 1;
        }
        c
    }

    fn support_connected(&self, v: &[i64]) -> bool {
        let support: Vec<usize> = (0..self.n_vertices).filter(|&i| v[i] != 0).collect();
        let Some(&start) = support.first() else {
            return false;
        };
        let mut seen = vec![false; self.n_vertices];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(o, i) in &self.arrows {
                for (a, b) in [(o, i), (i, o)] {
                    if a == x && v[b] != 0 && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        support.iter().all(|&i| seen[i])
    }
}

/// Built-in diagrams; all arrows run from the lower to the higher vertex id
/// and vertex 0 is the extending vertex.
pub mod presets {
    use super::{ModelError, Quiver};

    /// Affine `A_ℓ`: a cycle on `ℓ+1` vertices (two parallel arrows for `ℓ = 1`).
    pub fn affine_a(l: usize) -> Result<Quiver, ModelError> {
        if l == 0 {
            return Err(ModelError::UnknownDiagram("A0".into()));
        }
        if l == 1 {
            return Quiver::new(2, vec![(0, 1), (0, 1)]);
        }
        let mut arrows: Vec<_> = (0..l).map(|i| (i, i + 1)).collect();
        arrows.push((0, l));
        Quiver::new(l + 1, arrows)
    }

    /// Affine `D_ℓ`, `ℓ ≥ 4`: leaves 0, 1 on vertex 2, a chain 2..ℓ−2, leaves ℓ−1, ℓ on ℓ−2.
    pub fn affine_d(l: usize) -> Result<Quiver, ModelError> {
        if l < 4 {
            return Err(ModelError::UnknownDiagram(format!("D{l}")));
        }
        let mut arrows = vec![(0, 2), (1, 2)];
        arrows.extend((2..l - 2).map(|i| (i, i + 1)));
        arrows.push((l - 2, l - 1));
        arrows.push((l - 2, l));
        Quiver::new(l + 1, arrows)
    }

    /// Affine `E_6`, `E_7`, `E_8`.
    pub fn affine_e(l: usize) -> Result<Quiver, ModelError> {
        match l {
            6 => Quiver::new(7, vec![(0, 1), (1, 6), (2, 3), (3, 6), (4, 5), (5, 6)]),
            7 => {
                let mut arrows: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
                arrows.push((3, 7));
                Quiver::new(8, arrows)
            }
            8 => {
                let mut arrows: Vec<_> = (0..7).map(|i| (i, i + 1)).collect();
                arrows.push((5, 8));
                Quiver::new(9, arrows)
            }
            _ => Err(ModelError::UnknownDiagram(format!("E{l}"))),
        }
    }

    /// Finite `A_n` path `0 → 1 → … → n−1`.
    pub fn finite_a(n: usize) -> Result<Quiver, ModelError> {
        Quiver::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect())
    }

    /// Affine diagram by name: `A1`…, `D4`…, `E6`, `E7`, `E8`.
    pub fn by_name(name: &str) -> Result<Quiver, ModelError> {
        let unknown = || ModelError::UnknownDiagram(name.to_string());
        let (kind, rank) = name.split_at(1.min(name.len()));
        let l: usize = rank.parse().map_err(|_| unknown())?;
        match kind {
            "A" => affine_a(l),
            "D" => affine_d(l),
            "E" => affine_e(l),
            _ => Err(unknown()),
        }
    }
}

/// `q(v) = v·v − Σ_α v_out v_in`.
pub fn tits_form(q: &Quiver, v: &[i64]) -> i64 {
    let vv: i64 = v.iter().map(|x| x * x).sum();
    vv - q.arrows.iter().map(|&(o, i)| v[o] * v[i]).sum::<i64>()
}

/// `p(v) = 1 + Σ_α v_out v_in − v·v`.
pub fn p_of_v(q: &Quiver, v: &[i64]) -> i64 {
    1 - tits_form(q, v)
}

/// `v·v − 1 + 2 p(v)`, the fiber dimension for which the moment map is flat.
pub fn flatness_dimension_target(q: &Quiver, v: &[i64]) -> i64 {
    v.iter().map(|x| x * x).sum::<i64>() - 1 + 2 * p_of_v(q, v)
}

/// Nonzero vectors `0 ≤ α ≤ bound` with connected support and `q(α) ≤ 1`,
/// sorted by total then reverse-lexicographically, followed by their negatives
/// in the same order.
pub fn enumerate_bounded_roots(q: &Quiver, bound: &[u32]) -> Vec<Vec<i64>> {
    let n = q.n_vertices;
    let mut pos = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if cur.iter().any(|&x| x != 0) && q.support_connected(&cur) && tits_form(q, &cur) <= 1 {
            pos.push(cur.clone());
        }
        let mut k = 0;
        while k < n && cur[k] == bound[k] as i64 {
            cur[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        cur[k] += 1;
    }
    pos.sort_by_key(|v| (v.iter().sum::<i64>(), Reverse(v.clone())));
    let neg: Vec<Vec<i64>> = pos.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    pos.extend(neg);
    pos
}

/// Primitive positive generator of the radical of the symmetrized Tits form.
pub fn minimal_imaginary_root(q: &Quiver) -> Result<Vec<i64>, ModelError> {
    let n = q.n_vertices;
    let rows: Vec<Vec<Rational>> = q.cartan_matrix().iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let kernel = kernel_basis(&rows, n);
    if kernel.len() != 1 {
        return Err(ModelError::NotAffine(format!("radical has dimension {}", kernel.len())));
    }
    let mut v = kernel.into_iter().next().unwrap_or_default();
    if v.iter().any(|x| x.is_zero()) {
        return Err(ModelError::NotAffine("radical generator has a zero entry".into()));
    }
    if v[0].is_negative() {
        v = v.into_iter().map(|x| -x).collect();
    }
    if v.iter().any(|x| x.is_negative()) {
        return Err(ModelError::NotAffine("radical generator is not positive".into()));
    }
    let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
    ints.iter()
        .map(|x| {
            use num_traits::ToPrimitive;
            (x / &g).to_i64().ok_or_else(|| ModelError::NotAffine("entry too large".into()))
        })
        .collect()
}

fn dot(theta: &[Rational], v: &[i64]) -> Rational {
    theta.iter().zip(v).fold(Rational::zero(), |acc, (t, x)| acc + t * int(*x))
}

/// `θ·δ = 0` and `θ·α ≠ 0` for every root `α ≤ 1` other than `±δ`.
pub fn check_stability_preprojective(q: &Quiver, delta: &[i64], theta: &[Rational]) -> Result<(), ModelError> {
    q.check_len("theta", theta.len())?;
    let td = dot(theta, delta);
    if !td.is_zero() {
        return Err(ModelError::StabilityViolation {
            witness: delta.to_vec(),
            reason: format!("theta . delta = {}", fmt_rational(&td)),
        });
    }
    let neg_delta: Vec<i64> = delta.iter().map(|x| -x).collect();
    for root in enumerate_bounded_roots(q, &vec![1; q.n_vertices]) {
        if root == delta || root == neg_delta {
            continue;
        }
        if dot(theta, &root).is_zero() {
            return Err(ModelError::StabilityViolation { witness: root, reason: "theta . alpha = 0".into() });
        }
    }
    Ok(())
}

/// `θ·α ≠ 0` for every root with entries bounded by `n` (δ included).
pub fn check_stability_cm(q: &Quiver, n: u32, theta: &[Rational]) -> Result<(), ModelError> {
    q.check_len("theta", theta.len())?;
    for root in enumerate_bounded_roots(q, &vec![n; q.n_vertices]) {
        if dot(theta, &root).is_zero() {
            return Err(ModelError::StabilityViolation { witness: root, reason: "theta . alpha = 0".into() });
        }
    }
    Ok(())
}

/// `∂_i = −δ_i + Σ_{out(α)=i} δ_{in(α)}`.
pub fn shift_vector(q: &Quiver, delta: &[i64]) -> Vec<i64> {
    let mut s: Vec<i64> = delta.iter().map(|x| -x).collect();
    for &(o, i) in &q.arrows {
        s[o] += delta[i];
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetupKind {
    Quiver,
    Preprojective,
    CalogeroMoser,
    Hypertoric,
}

impl SetupKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SetupKind::Quiver => "quiver",
            SetupKind::Preprojective => "preprojective",
            SetupKind::CalogeroMoser => "calogero-moser",
            SetupKind::Hypertoric => "hypertoric",
        }
    }
}

/// Where a setup came from, with an echo of its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub kind: SetupKind,
    pub echo: BTreeMap<String, String>,
}

/// Assumptions of the reduction that no finite check here establishes.
pub const UNVERIFIED_ASSUMPTIONS: &[&str] =
    &["free action on the stable locus", "normality of the affine quotient", "nonempty zero fiber"];

/// A fully assembled reduction instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSetup {
    pub n_vars: usize,
    pub variable_labels: Vec<String>,
    pub lie: LieData,
    pub classical_moments: Vec<PolyElement>,
    pub quantized_moments: Vec<WeylElement>,
    pub character: Character,
    /// Torus weight of each coordinate `x_j` (`∂_j` has the negative weight).
    pub variable_weights: Vec<Vec<i64>>,
    pub provenance: Provenance,
    /// `v·v − 1 + 2p(v)` for quiver setups.
    pub flatness_target: Option<i64>,
    /// Parameter shift for preprojective setups; report metadata only.
    pub shift_vector: Option<Vec<i64>>,
    /// Sizes of the `GL` factors of the group (tori count as several 1's).
    pub group_blocks: Vec<usize>,
}

impl ReductionSetup {
    pub fn g_dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn weight_rank(&self) -> usize {
        self.variable_weights.first().map_or(0, |w| w.len())
    }

    pub fn is_torus(&self) -> bool {
        self.lie.is_abelian() && self.group_blocks.iter().all(|&b| b == 1)
    }

    /// `μ_𝔇(A_i) + c(A_i)`.
    pub fn shifted_moment(&self, i: usize) -> WeylElement {
        &self.quantized_moments[i] + &WeylElement::constant(self.n_vars, self.character.values[i].clone())
    }

    /// Checks symbols, the bracket relation, Jacobi and the character.
    pub fn validate(&self) -> Result<(), ModelError> {
        jacobi_check(&self.lie).map_err(|v| ModelError::Jacobi(format!("{v:?}")))?;
        validate_character(&self.lie, &self.character).map_err(|v| ModelError::Character(format!("{v:?}")))?;
        for (i, (mu, cl)) in self.quantized_moments.iter().zip(&self.classical_moments).enumerate() {
            if mu.principal_symbol() != *cl {
                return Err(ModelError::SymbolMismatch { index: i });
            }
        }
        let d = self.g_dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.quantized_moments[i].commutator(&self.quantized_moments[j]).expect("same ring");
                let mut rhs = WeylElement::zero(self.n_vars);
                for (k, c) in self.lie.bracket(i, j) {
                    rhs = &rhs + &self.quantized_moments[*k].scale(c);
                }
                if lhs != rhs {
                    return Err(ModelError::BracketMismatch { i, j });
                }
            }
        }
        Ok(())
    }
}

fn render_vec<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn render_rationals(v: &[Rational]) -> String {
    format!("[{}]", v.iter().map(fmt_rational).collect::<Vec<_>>().join(", "))
}

/// General quiver setup.
///
/// Variables `x^α_{rs}` (row `r` of `V_in`, column `s` of `V_out`) in arrow
/// order. The quantized moment of the matrix unit `A^{(i)}_{pq}` is
/// `Σ_{out(α)=i} Σ_j x^α_{jp} ∂^α_{jq} − Σ_{in(α)=i} Σ_j x^α_{qj} ∂^α_{pj}`,
/// and `c(A^{(i)}_{pq}) = c_i δ_pq` on the retained blocks.
pub fn build_quiver_setup(
    q: &Quiver,
    v: &[i64],
    theta: &[Rational],
    c_pre: &[Rational],
    distinguished: usize,
) -> Result<ReductionSetup, ModelError> {
    q.check_len("dimension vector", v.len())?;
    q.check_len("theta", theta.len())?;
    q.check_len("c", c_pre.len())?;
    if v.iter().all(|&x| x == 0) || v.iter().any(|&x| x < 0) {
        return Err(ModelError::ZeroDimensionVector);
    }
    let tv = dot(theta, v);
    if !tv.is_zero() {
        return Err(ModelError::ThetaNotOrthogonal(fmt_rational(&tv)));
    }
    let cv = dot(c_pre, v);
    if !cv.is_zero() {
        return Err(ModelError::CharacterNotOrthogonal(fmt_rational(&cv)));
    }
    let sizes: Vec<usize> = v.iter().map(|&x| x as usize).collect();
    let lie = gl_sum_lie(&sizes, distinguished)?;

    let mut var_index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut labels = Vec::new();
    for (a, &(o, i)) in q.arrows.iter().enumerate() {
        for r in 0..sizes[i] {
            for s in 0..sizes[o] {
                var_index.insert((a, r, s), labels.len());
                labels.push(format!("x[{a}]_{}{}", r + 1, s + 1));
            }
        }
    }
    let n_vars = labels.len();

    // torus coordinates: one per retained diagonal unit
    let mut torus_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for label in lie.labels() {
        if let BasisLabel::MatrixUnit { vertex, p, q: qq } = label {
            if p == qq {
                let k = torus_index.len();
                torus_index.insert((*vertex, *p), k);
            }
        }
    }
    let rank = torus_index.len();
    let mut weights = vec![vec![0i64; rank]; n_vars];
    for (&(a, r, s), &j) in &var_index {
        let (o, i) = q.arrows[a];
        if let Some(&k) = torus_index.get(&(o, s)) {
            weights[j][k] += 1;
        }
        if let Some(&k) = torus_index.get(&(i, r)) {
            weights[j][k] -= 1;
        }
    }

    let x_d = |a: usize, r1: usize, s1: usize, r2: usize, s2: usize| {
        WeylElement::x_d(n_vars, var_index[&(a, r1, s1)], var_index[&(a, r2, s2)])
    };
    let mut quantized = Vec::with_capacity(lie.dim());
    for label in lie.labels() {
        let BasisLabel::MatrixUnit { vertex, p, q: qq } = *label else {
            unreachable!("gl_sum_lie produces matrix units")
        };
        let mut mu = WeylElement::zero(n_vars);
        for (a, &(o, i)) in q.arrows.iter().enumerate() {
            if o == vertex {
                for j in 0..sizes[i] {
                    mu = &mu + &x_d(a, j, p, j, qq);
                }
            }
            if i == vertex {
                for j in 0..sizes[o] {
                    mu = &mu - &x_d(a, qq, j, p, j);
                }
            }
        }
        quantized.push(mu);
    }
    let classical = quantized.iter().map(|m| m.principal_symbol()).collect();
    let character = Character::from_traces(&lie, c_pre);
    let group_blocks = lie.blocks().map(|b| b.iter().map(|b| b.size).collect()).unwrap_or_default();
    let mut echo = BTreeMap::new();
    echo.insert("vertices".into(), q.n_vertices.to_string());
    echo.insert("arrows".into(), render_vec(&q.arrows.iter().map(|(o, i)| format!("[{o}, {i}]")).collect::<Vec<_>>()));
    echo.insert("dims".into(), render_vec(v));
    echo.insert("theta".into(), render_rationals(theta));
    echo.insert("c".into(), render_rationals(c_pre));
    echo.insert("distinguished".into(), distinguished.to_string());
    Ok(ReductionSetup {
        n_vars,
        variable_labels: labels,
        lie,
        classical_moments: classical,
        quantized_moments: quantized,
        character,
        variable_weights: weights,
        provenance: Provenance { kind: SetupKind::Quiver, echo },
        flatness_target: Some(flatness_dimension_target(q, v)),
        shift_vector: None,
        group_blocks,
    })
}

/// Deformed preprojective setup: `v = δ`, distinguished vertex the first with `δ_i = 1`.
pub fn build_preprojective_setup(
    q: &Quiver,
    theta: &[Rational],
    c_pre: &[Rational],
) -> Result<ReductionSetup, ModelError> {
    let delta = minimal_imaginary_root(q)?;
    check_stability_preprojective(q, &delta, theta)?;
    let dist = delta.iter().position(|&x| x == 1).ok_or_else(|| ModelError::NotAffine("no vertex with delta = 1".into()))?;
    let mut s = build_quiver_setup(q, &delta, theta, c_pre, dist)?;
    s.provenance.kind = SetupKind::Preprojective;
    s.shift_vector = Some(shift_vector(q, &delta));
    Ok(s)
}

/// Calogero-Moser setup on the base quiver `q` extended by a vertex `∞`
/// (appended last) with one arrow `∞ → 0`.
///
/// `theta` and `c_base` are given on the base vertices; the `∞` entries are
/// fixed by `θ·v = 0` and `c·v = 0` with `v = nδ + ε_∞`.
pub fn build_cm_setup(
    q: &Quiver,
    n: u32,
    theta: &[Rational],
    c_base: &[Rational],
) -> Result<ReductionSetup, ModelError> {
    if n == 0 {
        return Err(ModelError::ZeroDimensionVector);
    }
    q.check_len("theta", theta.len())?;
    q.check_len("c", c_base.len())?;
    let delta = minimal_imaginary_root(q)?;
    check_stability_cm(q, n, theta)?;
    let inf = q.n_vertices;
    let mut arrows = q.arrows.clone();
    arrows.push((inf, 0));
    let aug = Quiver::new(inf + 1, arrows)?;
    let mut v: Vec<i64> = delta.iter().map(|d| d * n as i64).collect();
    v.push(1);
    let extend = |x: &[Rational]| {
        let mut out = x.to_vec();
        out.push(-dot(x, &v[..inf]));
        out
    };
    let theta_full = extend(theta);
    let c_full = extend(c_base);
    let mut s = build_quiver_setup(&aug, &v, &theta_full, &c_full, inf)?;
    s.provenance.kind = SetupKind::CalogeroMoser;
    s.provenance.echo.insert("n".into(), n.to_string());
    Ok(s)
}

/// Hypertoric input: a `d × n` integer matrix with stability and character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypertoricData {
    pub m: Vec<Vec<i64>>,
    pub theta: Vec<Rational>,
    pub c: Vec<Rational>,
}

impl HypertoricData {
    pub fn d(&self) -> usize {
        self.m.len()
    }

    pub fn n(&self) -> usize {
        self.m.first().map_or(0, |r| r.len())
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        self.m.iter().map(|r| int(r[j])).collect()
    }

    /// Full row rank and every maximal minor in `{−1, 0, 1}`.
    pub fn check_unimodular(&self) -> Result<(), ModelError> {
        let (d, n) = (self.d(), self.n());
        if d == 0 || self.m.iter().any(|r| r.len() != n) {
            return Err(ModelError::RaggedMatrix);
        }
        let rows: Vec<Vec<Rational>> = self.m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let rank = dense_rank(&rows);
        if rank < d {
            return Err(ModelError::RankDeficient { rank, rows: d });
        }
        for cols in subsets_of_size(n, d) {
            let sub: Vec<Vec<Rational>> = (0..d).map(|i| cols.iter().map(|&j| int(self.m[i][j])).collect()).collect();
            let det = determinant(&sub);
            if det.abs() > Rational::one() {
                return Err(ModelError::NotUnimodular { columns: cols, value: fmt_rational(&det) });
            }
        }
        Ok(())
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fails with the first subset `J` (by size, then lexicographically; 0-based)
/// whose columns span a hyperplane containing `θ`.
pub fn check_hypertoric_smoothness(h: &HypertoricData) -> Result<(), Vec<usize>> {
    let (d, n) = (h.d(), h.n());
    for k in 0..=n {
        for j in subsets_of_size(n, k) {
            let cols: Vec<Vec<Rational>> = j.iter().map(|&c| h.column(c)).collect();
            if dense_rank(&cols) + 1 != d {
                continue;
            }
            let mut with_theta = cols.clone();
            with_theta.push(h.theta.clone());
            if dense_rank(&with_theta) + 1 == d {
                return Err(j);
            }
        }
    }
    Ok(())
}

/// Hypertoric setup: `μ_𝔇(A_i) = Σ_j μ_ij x_j ∂_j`, weights the columns of `M`.
pub fn build_hypertoric_setup(h: &HypertoricData) -> Result<ReductionSetup, ModelError> {
    h.check_unimodular()?;
    let (d, n) = (h.d(), h.n());
    if h.theta.len() != d {
        return Err(ModelError::LengthMismatch { what: "theta", expected: d, got: h.theta.len() });
    }
    if h.c.len() != d {
        return Err(ModelError::LengthMismatch { what: "c", expected: d, got: h.c.len() });
    }
    let lie = torus_lie(d)?;
    let quantized: Vec<WeylElement> = h
        .m
        .iter()
        .map(|row| {
            WeylElement::from_terms(
                n,
                row.iter().enumerate().map(|(j, &x)| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    (WeylMonomial::new(e.clone(), e), int(x))
                }),
            )
        })
        .collect();
    let classical = quantized.iter().map(|m| m.principal_symbol()).collect();
    let weights = (0..n).map(|j| h.m.iter().map(|r| r[j]).collect()).collect();
    let mut echo = BTreeMap::new();
    echo.insert(
        "matrix".into(),
        render_vec(&h.m.iter().map(|r| render_vec(r)).collect::<Vec<_>>()),
    );
    echo.insert("theta".into(), render_rationals(&h.theta));
    echo.insert("c".into(), render_rationals(&h.c));
    Ok(ReductionSetup {
        n_vars: n,
        variable_labels: (1..=n).map(|j| format!("x{j}")).collect(),
        lie,
        classical_moments: classical,
        quantized_moments: quantized,
        character: Character::new(h.c.clone()),
        variable_weights: weights,
        provenance: Provenance { kind: SetupKind::Hypertoric, echo },
        flatness_target: None,
        shift_vector: None,
        group_blocks: vec![1; d],
    })
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;
    use crate::exact::frac;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn p_of_v_examples() {
        let a1 = affine_a(1).unwrap();
        assert_eq!(p_of_v(&a1, &[1, 1]), 1);
        let single = Quiver::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(p_of_v(&single, &[1, 1]), 0);
        assert_eq!(p_of_v(&a1, &[1, 0]), 0);
    }

    #[test]
    fn roots() {
        let a1 = affine_a(1).unwrap();
        let r = enumerate_bounded_roots(&a1, &[1, 1]);
        assert_eq!(r, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 0], vec![0, -1], vec![-1, -1]]);
        assert_eq!(tits_form(&a1, &[1, 1]), 0);
        let fa2 = finite_a(2).unwrap();
        let r = enumerate_bounded_roots(&fa2, &[1, 1]);
        assert_eq!(&r[..3], &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(r[..3].iter().all(|v| tits_form(&fa2, v) == 1));
    }

    #[test]
    fn imaginary_roots() {
        assert_eq!(minimal_imaginary_root(&affine_a(3).unwrap()).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(minimal_imaginary_root(&affine_d(4).unwrap()).unwrap(), vec![1, 1, 2, 1, 1]);
        assert_eq!(minimal_imaginary_root(&affine_e(6).unwrap()).unwrap(), vec![1, 2, 1, 2, 1, 2, 3]);
        assert_eq!(minimal_imaginary_root(&affine_e(7).unwrap()).unwrap(), vec![1, 2, 3, 4, 3, 2, 1, 2]);
        assert_eq!(minimal_imaginary_root(&affine_e(8).unwrap()).unwrap(), vec![1, 2, 3, 4, 5, 6, 4, 2, 3]);
        assert!(matches!(minimal_imaginary_root(&finite_a(2).unwrap()), Err(ModelError::NotAffine(_))));
        for name in ["A1", "A2", "A5", "D4", "D6", "E6", "E7", "E8"] {
            let qv = presets::by_name(name).unwrap();
            let delta = minimal_imaginary_root(&qv).unwrap();
            assert_eq!(p_of_v(&qv, &delta), 1, "{name}");
        }
    }

    #[test]
    fn preprojective_stability() {
        let a1 = affine_a(1).unwrap();
        assert!(check_stability_preprojective(&a1, &[1, 1], &q(&[1, -1])).is_ok());
        match check_stability_preprojective(&a1, &[1, 1], &q(&[0, 0])) {
            Err(ModelError::StabilityViolation { witness, .. }) => assert_eq!(witness, vec![1, 0]),
            other => panic!("{other:?}"),
        }
        assert!(check_stability_preprojective(&a1, &[1, 1], &q(&[1, 1])).is_err());
    }

    #[test]
    fn cm_stability() {
        let a1 = affine_a(1).unwrap();
        assert!(check_stability_cm(&a1, 1, &q(&[1, 3])).is_ok());
        match check_stability_cm(&a1, 1, &q(&[1, -1])) {
            Err(ModelError::StabilityViolation { witness, .. }) => assert_eq!(witness, vec![1, 1]),
            other => panic!("{other:?}"),
        }
        match check_stability_cm(&a1, 1, &q(&[0, 2])) {
            Err(ModelError::StabilityViolation { witness, .. }) => assert_eq!(witness, vec![1, 0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn affine_a1_quiver_setup() {
        let a1 = affine_a(1).unwrap();
        let s = build_quiver_setup(&a1, &[1, 1], &q(&[1, -1]), &[frac(-1, 3), frac(1, 3)], 0).unwrap();
        assert_eq!(s.g_dim(), 1);
        assert_eq!(s.n_vars, 2);
        let want = &WeylElement::x_d(2, 0, 0) + &WeylElement::x_d(2, 1, 1);
        assert_eq!(s.quantized_moments[0], want.scale(&int(-1)));
        assert_eq!(s.variable_weights, vec![vec![-1], vec![-1]]);
        assert_eq!(s.flatness_target, Some(3));
        s.validate().unwrap();
    }

    #[test]
    fn d4_setup() {
        let d4 = affine_d(4).unwrap();
        let theta = vec![int(1), int(2), frac(-15, 2), int(4), int(8)];
        let c = [frac(1, 3), frac(1, 5), frac(-1, 2), frac(1, 7), frac(1, 11)];
        let c0 = -(&c[1] + &c[2] * int(2) + &c[3] + &c[4]);
        let c = vec![c0, c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()];
        let s = build_preprojective_setup(&d4, &theta, &c).unwrap();
        assert_eq!(s.g_dim(), 7);
        assert_eq!(s.n_vars, 8);
        assert_eq!(s.flatness_target, Some(9));
        assert!(s.quantized_moments.iter().all(|m| m.bernstein_degree() == crate::algebra::Degree::Finite(2)));
        s.validate().unwrap();
        assert_eq!(s.shift_vector, Some(vec![1, 1, 0, -1, -1]));
    }

    #[test]
    fn cm_setups() {
        let a1 = affine_a(1).unwrap();
        let s = build_cm_setup(&a1, 1, &q(&[1, 3]), &[frac(1, 3), frac(2, 7)]).unwrap();
        assert_eq!(s.n_vars, 3);
        assert_eq!(s.g_dim(), 2);
        assert!(s.is_torus());
        s.validate().unwrap();
        let s2 = build_cm_setup(&a1, 2, &q(&[1, 3]), &[frac(1, 3), frac(2, 7)]).unwrap();
        assert_eq!(s2.group_blocks, vec![2, 2]);
        assert!(!s2.is_torus());
        s2.validate().unwrap();
        assert_eq!(build_cm_setup(&a1, 0, &q(&[1, 3]), &q(&[0, 0])), Err(ModelError::ZeroDimensionVector));
    }

    #[test]
    fn hypertoric() {
        let h = HypertoricData { m: vec![vec![1, 1]], theta: q(&[1]), c: vec![frac(1, 3)] };
        let s = build_hypertoric_setup(&h).unwrap();
        assert_eq!(s.quantized_moments[0], &WeylElement::x_d(2, 0, 0) + &WeylElement::x_d(2, 1, 1));
        s.validate().unwrap();
        let bad = HypertoricData { m: vec![vec![2, 1]], theta: q(&[1]), c: q(&[0]) };
        assert!(matches!(build_hypertoric_setup(&bad), Err(ModelError::NotUnimodular { .. })));
        let deficient = HypertoricData { m: vec![vec![1, 1], vec![1, 1]], theta: q(&[1, 0]), c: q(&[0, 0]) };
        assert!(matches!(build_hypertoric_setup(&deficient), Err(ModelError::RankDeficient { .. })));
    }

    #[test]
    fn smoothness() {
        let h = HypertoricData { m: vec![vec![1, 1]], theta: q(&[1]), c: q(&[0]) };
        assert!(check_hypertoric_smoothness(&h).is_ok());
        let h0 = HypertoricData { theta: q(&[0]), ..h };
        assert_eq!(check_hypertoric_smoothness(&h0), Err(vec![]));
        let m = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let bad = HypertoricData { m: m.clone(), theta: q(&[1, 0]), c: q(&[0, 0]) };
        assert_eq!(check_hypertoric_smoothness(&bad), Err(vec![0]));
        let good = HypertoricData { m, theta: vec![int(1), frac(1, 2)], c: q(&[0, 0]) };
        assert!(check_hypertoric_smoothness(&good).is_ok());
    }

    #[test]
    fn flatness_targets() {
        let a1 = affine_a(1).unwrap();
        assert_eq!(flatness_dimension_target(&a1, &[1, 1]), 3);
        let d4 = affine_d(4).unwrap();
        assert_eq!(flatness_dimension_target(&d4, &[1, 1, 2, 1, 1]), 9);
        assert_eq!(flatness_dimension_target(&a1, &[1, 0]), 0);
    }
}
