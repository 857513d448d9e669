//! Structure constants for tori and for sums of `gl` blocks.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{fmt_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("torus dimension must be at least 1")]
    EmptyTorus,
    #[error("distinguished vertex {vertex} must carry a block of size 1 (found {size})")]
    NoUnitBlock { vertex: usize, size: usize },
}

/// Label of a basis element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BasisLabel {
    Abstract(usize),
    /// Matrix unit `E_{pq}` in the block of `vertex` (0-based `p`, `q`).
    MatrixUnit { vertex: usize, p: usize, q: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Abstract(i) => write!(f, "A{}", i + 1),
            BasisLabel::MatrixUnit { vertex, p, q } => write!(f, "A({vertex})_{}{}", p + 1, q + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertex: usize,
    pub size: usize,
    /// Index of `E_{11}` of this block in the basis.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieData {
    dim: usize,
    labels: Vec<BasisLabel>,
    /// `(i, j) ↦ [(k, χ^k_ij)]`, only nonzero brackets stored.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    blocks: Option<Vec<Block>>,
}

impl LieData {
    /// Builds from an explicit structure-constant table `(i, j, k) ↦ χ^k_ij`.
    pub fn from_constants(
        labels: Vec<BasisLabel>,
        constants: impl IntoIterator<Item = ((usize, usize, usize), Rational)>,
        blocks: Option<Vec<Block>>,
    ) -> Self {
        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for ((i, j, k), c) in constants {
            let slot = brackets.entry((i, j)).or_default().entry(k).or_insert_with(Rational::zero);
            *slot += c;
        }
        let brackets = brackets
            .into_iter()
            .map(|(ij, row)| (ij, row.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, row)| !row.is_empty())
            .collect();
        Self { dim: labels.len(), labels, brackets, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn blocks(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `[A_i, A_j] = Σ_k χ^k_ij A_k`.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        self.brackets.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.bracket(i, j).iter().find(|(kk, _)| *kk == k).map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    /// All nonzero `((i, j, k), χ^k_ij)`.
    pub fn constants(&self) -> impl Iterator<Item = ((usize, usize, usize), &Rational)> {
        self.brackets.iter().flat_map(|(&(i, j), row)| row.iter().map(move |(k, c)| ((i, j, *k), c)))
    }

    /// Returns a copy with one structure constant replaced; used for negative controls.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut table: Vec<_> = self.constants().map(|(key, c)| (key, c.clone())).filter(|(key, _)| *key != (i, j, k)).collect();
        table.push(((i, j, k), value));
        Self::from_constants(self.labels.clone(), table, self.blocks.clone())
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vectors(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (&(i, j), row) in &self.brackets {
            if a[i].is_zero() || b[j].is_zero() {
                continue;
            }
            let ab = &a[i] * &b[j];
            for (k, c) in row {
                out[*k] += &ab * c;
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = int(1);
        v
    }
}

/// Abelian algebra of dimension `d`.
pub fn torus_lie(d: usize) -> Result<LieData, LieError> {
    if d == 0 {
        return Err(LieError::EmptyTorus);
    }
    Ok(LieData::from_constants((0..d).map(BasisLabel::Abstract).collect(), [], None))
}

/// `⊕_i gl(n_i)` over all blocks except the distinguished one, which must
/// have size 1. Blocks of size 0 are skipped.
///
/// Basis: matrix units ordered by vertex, then row, then column, with
/// `[E_pq, E_rs] = δ_qr E_ps − δ_sp E_rq`.
pub fn gl_sum_lie(block_sizes: &[usize], distinguished: usize) -> Result<LieData, LieError> {
    let size = block_sizes.get(distinguished).copied().unwrap_or(0);
    if size != 1 {
        return Err(LieError::NoUnitBlock { vertex: distinguished, size });
    }
    let mut labels = Vec::new();
    let mut blocks = Vec::new();
    for (vertex, &n) in block_sizes.iter().enumerate() {
        if vertex == distinguished || n == 0 {
            continue;
        }
        blocks.push(Block { vertex, size: n, offset: labels.len() });
        for p in 0..n {
            for q in 0..n {
                labels.push(BasisLabel::MatrixUnit { vertex, p, q });
            }
        }
    }
    let mut constants = Vec::new();
    for b in &blocks {
        let n = b.size;
        let idx = |p: usize, q: usize| b.offset + p * n + q;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        if q == r {
                            constants.push(((idx(p, q), idx(r, s), idx(p, s)), int(1)));
                        }
                        if s == p {
                            constants.push(((idx(p, q), idx(r, s), idx(r, q)), int(-1)));
                        }
                    }
                }
            }
        }
    }
    Ok(LieData::from_constants(labels, constants, Some(blocks)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiViolation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

/// Exhaustive check of antisymmetry and the Jacobi identity; reports the
/// first violating pair or triple.
pub fn jacobi_check(l: &LieData) -> Result<(), JacobiViolation> {
    let n = l.dim();
    for i in 0..n {
        for j in i..n {
            let a = l.bracket_vectors(&l.unit(i), &l.unit(j));
            let b = l.bracket_vectors(&l.unit(j), &l.unit(i));
            if a.iter().zip(&b).any(|(x, y)| !(x + y).is_zero()) {
                return Err(JacobiViolation::Antisymmetry { i, j });
            }
        }
    }
    let units: Vec<_> = (0..n).map(|i| l.unit(i)).collect();
    let pair: Vec<Vec<Vec<Rational>>> =
        (0..n).map(|i| (0..n).map(|j| l.bracket_vectors(&units[i], &units[j])).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let t1 = l.bracket_vectors(&pair[i][j], &units[k]);
                let t2 = l.bracket_vectors(&pair[j][k], &units[i]);
                let t3 = l.bracket_vectors(&pair[k][i], &units[j]);
                if (0..n).any(|m| !(&t1[m] + &t2[m] + &t3[m]).is_zero()) {
                    return Err(JacobiViolation::Jacobi { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Values of a linear functional on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Rational>,
}

impl Character {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    /// `c = Σ c_i Tr_i` over the retained blocks, from per-vertex values.
    pub fn from_traces(l: &LieData, per_vertex: &[Rational]) -> Self {
        let mut values = vec![Rational::zero(); l.dim()];
        for (idx, label) in l.labels().iter().enumerate() {
            if let BasisLabel::MatrixUnit { vertex, p, q } = label {
                if p == q {
                    values[idx] = per_vertex[*vertex].clone();
                }
            }
        }
        Self { values }
    }

    pub fn render(&self) -> Vec<String> {
        self.values.iter().map(fmt_rational).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterViolation {
    Length { expected: usize, got: usize },
    /// `Σ_k χ^k_ij c_k ≠ 0`.
    Bracket { i: usize, j: usize },
    /// Not of the form `Σ c_i Tr` on a block.
    NotTrace { vertex: usize },
}

/// Checks that `c` kills all brackets, and for block data that it is a sum of
/// block traces.
pub fn validate_character(l: &LieData, c: &Character) -> Result<(), CharacterViolation> {
    if c.values.len() != l.dim() {
        return Err(CharacterViolation::Length { expected: l.dim(), got: c.values.len() });
    }
    for (&(i, j), row) in &l.brackets {
        let s = row.iter().fold(Rational::zero(), |acc, (k, x)| acc + x * &c.values[*k]);
        if !s.is_zero() {
            return Err(CharacterViolation::Bracket { i, j });
        }
    }
    if let Some(blocks) = l.blocks() {
        for b in blocks {
            let diag = &c.values[b.offset];
            for p in 0..b.size {
                for q in 0..b.size {
                    let v = &c.values[b.offset + p * b.size + q];
                    let ok = if p == q { v == diag } else { v.is_zero() };
                    if !ok {
                        return Err(CharacterViolation::NotTrace { vertex: b.vertex });
                    }
                }
            }
        }
    }
    Ok(())
}
