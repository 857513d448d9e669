//! Exact rational arithmetic, sparse rank computations and truncated
//! generating series.
//!
//! Everything in the crate is computed over ℚ. Matrices are stored row-major
//! as sorted sparse vectors; rank is computed by inserting rows one at a time
//! into an [`Echelon`] basis, which also gives rank profiles of row prefixes
//! for free.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("denominator span is not contained in numerator span (rank {numerator} vs combined {combined})")]
    ContainmentViolation { numerator: usize, combined: usize },
    #[error("span has {got} columns, expected ambient dimension {expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`; panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q`. Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::ParseRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a += s * b` on sparse vectors.
pub fn axpy(a: &SparseVec, s: &Rational, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + s * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row-echelon basis built by incremental insertion.
///
/// Each stored row has leading coefficient 1; a new row is reduced against
/// existing pivots on its leading entry until it either vanishes or opens a
/// new pivot column. Insertion order fully determines the result.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` to a vector whose leading column is not a pivot
    /// (or to zero).
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return row;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &(-coeff), p),
                None => return row,
            }
        }
    }

    /// Inserts a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((lead, coeff)) => {
                let lead = *lead;
                let inv = coeff.recip();
                let row = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                self.pivots.insert(lead, row);
                true
            }
        }
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn contains(&self, row: &SparseVec) -> bool {
        self.reduce(row.clone()).is_empty()
    }
}

/// Sparse matrix over ℚ with no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        Self { nrows: n, ncols: n, data }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, entries: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            if r >= nrows || c >= ncols {
                return Err(ExactError::OutOfBounds { row: r, col: c, rows: nrows, cols: ncols });
            }
            *rows[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let data = rows
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(Self { nrows, ncols, data })
    }

    /// Builds from row vectors given as sparse vectors (must be sorted, zero free).
    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Result<Self, ExactError> {
        for (r, row) in rows.iter().enumerate() {
            if let Some((c, _)) = row.iter().find(|(c, _)| *c >= ncols) {
                return Err(ExactError::OutOfBounds { row: r, col: *c, rows: rows.len(), cols: ncols });
            }
        }
        let data: Vec<SparseVec> = rows
            .into_iter()
            .map(|row| {
                let mut m = BTreeMap::new();
                for (c, v) in row {
                    *m.entry(c).or_insert_with(Rational::zero) += v;
                }
                m.into_iter().filter(|(_, v): &(usize, Rational)| !v.is_zero()).collect()
            })
            .collect();
        Ok(Self { nrows: data.len(), ncols, data })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, int(*v))).collect())
            .collect();
        Self { nrows: rows.len(), ncols, data }
    }

    pub fn rows(&self) -> usize {
        self.nrows
    }

    pub fn cols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r]
            .binary_search_by_key(&c, |(k, _)| *k)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Triplets in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.ncols];
        for (r, c, v) in self.triplets() {
            data[c].push((r, v.clone()));
        }
        Self { nrows: self.ncols, ncols: self.nrows, data }
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, ExactError> {
        if self.ncols != other.nrows {
            return Err(ExactError::AmbientMismatch { expected: self.ncols, got: other.nrows });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(Self { nrows: self.nrows, ncols: other.ncols, data })
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix, ExactError> {
        if self.ncols != other.ncols {
            return Err(ExactError::AmbientMismatch { expected: self.ncols, got: other.ncols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self { nrows: data.len(), ncols: self.ncols, data })
    }

    /// Plain-text triplet dump: a header `%% rows cols nnz` followed by
    /// one `row col value` line per stored entry (0-based indices).
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("%% {} {} {}\n", self.nrows, self.ncols, self.nnz());
        for (r, c, v) in self.triplets() {
            s.push_str(&format!("{} {} {}\n", r, c, fmt_rational(v)));
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<Self, ExactError> {
        let bad = |l: &str| ExactError::ParseRational(l.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad(""))?;
        let dims: Vec<usize> = header
            .trim_start_matches("%%")
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(header)))
            .collect::<Result<_, _>>()?;
        if dims.len() != 3 {
            return Err(bad(header));
        }
        let mut entries = Vec::new();
        for l in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(l));
            }
            let r = parts[0].parse().map_err(|_| bad(l))?;
            let c = parts[1].parse().map_err(|_| bad(l))?;
            entries.push((r, c, parse_rational(parts[2])?));
        }
        Self::from_triplets(dims[0], dims[1], entries)
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.nrows {
            let cells: Vec<String> = (0..self.ncols).map(|c| fmt_rational(&self.get(r, c))).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Rank over ℚ by row insertion in row order.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new();
    for row in &m.data {
        e.insert(row.clone());
    }
    e.rank()
}

/// Ranks of the row prefixes: `out[i]` is the rank of rows `0..i`.
pub fn prefix_ranks(rows: impl IntoIterator<Item = SparseVec>) -> Vec<usize> {
    let mut e = Echelon::new();
    let mut out = vec![0];
    for row in rows {
        e.insert(row);
        out.push(e.rank());
    }
    out
}

pub fn kernel_dimension(m: &SparseMatrix) -> usize {
    m.cols() - rank(m)
}

/// `dim(span(numerator) / span(denominator))` for row spans in an ambient
/// space of the given dimension, after checking the inclusion.
pub fn quotient_dimension(
    ambient_dim: usize,
    numerator_span: &SparseMatrix,
    denominator_span: &SparseMatrix,
) -> Result<usize, ExactError> {
    for m in [numerator_span, denominator_span] {
        if m.cols() != ambient_dim {
            return Err(ExactError::AmbientMismatch { expected: ambient_dim, got: m.cols() });
        }
    }
    let mut e = Echelon::new();
    for row in &numerator_span.data {
        e.insert(row.clone());
    }
    let numerator = e.rank();
    for row in &denominator_span.data {
        e.insert(row.clone());
    }
    if e.rank() != numerator {
        return Err(ExactError::ContainmentViolation { numerator, combined: e.rank() });
    }
    Ok(numerator - rank(denominator_span))
}

/// Basis of the right nullspace `{v : A v = 0}` of a dense matrix, from the
/// reduced row echelon form (one vector per free column, free entry 1).
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Determinant of a small dense square matrix.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] * &inv;
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
    }
    det
}

/// Rank of a small dense matrix.
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::new();
    for row in rows {
        e.insert(row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect());
    }
    e.rank()
}

/// Coefficients `c_0..=c_N` of a truncated power series.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct SeriesTruncation {
    coefficients: Vec<i128>,
}

impl SeriesTruncation {
    pub fn new(coefficients: Vec<i128>) -> Self {
        assert!(!coefficients.is_empty(), "a truncation through degree N has N+1 coefficients");
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coefficients
    }

    pub fn max_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> i128 {
        self.coefficients[k]
    }

    /// Product, truncated to the shorter of the two.
    pub fn mul_truncated(&self, other: &SeriesTruncation) -> SeriesTruncation {
        let n = self.max_degree().min(other.max_degree());
        let mut out = vec![0i128; n + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(n + 1) {
            for (j, b) in other.coefficients.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        SeriesTruncation::new(out)
    }
}

/// Power-series expansion of `numerator / Π (1 − t^d)^e` through degree `n`.
pub fn expand_rational_series(numerator: &[i128], denominator_factors: &[(u32, u32)], n: usize) -> SeriesTruncation {
    let mut c = vec![0i128; n + 1];
    for (k, a) in numerator.iter().enumerate().take(n + 1) {
        c[k] = *a;
    }
    for &(d, e) in denominator_factors {
        assert!(d >= 1, "denominator factor degree must be positive");
        let d = d as usize;
        for _ in 0..e {
            // f / (1 − t^d) = g with g_k = f_k + g_{k−d}
            for k in d..=n {
                c[k] += c[k - d];
            }
        }
    }
    SeriesTruncation::new(c)
}

/// Coefficients of `Π (1 − t^d)^e` as a polynomial.
pub fn expand_product_one_minus(factors: &[(u32, u32)]) -> Vec<i128> {
    let mut p = vec![1i128];
    for &(d, e) in factors {
        for _ in 0..e {
            let mut q = vec![0i128; p.len() + d as usize];
            for (k, a) in p.iter().enumerate() {
                q[k] += a;
                q[k + d as usize] -= a;
            }
            p = q;
        }
    }
    p
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SparseMatrix {
        SparseMatrix::from_dense(rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(2)), 2);
        assert_eq!(rank(&SparseMatrix::zero(3, 4)), 0);
        assert_eq!(rank(&m(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_dimension(&SparseMatrix::identity(2)), 0);
        assert_eq!(kernel_dimension(&SparseMatrix::zero(3, 4)), 4);
        assert_eq!(kernel_dimension(&m(&[vec![1, 1]])), 1);
    }

    #[test]
    fn quotient_examples() {
        let id = SparseMatrix::identity(3);
        let e1 = m(&[vec![1, 0, 0]]);
        assert_eq!(quotient_dimension(3, &id, &e1).unwrap(), 2);
        assert_eq!(quotient_dimension(3, &e1, &e1).unwrap(), 0);
        let num = m(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]]);
        let den = m(&[vec![1, 1, 0, 0]]);
        assert_eq!(quotient_dimension(4, &num, &den).unwrap(), 2);
    }

    #[test]
    fn quotient_rejects_non_inclusion() {
        let num = m(&[vec![1, 0, 0]]);
        let den = m(&[vec![0, 1, 0]]);
        assert!(matches!(quotient_dimension(3, &num, &den), Err(ExactError::ContainmentViolation { .. })));
        assert!(matches!(quotient_dimension(4, &num, &den), Err(ExactError::AmbientMismatch { .. })));
    }

    #[test]
    fn series_examples() {
        // (k+1)^2 for (1 − t^2)/(1 − t)^4
        let s = expand_rational_series(&[1, 0, -1], &[(1, 4)], 4);
        assert_eq!(s.coefficients(), &[1, 4, 9, 16, 25]);
        assert_eq!(expand_rational_series(&[1], &[(1, 1)], 3).coefficients(), &[1, 1, 1, 1]);
        // (1+t)^4 (1+t^3)
        let num = [1, 4, 6, 5, 5, 6, 4, 1];
        assert_eq!(expand_rational_series(&num, &[], 7).coefficients(), &num);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("2/-4").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&frac(-6, 4)), "-3/2");
    }

    #[test]
    fn triplet_text_round_trip() {
        let a = m(&[vec![0, 3, 0], vec![-1, 0, 2]]);
        let t = a.to_triplet_text();
        assert!(t.starts_with("%% 2 3 3\n"));
        assert_eq!(SparseMatrix::from_triplet_text(&t).unwrap(), a);
    }

    #[test]
    fn prefix_rank_profile() {
        let rows = vec![vec![(0, int(1))], vec![(0, int(2))], vec![(1, int(1))]];
        assert_eq!(prefix_ranks(rows), vec![0, 1, 1, 2]);
    }

    #[test]
    fn dense_helpers() {
        let q = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        let cartan = vec![q(&[2, -2]), q(&[-2, 2])];
        let k = kernel_basis(&cartan, 2);
        assert_eq!(k, vec![q(&[1, 1])]);
        assert_eq!(determinant(&[q(&[1, 2]), q(&[3, 4])]), int(-2));
        assert_eq!(determinant(&[q(&[0, 1]), q(&[1, 0])]), int(-1));
        assert_eq!(dense_rank(&cartan), 1);
    }
}
