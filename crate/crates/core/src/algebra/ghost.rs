use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_traits::{One, Zero};

use super::AlgebraError;
use crate::exact::{int, Rational};

/// Maximum number of ghost pairs; subsets are stored as `u64` bit masks.
pub const MAX_GHOSTS: usize = 64;

/// The basis monomial `ψ_S ψ*_T` with `S`, `T` increasing (bit `i` = index `i`, 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GhostMonomial {
    pub psi: u64,
    pub star: u64,
}

impl GhostMonomial {
    pub const ONE: GhostMonomial = GhostMonomial { psi: 0, star: 0 };

    pub fn new(psi: u64, star: u64) -> Self {
        Self { psi, star }
    }

    pub fn from_indices(psi: &[usize], star: &[usize]) -> Self {
        Self { psi: mask(psi), star: mask(star) }
    }

    /// `(−|S|, |T|)`.
    pub fn bidegree(&self) -> (i64, i64) {
        (-(self.psi.count_ones() as i64), self.star.count_ones() as i64)
    }

    /// `|T| − |S|`.
    pub fn degree(&self) -> i64 {
        self.star.count_ones() as i64 - self.psi.count_ones() as i64
    }

    /// `(|S| + |T|) mod 2`.
    pub fn parity(&self) -> u32 {
        (self.psi.count_ones() + self.star.count_ones()) % 2
    }

    pub fn psi_indices(&self) -> Vec<usize> {
        bits(self.psi)
    }

    pub fn star_indices(&self) -> Vec<usize> {
        bits(self.star)
    }

    /// The element as a word of generators: ψ's first, then ψ*'s.
    fn word(&self) -> Vec<Generator> {
        let mut w: Vec<Generator> = bits(self.psi).into_iter().map(Generator::Psi).collect();
        w.extend(bits(self.star).into_iter().map(Generator::Star));
        w
    }
}

pub fn mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Generator {
    Psi(usize),
    Star(usize),
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

/// `ψ_S ψ*_T · g` expanded in normal order as `(monomial, ±1)` pairs.
fn mul_generator(m: GhostMonomial, g: Generator) -> Vec<(GhostMonomial, i64)> {
    match g {
        Generator::Star(j) => {
            let bit = 1u64 << j;
            if m.star & bit != 0 {
                return Vec::new();
            }
            let passed = (m.star >> (j + 1)).count_ones();
            vec![(GhostMonomial { psi: m.psi, star: m.star | bit }, sign(passed % 2 == 1))]
        }
        Generator::Psi(j) => {
            let bit = 1u64 << j;
            let mut out = Vec::with_capacity(2);
            // ψ_j travels left through all of ψ*_T, then sorts into ψ_S
            if m.psi & bit == 0 {
                let through_t = m.star.count_ones();
                let through_s = (m.psi >> (j + 1)).count_ones();
                out.push((
                    GhostMonomial { psi: m.psi | bit, star: m.star },
                    sign((through_t + through_s) % 2 == 1),
                ));
            }
            // contraction with ψ*_j: ψ*_j ψ_j = 1 − ψ_j ψ*_j
            if m.star & bit != 0 {
                let passed = (m.star >> (j + 1)).count_ones();
                out.push((GhostMonomial { psi: m.psi, star: m.star & !bit }, sign(passed % 2 == 1)));
            }
            out
        }
    }
}

/// Normal-ordered product of two basis monomials; coefficients are ±1.
pub fn monomial_product(a: GhostMonomial, b: GhostMonomial) -> Vec<(GhostMonomial, i64)> {
    let mut acc: BTreeMap<GhostMonomial, i64> = BTreeMap::new();
    acc.insert(a, 1);
    for g in b.word() {
        let mut next: BTreeMap<GhostMonomial, i64> = BTreeMap::new();
        for (m, c) in acc {
            for (m2, s) in mul_generator(m, g) {
                *next.entry(m2).or_insert(0) += c * s;
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    acc.into_iter().collect()
}

/// Element of the Clifford superalgebra Cl(𝔤 ⊕ 𝔤*), stored in normal order
/// (ψ's left of ψ*'s, indices increasing).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GhostElement {
    g_dim: usize,
    terms: BTreeMap<GhostMonomial, Rational>,
}

impl GhostElement {
    pub fn zero(g_dim: usize) -> Self {
        assert!(g_dim <= MAX_GHOSTS, "at most {MAX_GHOSTS} ghost pairs are supported");
        Self { g_dim, terms: BTreeMap::new() }
    }

    pub fn one(g_dim: usize) -> Self {
        Self::from_monomial(g_dim, GhostMonomial::ONE, Rational::one())
    }

    pub fn from_monomial(g_dim: usize, m: GhostMonomial, c: Rational) -> Self {
        let mut e = Self::zero(g_dim);
        e.add_term(m, c);
        e
    }

    pub fn from_terms(g_dim: usize, terms: impl IntoIterator<Item = (GhostMonomial, Rational)>) -> Self {
        let mut e = Self::zero(g_dim);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// `ψ_i` (0-based).
    pub fn psi(g_dim: usize, i: usize) -> Self {
        Self::from_monomial(g_dim, GhostMonomial::new(1 << i, 0), Rational::one())
    }

    /// `ψ*_i` (0-based).
    pub fn psi_star(g_dim: usize, i: usize) -> Self {
        Self::from_monomial(g_dim, GhostMonomial::new(0, 1 << i), Rational::one())
    }

    pub fn g_dim(&self) -> usize {
        self.g_dim
    }

    pub fn terms(&self) -> &BTreeMap<GhostMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &GhostMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: GhostMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.g_dim, self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.g_dim != other.g_dim {
            return Err(AlgebraError::DimensionMismatch { left: self.g_dim, right: other.g_dim });
        }
        let mut out = Self::zero(self.g_dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let cab = ca * cb;
                for (m, s) in monomial_product(*ma, *mb) {
                    out.add_term(m, &cab * int(s));
                }
            }
        }
        Ok(out)
    }

    /// Super-commutator `ab − (−1)^{|a||b|} ba` for parity-homogeneous inputs.
    pub fn supercommutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        let pa = self.parity().ok_or(AlgebraError::NotHomogeneous)?;
        let pb = other.parity().ok_or(AlgebraError::NotHomogeneous)?;
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(if pa * pb == 1 { &ab + &ba } else { &ab - &ba })
    }

    /// Common parity of all terms (zero counts as even).
    pub fn parity(&self) -> Option<u32> {
        common(self.terms.keys().map(|m| m.parity())).map(|p| p.unwrap_or(0))
    }

    /// Common ghost degree `|T| − |S|` of all terms.
    pub fn degree(&self) -> Option<i64> {
        common(self.terms.keys().map(|m| m.degree())).map(|d| d.unwrap_or(0))
    }

    /// Coordinates in the anti-normal basis `ψ*_T ψ_S`, keyed by the same
    /// `(S, T)` masks.
    pub fn to_antinormal(&self) -> BTreeMap<GhostMonomial, Rational> {
        let mut out: BTreeMap<GhostMonomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (key, s) in normal_to_antinormal(*m) {
                let slot = out.entry(key).or_insert_with(Rational::zero);
                *slot += c * int(s);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Inverse of [`GhostElement::to_antinormal`].
    pub fn from_antinormal(g_dim: usize, coords: &BTreeMap<GhostMonomial, Rational>) -> Self {
        let mut out = Self::zero(g_dim);
        for (key, c) in coords {
            for (m, s) in antinormal_to_normal(*key) {
                out.add_term(m, c * int(s));
            }
        }
        out
    }
}

/// `ψ*_T ψ_S` written in normal order.
pub fn antinormal_to_normal(key: GhostMonomial) -> Vec<(GhostMonomial, i64)> {
    monomial_product(GhostMonomial::new(0, key.star), GhostMonomial::new(key.psi, 0))
}

/// `ψ_S ψ*_T` written in the anti-normal basis.
///
/// Exchanging ψ ↔ ψ* preserves the defining relations, so the anti-normal
/// expansion is the swapped normal expansion of the swapped word.
pub fn normal_to_antinormal(m: GhostMonomial) -> Vec<(GhostMonomial, i64)> {
    monomial_product(GhostMonomial::new(0, m.psi), GhostMonomial::new(m.star, 0))
        .into_iter()
        .map(|(r, s)| (GhostMonomial::new(r.star, r.psi), s))
        .collect()
}

fn common<T: PartialEq + Copy>(mut it: impl Iterator<Item = T>) -> Option<Option<T>> {
    match it.next() {
        None => Some(None),
        Some(first) => it.all(|x| x == first).then_some(Some(first)),
    }
}

impl Add for &GhostElement {
    type Output = GhostElement;
    fn add(self, rhs: &GhostElement) -> GhostElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &GhostElement {
    type Output = GhostElement;
    fn sub(self, rhs: &GhostElement) -> GhostElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_examples() {
        let p1 = GhostElement::psi(2, 0);
        let p2 = GhostElement::psi(2, 1);
        let s1 = GhostElement::psi_star(2, 0);
        let p1s1 = GhostElement::from_monomial(2, GhostMonomial::from_indices(&[0], &[0]), int(1));
        assert_eq!(p1.mul(&s1).unwrap(), p1s1);
        assert_eq!(s1.mul(&p1).unwrap(), &GhostElement::one(2) - &p1s1);
        let p1p2 = GhostElement::from_monomial(2, GhostMonomial::from_indices(&[0, 1], &[]), int(1));
        assert_eq!(p2.mul(&p1).unwrap(), p1p2.scale(&int(-1)));
        assert!(p1.mul(&p1).unwrap().is_zero());
    }

    #[test]
    fn supercommutator_relations() {
        let g = 3;
        for i in 0..g {
            for j in 0..g {
                let pij = GhostElement::psi(g, i).supercommutator(&GhostElement::psi_star(g, j)).unwrap();
                let want = if i == j { GhostElement::one(g) } else { GhostElement::zero(g) };
                assert_eq!(pij, want);
                assert!(GhostElement::psi(g, i).supercommutator(&GhostElement::psi(g, j)).unwrap().is_zero());
                assert!(GhostElement::psi_star(g, i)
                    .supercommutator(&GhostElement::psi_star(g, j))
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn antinormal_round_trip() {
        let g = 3;
        for psi in 0..8u64 {
            for star in 0..8u64 {
                let e = GhostElement::from_monomial(g, GhostMonomial::new(psi, star), int(1));
                let back = GhostElement::from_antinormal(g, &e.to_antinormal());
                assert_eq!(back, e);
            }
        }
        // ψ₁ψ*₁ = 1 − ψ*₁ψ₁
        let e = GhostElement::from_monomial(1, GhostMonomial::new(1, 1), int(1));
        let an = e.to_antinormal();
        assert_eq!(an.get(&GhostMonomial::ONE), Some(&int(1)));
        assert_eq!(an.get(&GhostMonomial::new(1, 1)), Some(&int(-1)));
    }

    #[test]
    fn bidegree_and_parity() {
        let m = GhostMonomial::from_indices(&[0, 2], &[1]);
        assert_eq!(m.bidegree(), (-2, 1));
        assert_eq!(m.degree(), -1);
        assert_eq!(m.parity(), 1);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            GhostElement::psi(1, 0).mul(&GhostElement::psi(2, 0)),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }
}
