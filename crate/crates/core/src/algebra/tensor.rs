use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::ghost::{self, GhostElement, GhostMonomial};
use super::weyl::{self, WeylElement, WeylMonomial};
use super::AlgebraError;
use crate::exact::{int, Rational};

/// Basis element `x^α ∂^β ⊗ ψ_S ψ*_T` of `C(R) = 𝔇(V) ⊗ Cl(𝔤 ⊕ 𝔤*)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrstMonomial {
    pub weyl: WeylMonomial,
    pub ghost: GhostMonomial,
}

impl BrstMonomial {
    pub fn new(weyl: WeylMonomial, ghost: GhostMonomial) -> Self {
        Self { weyl, ghost }
    }

    /// Sort key `(degree, α, β, S, T)`.
    pub fn grlex_key(&self) -> (u32, &[u32], &[u32], u64, u64) {
        let (d, a, b) = self.weyl.grlex_key();
        (d, a, b, self.ghost.psi, self.ghost.star)
    }
}

/// Element of `C(R)` with the ghost factor kept in ψ-first normal order.
///
/// The Weyl factor is purely even, so the super tensor product sign is
/// always `+1` and `(a ⊗ ω)(a' ⊗ ω') = aa' ⊗ ωω'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BrstElement {
    n_vars: usize,
    g_dim: usize,
    terms: BTreeMap<BrstMonomial, Rational>,
}

impl BrstElement {
    pub fn zero(n_vars: usize, g_dim: usize) -> Self {
        Self { n_vars, g_dim, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize, g_dim: usize) -> Self {
        Self::from_monomial(
            n_vars,
            g_dim,
            BrstMonomial::new(WeylMonomial::one(n_vars), GhostMonomial::ONE),
            Rational::one(),
        )
    }

    pub fn from_monomial(n_vars: usize, g_dim: usize, m: BrstMonomial, c: Rational) -> Self {
        let mut e = Self::zero(n_vars, g_dim);
        e.add_term(m, c);
        e
    }

    pub fn from_terms(
        n_vars: usize,
        g_dim: usize,
        terms: impl IntoIterator<Item = (BrstMonomial, Rational)>,
    ) -> Self {
        let mut e = Self::zero(n_vars, g_dim);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// `a ⊗ ω`.
    pub fn tensor(a: &WeylElement, w: &GhostElement) -> Self {
        let mut e = Self::zero(a.n_vars(), w.g_dim());
        for (ma, ca) in a.terms() {
            for (mw, cw) in w.terms() {
                e.add_term(BrstMonomial::new(ma.clone(), *mw), ca * cw);
            }
        }
        e
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn g_dim(&self) -> usize {
        self.g_dim
    }

    pub fn terms(&self) -> &BTreeMap<BrstMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &BrstMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: BrstMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(slot) = self.terms.get_mut(&m) {
            *slot += c;
            if slot.is_zero() {
                self.terms.remove(&m);
            }
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.n_vars, self.g_dim, self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n_vars != other.n_vars {
            return Err(AlgebraError::VariableCountMismatch { left: self.n_vars, right: other.n_vars });
        }
        if self.g_dim != other.g_dim {
            return Err(AlgebraError::DimensionMismatch { left: self.g_dim, right: other.g_dim });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.n_vars, self.g_dim);
        let mut ghost_cache: BTreeMap<(GhostMonomial, GhostMonomial), Vec<(GhostMonomial, i64)>> =
            BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let gs = ghost_cache
                    .entry((ma.ghost, mb.ghost))
                    .or_insert_with(|| ghost::monomial_product(ma.ghost, mb.ghost));
                if gs.is_empty() {
                    continue;
                }
                let cab = ca * cb;
                for (w, cw) in weyl::monomial_product(&ma.weyl, &mb.weyl) {
                    let c = &cab * cw;
                    for (g, s) in gs.iter() {
                        out.add_term(BrstMonomial::new(w.clone(), *g), &c * int(*s));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Common parity of all terms (zero counts as even).
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.ghost.parity());
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    /// Common ghost degree `|T| − |S|` of all terms.
    pub fn ghost_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.ghost.degree());
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    /// Maximum Bernstein degree of the Weyl factors, `None` for zero.
    pub fn bernstein_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weyl.degree()).max()
    }

    /// Super-commutator `[a, b] = ab − (−1)^{|a||b|} ba` for parity-homogeneous inputs.
    pub fn supercommutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        let pa = self.parity().ok_or(AlgebraError::NotHomogeneous)?;
        let pb = other.parity().ok_or(AlgebraError::NotHomogeneous)?;
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(if pa * pb == 1 { &ab + &ba } else { &ab - &ba })
    }

    /// Terms regrouped by Weyl monomial with the ghost factor in the
    /// anti-normal basis `ψ*_T ψ_S` (keys reuse the `(S, T)` masks).
    pub fn to_antinormal(&self) -> BTreeMap<BrstMonomial, Rational> {
        let mut out: BTreeMap<BrstMonomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (g, s) in ghost::normal_to_antinormal(m.ghost) {
                let key = BrstMonomial::new(m.weyl.clone(), g);
                let slot = out.entry(key).or_insert_with(Rational::zero);
                *slot += c * int(s);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Inverse of [`BrstElement::to_antinormal`].
    pub fn from_antinormal(
        n_vars: usize,
        g_dim: usize,
        coords: impl IntoIterator<Item = (BrstMonomial, Rational)>,
    ) -> Self {
        let mut out = Self::zero(n_vars, g_dim);
        for (m, c) in coords {
            for (g, s) in ghost::antinormal_to_normal(m.ghost) {
                out.add_term(BrstMonomial::new(m.weyl.clone(), g), &c * int(s));
            }
        }
        out
    }
}

impl Add for &BrstElement {
    type Output = BrstElement;
    fn add(self, rhs: &BrstElement) -> BrstElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &BrstElement {
    type Output = BrstElement;
    fn sub(self, rhs: &BrstElement) -> BrstElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &BrstElement {
    type Output = BrstElement;
    fn neg(self) -> BrstElement {
        self.scale(&int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gx(n: usize, i: usize) -> WeylElement {
        WeylElement::x(n, i)
    }

    #[test]
    fn tensor_product_examples() {
        let lhs = BrstElement::tensor(&gx(1, 0), &GhostElement::psi_star(1, 0));
        let rhs = BrstElement::tensor(&WeylElement::d(1, 0), &GhostElement::psi(1, 0));
        let got = lhs.mul(&rhs).unwrap();
        let ghost = &GhostElement::one(1) - &GhostElement::from_monomial(1, GhostMonomial::new(1, 1), int(1));
        let want = BrstElement::tensor(&WeylElement::x_d(1, 0, 0), &ghost);
        assert_eq!(got, want);

        let p = BrstElement::tensor(&WeylElement::one(1), &GhostElement::psi(1, 0));
        assert!(p.mul(&p).unwrap().is_zero());

        let a = &gx(2, 0) + &WeylElement::d(2, 1);
        let w = GhostElement::psi_star(2, 1);
        let left = BrstElement::tensor(&a, &GhostElement::one(2));
        let right = BrstElement::tensor(&WeylElement::one(2), &w);
        assert_eq!(left.mul(&right).unwrap(), BrstElement::tensor(&a, &w));
    }

    #[test]
    fn grading_queries() {
        let e = BrstElement::tensor(&gx(1, 0), &GhostElement::psi_star(2, 1));
        assert_eq!(e.ghost_degree(), Some(1));
        assert_eq!(e.parity(), Some(1));
        assert_eq!(e.bernstein_degree(), Some(1));
        let mixed = &e + &BrstElement::one(1, 2);
        assert_eq!(mixed.parity(), None);
        assert!(mixed.supercommutator(&e).is_err());
    }

    #[test]
    fn antinormal_round_trip() {
        let w = &GhostElement::from_monomial(2, GhostMonomial::new(3, 1), int(2))
            + &GhostElement::psi_star(2, 0);
        let e = BrstElement::tensor(&(&gx(1, 0) + &WeylElement::one(1)), &w);
        let back = BrstElement::from_antinormal(1, 2, e.to_antinormal());
        assert_eq!(back, e);
    }
}
