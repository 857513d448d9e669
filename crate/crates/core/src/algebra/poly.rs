use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_traits::Zero;

use super::weyl::WeylMonomial;
use crate::exact::Rational;

/// An element of the commutative ring ℂ[T*V] = ℚ[x, ξ].
///
/// Monomials reuse [`WeylMonomial`] with `β` read as the exponent of `ξ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyElement {
    n_vars: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl PolyElement {
    pub fn zero(n_vars: usize) -> Self {
        Self { n_vars, terms: BTreeMap::new() }
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (WeylMonomial, Rational)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<WeylMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &WeylMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: WeylMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Total degree if all terms share it.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = Self::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mul_monomial(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Multiplies by a single monomial with coefficient 1.
    pub fn mul_monomial(&self, m: &WeylMonomial) -> Self {
        Self {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(k, c)| (mul_monomial(k, m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.n_vars, self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }
}

pub fn mul_monomial(a: &WeylMonomial, b: &WeylMonomial) -> WeylMonomial {
    WeylMonomial {
        alpha: a.alpha.iter().zip(&b.alpha).map(|(p, q)| p + q).collect(),
        beta: a.beta.iter().zip(&b.beta).map(|(p, q)| p + q).collect(),
    }
}

impl Add for &PolyElement {
    type Output = PolyElement;
    fn add(self, rhs: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyElement {
    type Output = PolyElement;
    fn sub(self, rhs: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}
