use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::PolyElement;
use super::AlgebraError;
use crate::exact::{int, Rational};

/// A normal-ordered monomial `x^α ∂^β`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMonomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl WeylMonomial {
    pub fn one(n_vars: usize) -> Self {
        Self { alpha: vec![0; n_vars], beta: vec![0; n_vars] }
    }

    pub fn new(alpha: Vec<u32>, beta: Vec<u32>) -> Self {
        assert_eq!(alpha.len(), beta.len());
        Self { alpha, beta }
    }

    pub fn n_vars(&self) -> usize {
        self.alpha.len()
    }

    /// Bernstein degree `|α| + |β|`.
    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta.iter().sum::<u32>()
    }

    /// `Σ_j w_j (α_j − β_j)` for per-variable weight vectors.
    pub fn weight(&self, weights: &[Vec<i64>]) -> Vec<i64> {
        let dim = weights.first().map_or(0, |w| w.len());
        let mut out = vec![0i64; dim];
        for (j, w) in weights.iter().enumerate() {
            let e = self.alpha[j] as i64 - self.beta[j] as i64;
            if e != 0 {
                for (o, wi) in out.iter_mut().zip(w) {
                    *o += wi * e;
                }
            }
        }
        out
    }

    /// Graded-lexicographic sort key `(degree, α, β)`.
    pub fn grlex_key(&self) -> (u32, &[u32], &[u32]) {
        (self.degree(), &self.alpha, &self.beta)
    }
}

/// Normal-ordered product of two monomials.
///
/// Per variable, `∂^b x^c = Σ_k C(b,k) C(c,k) k! x^{c−k} ∂^{b−k}`; distinct
/// variables commute, so the multi-variable product is the tensor product of
/// these expansions.
pub fn monomial_product(a: &WeylMonomial, b: &WeylMonomial) -> Vec<(WeylMonomial, Rational)> {
    let n = a.n_vars();
    // per-variable (k, coefficient) choices
    let choices: Vec<Vec<(u32, BigInt)>> = (0..n)
        .map(|i| {
            let (bd, cx) = (a.beta[i], b.alpha[i]);
            (0..=bd.min(cx))
                .map(|k| {
                    let c = binom_big(bd, k) * binom_big(cx, k) * factorial_big(k);
                    (k, c)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut ks = vec![0usize; n];
    loop {
        let mut coeff = BigInt::one();
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        for i in 0..n {
            let (k, c) = &choices[i][ks[i]];
            coeff *= c;
            alpha.push(a.alpha[i] + b.alpha[i] - k);
            beta.push(a.beta[i] + b.beta[i] - k);
        }
        out.push((WeylMonomial { alpha, beta }, Rational::from_integer(coeff)));
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            ks[i] += 1;
            if ks[i] < choices[i].len() {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}

fn binom_big(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial_big(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Bernstein degree of an element; the zero element has degree −∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

/// Result of a torus-weight query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusWeight {
    Homogeneous(Vec<i64>),
    Mixed,
}

/// An element of the Weyl algebra 𝔇(V) in normal order (all `x` left of all `∂`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n_vars: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylElement {
    pub fn zero(n_vars: usize) -> Self {
        Self { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::from_monomial(WeylMonomial::one(n_vars), c)
    }

    pub fn from_monomial(m: WeylMonomial, c: Rational) -> Self {
        let n_vars = m.n_vars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { n_vars, terms }
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (WeylMonomial, Rational)>) -> Self {
        let mut e = Self::zero(n_vars);
        for (m, c) in terms {
            assert_eq!(m.n_vars(), n_vars, "monomial has wrong number of variables");
            e.add_term(m, c);
        }
        e
    }

    /// The coordinate `x_i` (0-based).
    pub fn x(n_vars: usize, i: usize) -> Self {
        let mut m = WeylMonomial::one(n_vars);
        m.alpha[i] = 1;
        Self::from_monomial(m, Rational::one())
    }

    /// The derivation `∂_i` (0-based).
    pub fn d(n_vars: usize, i: usize) -> Self {
        let mut m = WeylMonomial::one(n_vars);
        m.beta[i] = 1;
        Self::from_monomial(m, Rational::one())
    }

    /// `x_i ∂_j`, already normal ordered.
    pub fn x_d(n_vars: usize, i: usize, j: usize) -> Self {
        let mut m = WeylMonomial::one(n_vars);
        m.alpha[i] += 1;
        m.beta[j] += 1;
        Self::from_monomial(m, Rational::one())
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

    pub(crate) fn add_term(&mut self, m: WeylMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n_vars);
        }
        Self { n_vars: self.n_vars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n_vars != other.n_vars {
            return Err(AlgebraError::VariableCountMismatch { left: self.n_vars, right: other.n_vars });
        }
        Ok(())
    }

    /// Normal-ordered product.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let cab = ca * cb;
                for (m, c) in monomial_product(ma, mb) {
                    out.add_term(m, c * &cab);
                }
            }
        }
        Ok(out)
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(&self.mul(other)? - &other.mul(self)?)
    }

    pub fn bernstein_degree(&self) -> Degree {
        self.terms.keys().map(|m| m.degree()).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Common torus weight of all terms; the zero element reports the zero weight.
    pub fn torus_weight(&self, weights: &[Vec<i64>]) -> TorusWeight {
        let dim = weights.first().map_or(0, |w| w.len());
        let mut found: Option<Vec<i64>> = None;
        for m in self.terms.keys() {
            let w = m.weight(weights);
            match &found {
                None => found = Some(w),
                Some(f) if *f != w => return TorusWeight::Mixed,
                _ => {}
            }
        }
        TorusWeight::Homogeneous(found.unwrap_or_else(|| vec![0; dim]))
    }

    /// Top-degree part read commutatively (`∂ ↦ ξ`).
    pub fn principal_symbol(&self) -> PolyElement {
        match self.bernstein_degree() {
            Degree::NegInfinity => PolyElement::zero(self.n_vars),
            Degree::Finite(top) => PolyElement::from_terms(
                self.n_vars,
                self.terms.iter().filter(|(m, _)| m.degree() == top).map(|(m, c)| (m.clone(), c.clone())),
            ),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n_vars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn x(i: usize) -> WeylElement {
        WeylElement::x(2, i)
    }
    fn d(i: usize) -> WeylElement {
        WeylElement::d(2, i)
    }

    #[test]
    fn defining_relation() {
        let got = d(0).mul(&x(0)).unwrap();
        let want = &WeylElement::x_d(2, 0, 0) + &WeylElement::one(2);
        assert_eq!(got, want);
        assert_eq!(x(0).mul(&d(0)).unwrap(), WeylElement::x_d(2, 0, 0));
    }

    #[test]
    fn euler_squared() {
        let e = WeylElement::x_d(1, 0, 0);
        let got = e.mul(&e).unwrap();
        let want = WeylElement::from_terms(
            1,
            [
                (WeylMonomial::new(vec![2], vec![2]), int(1)),
                (WeylMonomial::new(vec![1], vec![1]), int(1)),
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn commutator_examples() {
        let e = WeylElement::x_d(1, 0, 0);
        let x1 = WeylElement::x(1, 0);
        assert_eq!(e.commutator(&x1).unwrap(), x1);
        let x1sq = x1.mul(&x1).unwrap();
        assert_eq!(e.commutator(&x1sq).unwrap(), x1sq.scale(&int(2)));
        let a = WeylElement::x_d(2, 0, 1);
        let b = WeylElement::x_d(2, 1, 0);
        let want = &WeylElement::x_d(2, 0, 0) - &WeylElement::x_d(2, 1, 1);
        assert_eq!(a.commutator(&b).unwrap(), want);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(matches!(
            WeylElement::x(1, 0).mul(&WeylElement::x(2, 0)),
            Err(AlgebraError::VariableCountMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn degrees_and_weights() {
        let e = &WeylElement::x_d(1, 0, 0) + &WeylElement::one(1);
        assert_eq!(e.bernstein_degree(), Degree::Finite(2));
        assert_eq!(WeylElement::zero(1).bernstein_degree(), Degree::NegInfinity);
        let w = vec![vec![1i64]];
        assert_eq!(WeylElement::x_d(1, 0, 0).torus_weight(&w), TorusWeight::Homogeneous(vec![0]));
        assert_eq!(WeylElement::x(1, 0).torus_weight(&w), TorusWeight::Homogeneous(vec![1]));
        let mixed = &WeylElement::x(1, 0) + &WeylElement::d(1, 0);
        assert_eq!(mixed.torus_weight(&w), TorusWeight::Mixed);
    }

    #[test]
    fn symbols() {
        let e = &WeylElement::x_d(1, 0, 0) + &WeylElement::one(1);
        let s = e.principal_symbol();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.coefficient(&WeylMonomial::new(vec![1], vec![1])), int(1));
        let dd = WeylElement::d(1, 0).pow(2).principal_symbol();
        assert_eq!(dd.coefficient(&WeylMonomial::new(vec![0], vec![2])), int(1));
    }
}
