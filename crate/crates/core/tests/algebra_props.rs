//! Property tests for the Weyl, symbol and ghost algebras. The Weyl product
//! is checked against operators acting on polynomials, computed here by
//! formal differentiation without using the library's product.

use std::collections::BTreeMap;

use brst_core::algebra::ghost::monomial_product as ghost_monomial_product;
use brst_core::algebra::{Degree, GhostElement, GhostMonomial, TorusWeight, WeylElement, WeylMonomial};
use brst_core::exact::{frac, int, Rational};
use num_traits::Zero;
use proptest::prelude::*;

const N: usize = 2;

type Poly = BTreeMap<Vec<u32>, Rational>;

fn apply_monomial(m: &WeylMonomial, c: &Rational, f: &Poly, out: &mut Poly) {
    for (gamma, a) in f {
        let mut g = gamma.clone();
        let mut coeff = a * c;
        for (gi, &b) in g.iter_mut().zip(&m.beta) {
            for _ in 0..b {
                if *gi == 0 {
                    coeff = Rational::zero();
                    break;
                }
                coeff *= int(*gi as i64);
                *gi -= 1;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        for (gi, &a) in g.iter_mut().zip(&m.alpha) {
            *gi += a;
        }
        let e = out.entry(g).or_insert_with(Rational::zero);
        *e += coeff;
    }
}

fn apply(a: &WeylElement, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in a.terms() {
        apply_monomial(m, c, f, &mut out);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn monomial() -> impl Strategy<Value = WeylMonomial> {
    (prop::collection::vec(0u32..3, N), prop::collection::vec(0u32..3, N)).prop_map(|(a, b)| WeylMonomial::new(a, b))
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

fn element() -> impl Strategy<Value = WeylElement> {
    prop::collection::vec((monomial(), coefficient()), 1..4)
        .prop_map(|terms| WeylElement::from_terms(N, terms))
}

/// Elements all of whose terms share one Bernstein degree `≤ 4`.
fn homogeneous() -> impl Strategy<Value = WeylElement> {
    (0u32..=4).prop_flat_map(|d| {
        prop::collection::vec(
            (prop::collection::vec(0u32..=d, 2 * N), coefficient()).prop_filter_map("degree", move |(v, c)| {
                (v.iter().sum::<u32>() == d).then(|| (WeylMonomial::new(v[..N].to_vec(), v[N..].to_vec()), c))
            }),
            1..3,
        )
        .prop_map(|terms| WeylElement::from_terms(N, terms))
    })
}

/// Elements of a single torus weight for weights `x_1 ↦ 1`, `x_2 ↦ 2`.
fn weight_homogeneous() -> impl Strategy<Value = WeylElement> {
    (-3i64..=3).prop_flat_map(|w| {
        prop::collection::vec((monomial(), coefficient()), 1..6).prop_map(move |terms| {
            let keep: Vec<_> = terms.into_iter().filter(|(m, _)| m.weight(&weights()) == [w]).collect();
            WeylElement::from_terms(N, keep)
        })
    })
}

fn weights() -> Vec<Vec<i64>> {
    vec![vec![1], vec![2]]
}

fn ghost_element(g: usize) -> impl Strategy<Value = GhostElement> {
    let top = 1u64 << g;
    prop::collection::vec((0..top, 0..top, coefficient()), 1..4)
        .prop_map(move |t| GhostElement::from_terms(g, t.into_iter().map(|(s, r, c)| (GhostMonomial::new(s, r), c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn operator_oracle(a in element(), b in element(), gamma in prop::collection::vec(0u32..=3, N)) {
        prop_assume!(gamma.iter().sum::<u32>() <= 6);
        let f: Poly = [(gamma, Rational::from_integer(1.into()))].into_iter().collect();
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(apply(&ab, &f), apply(&a, &apply(&b, &f)));
    }

    #[test]
    fn weyl_associative(a in element(), b in element(), c in element()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn symbols_multiply(a in homogeneous(), b in homogeneous()) {
        let ab = a.mul(&b).unwrap();
        if let (Degree::Finite(da), Degree::Finite(db)) = (a.bernstein_degree(), b.bernstein_degree()) {
            if ab.bernstein_degree() == Degree::Finite(da + db) {
                prop_assert_eq!(ab.principal_symbol(), a.principal_symbol().mul(&b.principal_symbol()));
            }
        }
    }

    #[test]
    fn weights_add(a in weight_homogeneous(), b in weight_homogeneous()) {
        let ws = weights();
        if let (TorusWeight::Homogeneous(wa), TorusWeight::Homogeneous(wb)) = (a.torus_weight(&ws), b.torus_weight(&ws)) {
            let ab = a.mul(&b).unwrap();
            if !ab.is_zero() {
                prop_assert_eq!(ab.torus_weight(&ws), TorusWeight::Homogeneous(vec![wa[0] + wb[0]]));
            }
        }
    }

    #[test]
    fn commutator_drops_two(a in homogeneous(), b in homogeneous()) {
        let c = a.commutator(&b).unwrap();
        if let (Degree::Finite(da), Degree::Finite(db)) = (a.bernstein_degree(), b.bernstein_degree()) {
            match c.bernstein_degree() {
                Degree::NegInfinity => {}
                Degree::Finite(dc) => prop_assert!(dc + 2 <= da + db),
            }
        }
    }

    #[test]
    fn ghost_associative(a in ghost_element(3), b in ghost_element(3), c in ghost_element(3)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ghost_basis_closure(s1 in 0u64..16, t1 in 0u64..16, s2 in 0u64..16, t2 in 0u64..16) {
        let prod = ghost_monomial_product(GhostMonomial::new(s1, t1), GhostMonomial::new(s2, t2));
        prop_assert!(prod.iter().all(|(_, c)| *c == 1 || *c == -1));
        let mut seen: Vec<_> = prod.iter().map(|(m, _)| *m).collect();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), prod.len());
    }
}

#[test]
fn canonical_relation_on_operators() {
    let f: Poly = [(vec![3, 1], int(1))].into_iter().collect();
    let dx = WeylElement::d(N, 0).mul(&WeylElement::x(N, 0)).unwrap();
    let xd = WeylElement::x(N, 0).mul(&WeylElement::d(N, 0)).unwrap();
    let comm = &dx - &xd;
    assert_eq!(apply(&comm, &f), f);
}
