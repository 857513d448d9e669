mod common;

use brst_core::brst::{hilbert_certificate, koszul_flatness_certificate};
use brst_core::exact::binomial;

#[test]
fn affine_a1_hilbert_function() {
    for s in [common::preprojective("A1"), common::m11()] {
        let cert = koszul_flatness_certificate(&s, 8).unwrap();
        assert!(cert.passed());
        let squares: Vec<i128> = (1..=9).map(|k| k * k).collect();
        assert_eq!(cert.computed, squares);
    }
}

#[test]
fn affine_d4_through_degree_four() {
    let s = common::preprojective("D4");
    assert_eq!((s.n_vars, s.g_dim()), (8, 7));
    let cert = koszul_flatness_certificate(&s, 4).unwrap();
    // (1 − t²)^7 / (1 − t)^16 by binomial convolution
    let b = |n: u64, k: u64| binomial(n, k) as i128;
    let series: Vec<i128> = (0..=4u64)
        .map(|k| (0..=k / 2).map(|i| (-1i128).pow(i as u32) * b(7, i) * b(k - 2 * i + 15, 15)).sum())
        .collect();
    assert_eq!(cert.expected, series);
    assert!(cert.passed(), "{cert:?}");
}

#[test]
fn negative_fixture_fails_in_degree_four() {
    let s = common::m11();
    let mut gens = s.classical_moments.clone();
    gens.push(gens[0].mul(&gens[0]));
    let cert = hilbert_certificate(&gens, s.n_vars, 8).unwrap();
    assert_eq!(cert.first_failure, Some(4));
    assert!(cert.computed[..4] == cert.expected[..4]);
}
