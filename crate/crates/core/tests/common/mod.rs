#![allow(dead_code)]

use brst_core::exact::{frac, int, Rational};
use brst_core::models::{
    build_cm_setup, build_hypertoric_setup, build_preprojective_setup, minimal_imaginary_root, presets,
    HypertoricData, ReductionSetup,
};

pub fn hypertoric(m: Vec<Vec<i64>>, c: &[(i64, i64)]) -> ReductionSetup {
    let theta = (0..m.len()).map(|i| frac(1, i as i64 + 1)).collect();
    let c = c.iter().map(|&(a, b)| frac(a, b)).collect();
    build_hypertoric_setup(&HypertoricData { m, theta, c }).unwrap()
}

pub fn m1() -> ReductionSetup {
    hypertoric(vec![vec![1]], &[(1, 3)])
}

pub fn m11() -> ReductionSetup {
    hypertoric(vec![vec![1, 1]], &[(1, 3)])
}

pub fn m2x3() -> ReductionSetup {
    hypertoric(vec![vec![1, 0, 1], vec![0, 1, 1]], &[(1, 3), (2, 7)])
}

/// Generic `θ`, `c` orthogonal to `δ`: powers of two (resp. `1/(i+2)`) off
/// vertex 0, vertex 0 chosen to balance.
pub fn generic_params(delta: &[i64]) -> (Vec<Rational>, Vec<Rational>) {
    let mut theta: Vec<Rational> = (0..delta.len()).map(|i| int(1 << i)).collect();
    let mut c: Vec<Rational> = (0..delta.len()).map(|i| frac(1, i as i64 + 2)).collect();
    for v in [&mut theta, &mut c] {
        let rest: Rational = v.iter().zip(delta).skip(1).map(|(x, &d)| x * int(d)).sum();
        v[0] = -rest / int(delta[0]);
    }
    (theta, c)
}

pub fn preprojective(name: &str) -> ReductionSetup {
    let q = presets::by_name(name).unwrap();
    let delta = minimal_imaginary_root(&q).unwrap();
    let (theta, c) = generic_params(&delta);
    build_preprojective_setup(&q, &theta, &c).unwrap()
}

pub fn cm1() -> ReductionSetup {
    let a1 = presets::affine_a(1).unwrap();
    build_cm_setup(&a1, 1, &[int(1), int(3)], &[frac(1, 3), frac(2, 7)]).unwrap()
}

pub fn shipped() -> Vec<(&'static str, ReductionSetup)> {
    vec![
        ("M=[1]", m1()),
        ("M=[1 1]", m11()),
        ("M=2x3", m2x3()),
        ("A1", preprojective("A1")),
        ("A2", preprojective("A2")),
        ("A3", preprojective("A3")),
        ("A4", preprojective("A4")),
        ("D4", preprojective("D4")),
        ("CM1", cm1()),
    ]
}
