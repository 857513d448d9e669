//! Poincaré polynomials of the gauge groups and the predicted BRST
//! multiplicities built from them.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::brst::{CohomologyCell, CohomologyReport};
use crate::models::{minimal_imaginary_root, presets, ModelError, ReductionSetup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerhamError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parameter out of range for {family}: {detail}")]
    BadParameter { family: String, detail: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Integer polynomial in `t`, remembering the factors it was built from so
/// that it can be printed as a product.
#[derive(Debug, Clone, Serialize)]
pub struct PoincarePolynomial {
    coefficients: Vec<u64>,
    #[serde(skip)]
    factors: Vec<(Vec<u64>, u32)>,
}

impl PartialEq for PoincarePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coefficients == other.coefficients
    }
}

impl Eq for PoincarePolynomial {}

fn trim(mut c: Vec<u64>) -> Vec<u64> {
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    if c.is_empty() {
        c.push(0);
    }
    c
}

fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl PoincarePolynomial {
    pub fn one() -> Self {
        Self { coefficients: vec![1], factors: Vec::new() }
    }

    pub fn from_coefficients(c: Vec<u64>) -> Self {
        let c = trim(c);
        let factors = if c == [1] { Vec::new() } else { vec![(c.clone(), 1)] };
        Self { coefficients: c, factors }
    }

    /// `1 + t^{e_1} + t^{e_2} + …` as a single factor.
    pub fn sum_of_powers(exponents: &[u32]) -> Self {
        let top = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut c = vec![0u64; top + 1];
        c[0] = 1;
        for &e in exponents {
            c[e as usize] += 1;
        }
        Self::from_coefficients(c)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficient(&self, m: usize) -> u64 {
        self.coefficients.get(m).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval_at_one(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        c.iter().eq(c.iter().rev())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k += e,
                None => factors.push((f.clone(), *e)),
            }
        }
        factors.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        Self { coefficients: trim(poly_mul(&self.coefficients, &other.coefficients)), factors }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Product form, e.g. `(1 + t)^4 (1 + t^3)`.
    pub fn render_factored(&self) -> String {
        if self.factors.is_empty() {
            return render_poly(&self.coefficients);
        }
        self.factors
            .iter()
            .map(|(f, e)| {
                let base = format!("({})", render_poly(f));
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn render_poly(c: &[u64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(m, &x)| match (m, x) {
            (0, _) => x.to_string(),
            (1, 1) => "t".into(),
            (1, _) => format!("{x} t"),
            (_, 1) => format!("t^{m}"),
            _ => format!("{x} t^{m}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_poly(&self.coefficients))
    }
}

/// `Π_{k=1}^{m} (1 + t^{2k−1})`; `m = 0` gives `1`.
pub fn gl_poincare(m: usize) -> PoincarePolynomial {
    (1..=m).fold(PoincarePolynomial::one(), |acc, k| {
        acc.mul(&PoincarePolynomial::sum_of_powers(&[2 * k as u32 - 1]))
    })
}

/// Poincaré polynomial of a product group.
pub fn kunneth(a: &PoincarePolynomial, b: &PoincarePolynomial) -> PoincarePolynomial {
    a.mul(b)
}

/// Künneth over `GL` blocks of the given sizes.
pub fn blocks_poincare(sizes: &[usize]) -> PoincarePolynomial {
    sizes.iter().fold(PoincarePolynomial::one(), |acc, &m| kunneth(&acc, &gl_poincare(m)))
}

/// Named families with closed-form predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Preprojective, affine `A_ℓ`: `(1 + t)^ℓ`.
    PreprojectiveA { l: usize },
    /// Preprojective, affine `D_ℓ`: `(1 + t)^ℓ (1 + t^3)^{ℓ−3}`.
    PreprojectiveD { l: usize },
    /// Preprojective, affine `E_ℓ`: Künneth over `δ` with vertex 0 dropped.
    PreprojectiveE { l: usize },
    /// Symplectic reflection algebra, type `A_ℓ`, rank `n`:
    /// `(1 + t + t^3 + … + t^{2n−1})^ℓ` as a generating function.
    SraA { l: usize, n: usize },
    /// Hypertoric with a `d`-dimensional torus: `(1 + t)^d`.
    Hypertoric { d: usize },
    /// Explicit `GL` block sizes.
    Blocks { sizes: Vec<usize> },
}

impl Family {
    /// Parses `a`, `d`, `e`, `sra-a`, `hypertoric`; `n` is only read for `sra-a`.
    pub fn from_name(name: &str, l: usize, n: usize) -> Result<Self, DerhamError> {
        Ok(match name {
            "a" | "preprojective-a" => Family::PreprojectiveA { l },
            "d" | "preprojective-d" => Family::PreprojectiveD { l },
            "e" | "preprojective-e" => Family::PreprojectiveE { l },
            "sra-a" => Family::SraA { l, n },
            "hypertoric" => Family::Hypertoric { d: l },
            _ => return Err(DerhamError::UnknownFamily(name.to_string())),
        })
    }

    /// Number of odd generators of `H_DR(G)`, where the family has a group.
    pub fn rank(&self) -> Result<usize, DerhamError> {
        Ok(match self {
            Family::PreprojectiveA { l } | Family::Hypertoric { d: l } => *l,
            Family::PreprojectiveD { l } => 3 + 2 * (l - 3),
            Family::PreprojectiveE { l } => e_blocks(*l)?.iter().sum(),
            Family::SraA { l, n } => (l + 1) * n,
            Family::Blocks { sizes } => sizes.iter().sum(),
        })
    }
}

fn e_blocks(l: usize) -> Result<Vec<usize>, DerhamError> {
    let q = presets::affine_e(l)?;
    let delta = minimal_imaginary_root(&q)?;
    Ok(delta[1..].iter().map(|&x| x as usize).collect())
}

fn bad(family: &str, detail: &str) -> DerhamError {
    DerhamError::BadParameter { family: family.into(), detail: detail.into() }
}

/// Closed-form prediction for a family.
pub fn predicted_poincare(family: &Family) -> Result<PoincarePolynomial, DerhamError> {
    let one_plus_t = PoincarePolynomial::sum_of_powers(&[1]);
    match family {
        Family::PreprojectiveA { l } => {
            if *l == 0 {
                return Err(bad("preprojective-a", "l must be at least 1"));
            }
            Ok(one_plus_t.pow(*l as u32))
        }
        Family::PreprojectiveD { l } => {
            if *l < 4 {
                return Err(bad("preprojective-d", "l must be at least 4"));
            }
            Ok(one_plus_t.pow(*l as u32).mul(&PoincarePolynomial::sum_of_powers(&[3]).pow(*l as u32 - 3)))
        }
        Family::PreprojectiveE { l } => Ok(blocks_poincare(&e_blocks(*l)?)),
        Family::SraA { l, n } => {
            if *n == 0 || *l == 0 {
                return Err(bad("sra-a", "l and n must be at least 1"));
            }
            let exps: Vec<u32> = std::iter::once(1).chain((2..=*n as u32).map(|k| 2 * k - 1)).collect();
            Ok(PoincarePolynomial::sum_of_powers(&exps).pow(*l as u32))
        }
        Family::Hypertoric { d } => Ok(one_plus_t.pow(*d as u32)),
        Family::Blocks { sizes } => Ok(blocks_poincare(sizes)),
    }
}

/// `D_ℓ` through its group `(ℂ*)^3 × GL_2^{ℓ−3}` rather than the generating function.
pub fn d_type_blockwise(l: usize) -> PoincarePolynomial {
    kunneth(&blocks_poincare(&[1, 1, 1]), &gl_poincare(2).pow(l.saturating_sub(3) as u32))
}

/// Prediction from a setup's own group blocks.
pub fn setup_poincare(setup: &ReductionSetup) -> PoincarePolynomial {
    blocks_poincare(&setup.group_blocks)
}

/// Expected table: `coefficient(n) · lc_dims[k]` for `n = 0..=top`, `k = 0..=N`.
pub fn predicted_dimension_table(
    poincare: &PoincarePolynomial,
    lc_dims: &[usize],
    weight: &[i64],
    bound: i64,
) -> CohomologyReport {
    let mut cells = Vec::new();
    for n in 0..=poincare.top_degree() {
        for k in 0..=bound.max(-1) {
            let lc = lc_dims.get(k as usize).copied().unwrap_or(0);
            let dim = poincare.coefficient(n) as usize * lc;
            cells.push(CohomologyCell {
                weight: weight.to_vec(),
                ghost_degree: n as i64,
                bound: k,
                kernel_dim: dim,
                image_dim: 0,
                dim,
                stable: k <= bound - 2,
            });
        }
    }
    CohomologyReport { weight: weight.to_vec(), degree_bound: bound, cells }
}
