//! Plain-text form of elements, e.g. `3/2 x1^2 d2 ps1 ps*1 - x1 d1 + 1/3`.
//!
//! Indices are 1-based. Terms are separated by standalone `+`/`-` tokens;
//! inside a term an optional rational coefficient is followed by factors
//! `xI[^k]`, `dI[^k]`, `psI`, `ps*I`. Parsing multiplies the factors in the
//! order written, so non-normal-ordered input is accepted.

use num_traits::{One, Signed};

use super::ghost::{GhostElement, GhostMonomial};
use super::tensor::{BrstElement, BrstMonomial};
use super::weyl::{WeylElement, WeylMonomial};
use super::AlgebraError;
use crate::exact::{fmt_rational, parse_rational, Rational};

fn weyl_factors(m: &WeylMonomial, out: &mut Vec<String>) {
    for (prefix, exps) in [("x", &m.alpha), ("d", &m.beta)] {
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push(format!("{prefix}{}", i + 1)),
                _ => out.push(format!("{prefix}{}^{e}", i + 1)),
            }
        }
    }
}

fn ghost_factors(m: &GhostMonomial, out: &mut Vec<String>) {
    out.extend(m.psi_indices().into_iter().map(|i| format!("ps{}", i + 1)));
    out.extend(m.star_indices().into_iter().map(|i| format!("ps*{}", i + 1)));
}

fn render_terms<'a>(terms: impl Iterator<Item = (Vec<String>, &'a Rational)>) -> String {
    let mut s = String::new();
    for (k, (factors, c)) in terms.enumerate() {
        let neg = c.is_negative();
        if k > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push_str("- ");
        }
        let a = c.abs();
        let mut parts = Vec::new();
        if !a.is_one() || factors.is_empty() {
            parts.push(fmt_rational(&a));
        }
        parts.extend(factors);
        s.push_str(&parts.join(" "));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn render_weyl(e: &WeylElement) -> String {
    render_terms(e.terms().iter().map(|(m, c)| {
        let mut f = Vec::new();
        weyl_factors(m, &mut f);
        (f, c)
    }))
}

pub fn render_ghost(e: &GhostElement) -> String {
    render_terms(e.terms().iter().map(|(m, c)| {
        let mut f = Vec::new();
        ghost_factors(m, &mut f);
        (f, c)
    }))
}

pub fn render_brst(e: &BrstElement) -> String {
    render_terms(e.terms().iter().map(|(m, c)| (monomial_factors(m), c)))
}

fn monomial_factors(m: &BrstMonomial) -> Vec<String> {
    let mut f = Vec::new();
    weyl_factors(&m.weyl, &mut f);
    ghost_factors(&m.ghost, &mut f);
    f
}

fn parse_index(s: &str, bound: usize, tok: &str) -> Result<usize, AlgebraError> {
    let i: usize = s.parse().map_err(|_| AlgebraError::Parse(format!("bad index in `{tok}`")))?;
    if i == 0 || i > bound {
        return Err(AlgebraError::Parse(format!("index out of range in `{tok}`")));
    }
    Ok(i - 1)
}

fn parse_factor(tok: &str, n_vars: usize, g_dim: usize) -> Result<BrstElement, AlgebraError> {
    if let Some(rest) = tok.strip_prefix("ps*") {
        let i = parse_index(rest, g_dim, tok)?;
        return Ok(BrstElement::tensor(&WeylElement::one(n_vars), &GhostElement::psi_star(g_dim, i)));
    }
    if let Some(rest) = tok.strip_prefix("ps") {
        let i = parse_index(rest, g_dim, tok)?;
        return Ok(BrstElement::tensor(&WeylElement::one(n_vars), &GhostElement::psi(g_dim, i)));
    }
    let (is_x, rest) = match tok.as_bytes().first() {
        Some(b'x') => (true, &tok[1..]),
        Some(b'd') => (false, &tok[1..]),
        _ => return Err(AlgebraError::Parse(format!("unknown factor `{tok}`"))),
    };
    let (idx, exp) = match rest.split_once('^') {
        Some((i, e)) => {
            (i, e.parse::<u32>().map_err(|_| AlgebraError::Parse(format!("bad exponent in `{tok}`")))?)
        }
        None => (rest, 1),
    };
    let i = parse_index(idx, n_vars, tok)?;
    let mut alpha = vec![0; n_vars];
    let mut beta = vec![0; n_vars];
    if is_x {
        alpha[i] = exp;
    } else {
        beta[i] = exp;
    }
    Ok(BrstElement::tensor(
        &WeylElement::from_monomial(WeylMonomial::new(alpha, beta), Rational::one()),
        &GhostElement::one(g_dim),
    ))
}

/// Parses an element of `C(R)` with the given variable count and ghost dimension.
pub fn parse_brst(s: &str, n_vars: usize, g_dim: usize) -> Result<BrstElement, AlgebraError> {
    let mut total = BrstElement::zero(n_vars, g_dim);
    let mut sign = Rational::one();
    let mut term: Option<BrstElement> = None;
    let mut pending_sign = false;
    for tok in s.split_whitespace() {
        if tok == "+" || tok == "-" {
            if let Some(t) = term.take() {
                total = &total + &t.scale(&sign);
                sign = Rational::one();
            }
            if tok == "-" {
                sign = -sign;
            }
            pending_sign = true;
            continue;
        }
        pending_sign = false;
        let current = term.take().unwrap_or_else(|| BrstElement::one(n_vars, g_dim));
        let next = if tok.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            let r = parse_rational(tok).map_err(|e| AlgebraError::Parse(e.to_string()))?;
            current.scale(&r)
        } else {
            current.mul(&parse_factor(tok, n_vars, g_dim)?)?
        };
        term = Some(next);
    }
    if pending_sign {
        return Err(AlgebraError::Parse("expression ends with a sign".into()));
    }
    if let Some(t) = term {
        total = &total + &t.scale(&sign);
    }
    Ok(total)
}

/// Parses a Weyl algebra element; ghost factors are rejected.
pub fn parse_weyl(s: &str, n_vars: usize) -> Result<WeylElement, AlgebraError> {
    let e = parse_brst(s, n_vars, 0)?;
    Ok(WeylElement::from_terms(n_vars, e.terms().iter().map(|(m, c)| (m.weyl.clone(), c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};

    #[test]
    fn renders_canonical_form() {
        let m = BrstMonomial::new(WeylMonomial::new(vec![2, 0], vec![0, 1]), GhostMonomial::new(0, 1));
        let e = BrstElement::from_monomial(2, 1, m, frac(3, 2));
        assert_eq!(render_brst(&e), "3/2 x1^2 d2 ps*1");
        let w = &WeylElement::x_d(1, 0, 0) + &WeylElement::constant(1, frac(-1, 3));
        assert_eq!(render_weyl(&w), "- 1/3 + x1 d1");
        assert_eq!(render_weyl(&WeylElement::zero(2)), "0");
    }

    #[test]
    fn parse_multiplies_in_order() {
        let w = parse_weyl("d1 x1", 1).unwrap();
        assert_eq!(w, &WeylElement::x_d(1, 0, 0) + &WeylElement::one(1));
        let g = parse_brst("ps*1 ps1", 0, 1).unwrap();
        let want = parse_brst("1 - ps1 ps*1", 0, 1).unwrap();
        assert_eq!(g, want);
        assert_eq!(parse_weyl("-2 x1 + x1", 1).unwrap(), WeylElement::x(1, 0).scale(&int(-1)));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_weyl("x3", 2).is_err());
        assert!(parse_weyl("y1", 2).is_err());
        assert!(parse_weyl("x1 +", 2).is_err());
        assert!(parse_weyl("1/0", 2).is_err());
        assert!(parse_brst("ps1", 1, 0).is_err());
    }

    #[test]
    fn round_trip() {
        let s = "- 1/3 + x1 d1 ps1 ps*2 - 7 x2^3 d1^2";
        let e = parse_brst(s, 2, 2).unwrap();
        assert_eq!(parse_brst(&render_brst(&e), 2, 2).unwrap(), e);
    }
}
