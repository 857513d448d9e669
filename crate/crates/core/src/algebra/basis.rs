use super::ghost::GhostMonomial;
use super::tensor::BrstMonomial;
use super::weyl::WeylMonomial;

/// All exponent vectors of the given length with entry sum exactly `total`,
/// in lexicographically decreasing order.
pub fn exponent_vectors(len: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fill(&mut cur, 0, total, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Weyl monomials of Bernstein degree exactly `degree`.
pub fn weyl_monomials_of_degree(n_vars: usize, degree: u32) -> Vec<WeylMonomial> {
    let mut out: Vec<WeylMonomial> = exponent_vectors(2 * n_vars, degree)
        .into_iter()
        .map(|mut v| {
            let beta = v.split_off(n_vars);
            WeylMonomial::new(v, beta)
        })
        .collect();
    out.sort();
    out
}

/// Weyl monomials of degree `≤ bound` and torus weight `λ`, sorted by
/// `(degree, α, β)`.
pub fn weyl_basis(n_vars: usize, weight: &[i64], weights: &[Vec<i64>], bound: i64) -> Vec<WeylMonomial> {
    if bound < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for k in 0..=bound as u32 {
        out.extend(weyl_monomials_of_degree(n_vars, k).into_iter().filter(|m| weight_matches(m, weights, weight)));
    }
    out
}

fn weight_matches(m: &WeylMonomial, weights: &[Vec<i64>], target: &[i64]) -> bool {
    if weights.is_empty() {
        return target.iter().all(|&t| t == 0);
    }
    m.weight(weights) == target
}

/// Ghost monomials `ψ_S ψ*_T` with `|T| − |S| = n`, sorted by `(S, T)` masks.
pub fn ghost_basis(g_dim: usize, n: i64) -> Vec<GhostMonomial> {
    let full = if g_dim == 64 { u64::MAX } else { (1u64 << g_dim) - 1 };
    let mut out = Vec::new();
    let mut s = 0u64;
    loop {
        let mut t = 0u64;
        loop {
            let m = GhostMonomial::new(s, t);
            if m.degree() == n {
                out.push(m);
            }
            if t == full {
                break;
            }
            t += 1;
        }
        if s == full {
            break;
        }
        s += 1;
    }
    out
}

/// Basis monomials of `C^n` with Bernstein degree `≤ bound` and torus weight
/// `λ`, ordered by `(degree, α, β, S, T)`.
///
/// Ghosts carry no torus weight here; weights apply to the Weyl factor only.
pub fn enumerate_basis(
    n_vars: usize,
    g_dim: usize,
    n: i64,
    weight: &[i64],
    weights: &[Vec<i64>],
    bound: i64,
) -> Vec<BrstMonomial> {
    let ghosts = ghost_basis(g_dim, n);
    if ghosts.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for w in weyl_basis(n_vars, weight, weights, bound) {
        for g in &ghosts {
            out.push(BrstMonomial::new(w.clone(), *g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ghost_degree_zero_bound() {
        let b = enumerate_basis(1, 1, 1, &[0], &[vec![1]], 0);
        assert_eq!(b, vec![BrstMonomial::new(WeylMonomial::one(1), GhostMonomial::new(0, 1))]);
    }

    #[test]
    fn two_variable_weight_zero_count() {
        let w = vec![vec![1], vec![1]];
        let b = enumerate_basis(2, 1, 0, &[0], &w, 2);
        assert_eq!(b.len(), 10);
        let plain: Vec<_> = b.iter().filter(|m| m.ghost == GhostMonomial::ONE).collect();
        assert_eq!(plain.len(), 5);
        let paired: Vec<_> = b.iter().filter(|m| m.ghost == GhostMonomial::new(1, 1)).collect();
        assert_eq!(paired.len(), 5);
        assert_eq!(b[0].weyl.degree(), 0);
        assert_eq!(b[1].weyl.degree(), 0);
    }

    #[test]
    fn negative_bound_is_empty() {
        assert!(enumerate_basis(2, 1, 0, &[0], &[vec![1], vec![1]], -2).is_empty());
    }

    #[test]
    fn ghost_range() {
        assert_eq!(ghost_basis(2, 0).len(), 6);
        assert_eq!(ghost_basis(2, 2).len(), 1);
        assert!(ghost_basis(2, 3).is_empty());
    }

    #[test]
    fn ordering_is_grlex() {
        let w = vec![vec![1], vec![1]];
        let b = enumerate_basis(2, 1, 0, &[0], &w, 4);
        assert!(b.windows(2).all(|p| p[0].grlex_key() < p[1].grlex_key()));
    }
}
