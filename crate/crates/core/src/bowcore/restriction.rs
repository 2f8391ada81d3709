//! Tie decorations and the fixed-point restriction of Chern roots.

use super::bct::FixedPoint;
use crate::error::{Error, Result};
use crate::expr::{Monomial, Substitution, Var};

/// `a_l ℏ^{-e}`.
pub fn decoration(l: usize, e: usize) -> Monomial {
    Monomial::from_int(&[(Var::a(l), 1), (Var::Hbar, -(e as i32))])
}

/// Decorations of the ties over the D3 branes `X_0, X_{-1}, …, X_{-m+1}`
/// (index `j` is brane `X_{-j}`), each level sorted canonically.
///
/// A tie `1_{kl}` covers `X_{-j}` for `j < k`. Among the ties at `A_l` it
/// has rank `p` (0 for the longest, i.e. the largest `k`), and it crosses
/// `j` NS5 branes on its way from `A_l` to `X_{-j}`, so its decoration there
/// is `a_l ℏ^{-(p+j)}`.
pub fn decorations(f: &FixedPoint) -> Vec<Vec<Monomial>> {
    let (m, n) = (f.m(), f.n());
    let mut levels = vec![Vec::new(); m];
    for l in 1..=n {
        let mut rank = 0;
        for k in (1..=m).rev() {
            if !f.get(k, l) {
                continue;
            }
            for (j, level) in levels.iter_mut().enumerate().take(k) {
                level.push(decoration(l, rank + j));
            }
            rank += 1;
        }
    }
    for level in &mut levels {
        level.sort();
    }
    levels
}

/// Restriction `φ_f` on the Chern roots `t_{k,i}` with `k < 0`: the roots of
/// each level are matched with that level's decorations in canonical order.
///
/// The roots `t_{0,i}` are not included; their ordered substitution depends
/// on a chamber (see `stab::t0_substitution`).
pub fn restriction_substitution(f: &FixedPoint) -> Substitution {
    let mut sub = Substitution::new();
    for (j, level) in decorations(f).into_iter().enumerate().skip(1) {
        for (i, m) in level.into_iter().enumerate() {
            sub.insert(Var::t(-(j as i64), i + 1), m);
        }
    }
    sub
}

/// The multiset `ξ_k|_f` for `k ≥ 0`, which is the same at every fixed
/// point: `a_j ℏ^{-i}` for `j > k` and `0 ≤ i < c_j`.
pub fn right_bundle(c: &[usize], k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for (j0, &cj) in c.iter().enumerate().skip(k) {
        for i in 0..cj {
            out.push(decoration(j0 + 1, i));
        }
    }
    out
}

/// Checks that `f` is a fixed point of the diagram with charges `(r, c)`.
pub fn check_fits(f: &FixedPoint, r: &[usize], c: &[usize]) -> Result<()> {
    if f.row_sums() != r || f.col_sums() != c {
        return Err(Error::Input(format!(
            "fixed point {f} has margins ({:?}, {:?}), expected ({r:?}, {c:?})",
            f.row_sums(),
            f.col_sums()
        )));
    }
    Ok(())
}
