//! One-tie functions, the chamber order on ties, and `W̃` as their ordered
//! ⋆-product.

use super::slopes::SlopeConfig;
use crate::bowcore::{Chamber, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Monomial, RatMonomial, Term, Var};
use crate::shuffle::{star, GradedFunction};

/// `W̃*(1_{kl})` on the dimension vector `(1, …, 1)` of length `k`.
///
/// The function does not depend on `l`. Slopes are required in the K flavor
/// (only `s_1, …, s_{k-1}` are read).
pub fn one_tie(k: usize, flavor: Flavor, slopes: Option<&SlopeConfig>) -> Result<GradedFunction> {
    if k == 0 {
        return Err(Error::Input("tie row index must be at least 1".into()));
    }
    let mut term = Term::one();
    let t = |j: usize| Monomial::var(Var::t(-(j as i64), 1));
    for i in 1..k {
        let ratio = t(i).div(&t(i - 1));
        match flavor {
            Flavor::E => {
                let zk_zi = Monomial::var(Var::z(k)).div(&Monomial::var(Var::z(i)));
                term = term
                    .mul(&Term::atom(ratio.mul(&zk_zi), 1))
                    .mul(&Term::atom(Monomial::hbar(1), 1))
                    .mul(&Term::atom(zk_zi.mul(&Monomial::hbar(-1)), -1));
            }
            Flavor::K => {
                let slopes = slopes.ok_or_else(|| Error::Input("the K flavor needs slopes".into()))?;
                let e = slopes.exponent(i, k)?;
                term = term.mul(&Term::atom(Monomial::hbar(1), 1));
                term.prefactor = term.prefactor.mul(&RatMonomial::power_of(&ratio.mul(&Monomial::hbar(1)), e));
            }
            Flavor::H => term = term.mul(&Term::atom(Monomial::hbar(1), 1)),
        }
    }
    GradedFunction::new(FlavorClass::from_term(flavor, term), vec![1; k])
}

/// The ties of `f` in increasing `<_σ` order: by `σ^{-1}(l)`, then by
/// decreasing `k`.
pub fn tie_order(f: &FixedPoint, sigma: &Chamber) -> Vec<(usize, usize)> {
    let mut ties = f.ties();
    ties.sort_by_key(|&(k, l)| (sigma.position(l), std::cmp::Reverse(k)));
    ties
}

/// `W̃*_σ(f)`: the ⋆-product of the one-tie functions in `<_σ` order.
pub fn wtilde(f: &FixedPoint, sigma: &Chamber, flavor: Flavor, slopes: Option<&SlopeConfig>) -> Result<GradedFunction> {
    if sigma.n() != f.n() {
        return Err(Error::Input(format!("chamber has {} entries, fixed point has {} columns", sigma.n(), f.n())));
    }
    let mut acc = GradedFunction::unit(flavor);
    for (k, _) in tie_order(f, sigma) {
        acc = star(&acc, &one_tie(k, flavor, slopes)?)?;
    }
    Ok(acc)
}
