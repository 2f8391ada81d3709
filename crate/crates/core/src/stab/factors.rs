//! The normalization factors `ε*_c`, `τ*_r`, `eu*_{c,σ}` and the ordered
//! substitution of the `t_0` roots.

use crate::bowcore::restriction::decoration;
use crate::bowcore::{d5_character, euler_class, negative_part, Chamber, NegativeConvention};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Monomial, Substitution, Term, Var};

/// `ε*_c = ∏_{k}∏_{j=1}^{c_k−1}∏_{i=1}^{j} e*(ℏ^i)^{-1}`.
pub fn epsilon_factor(c: &[usize], flavor: Flavor) -> FlavorClass {
    let mut term = Term::one();
    for &ck in c {
        for j in 1..ck {
            for i in 1..=j {
                term = term.mul(&Term::atom(Monomial::hbar(i as i32), -1));
            }
        }
    }
    FlavorClass::from_term(flavor, term)
}

/// `τ*_r = ∏_{k<0}∏_{i,j=1}^{d_k} e*(ℏ t_{ki}/t_{kj})^{-1}`, where
/// `left_dims = (d_0, d_{-1}, …)`. The diagonal `i = j` contributes
/// `e*(ℏ)^{-1}`.
pub fn tau_factor(left_dims: &[usize], flavor: Flavor) -> FlavorClass {
    let mut term = Term::one();
    for (j, &d) in left_dims.iter().enumerate().skip(1) {
        let k = -(j as i64);
        for i in 1..=d {
            for l in 1..=d {
                let arg = Monomial::hbar(1).mul(&Monomial::var(Var::t(k, i))).div(&Monomial::var(Var::t(k, l)));
                term = term.mul(&Term::atom(arg, -1));
            }
        }
    }
    FlavorClass::from_term(flavor, term)
}

/// `eu*_{c,σ}`: the Euler class of the chamber-negative part of `T'_D5(c)`.
/// The negative part has multiplicity −1 throughout, so this is the
/// inverse of a product of atoms.
pub fn eu_factor(c: &[usize], sigma: &Chamber, flavor: Flavor, conv: NegativeConvention) -> Result<FlavorClass> {
    euler_class(&negative_part(&d5_character(c), sigma, conv)?, flavor)
}

/// The ordered list `a_{σ(1)}, a_{σ(1)}ℏ^{-1}, …, a_{σ(1)}ℏ^{-c_{σ(1)}+1},
/// …` substituted into `t_{0,1}, …, t_{0,d_0}` in this order.
pub fn t0_substitution(c: &[usize], sigma: &Chamber) -> Result<Substitution> {
    if sigma.n() != c.len() {
        return Err(Error::Input(format!("chamber of size {} for {} D5 charges", sigma.n(), c.len())));
    }
    let mut sub = Substitution::new();
    let mut pos = 1;
    for i in 1..=c.len() {
        let l = sigma.sigma(i);
        for e in 0..c[l - 1] {
            sub.insert(Var::t(0, pos), decoration(l, e));
            pos += 1;
        }
    }
    Ok(sub)
}
