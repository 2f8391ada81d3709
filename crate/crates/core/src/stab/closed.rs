//! Closed forms of the stable envelopes of `T*P^{n-1}` for the chamber
//! `a_1 < … < a_n`, used as independent comparators.
//!
//! `T*P^{n-1}` is the bow variety with `r = (n-1, 1)`, `c = (1, …, 1)`; its
//! fixed points are `f_k = 1_{2k} ∪ ⋃_{l≠k} 1_{1l}` and `t = t_{-1,1}`.

use num_rational::Rational64;

use super::slopes::SlopeConfig;
use crate::bowcore::{BraneDiagram, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Monomial, RatMonomial, Term, Var};

/// The diagram of `T*P^{n-1}`.
pub fn projective_diagram(n: usize) -> Result<BraneDiagram> {
    if n < 2 {
        return Err(Error::Input("T*P^{n-1} needs n ≥ 2".into()));
    }
    BraneDiagram::new(vec![n - 1, 1], vec![1; n])
}

/// The fixed point `f_k` of `T*P^{n-1}`.
pub fn projective_fixed_point(n: usize, k: usize) -> Result<FixedPoint> {
    if k == 0 || k > n {
        return Err(Error::Input(format!("fixed point f_{k} of T*P^{} does not exist", n - 1)));
    }
    let mut ties = vec![(2, k)];
    ties.extend((1..=n).filter(|&l| l != k).map(|l| (1, l)));
    FixedPoint::from_ties(2, n, &ties)
}

/// `Stab*(f_k)` in closed form, as a function of `t = t_{-1,1}`:
///
/// * E: `∏_{i<k}θ(a_i/t) · θ(t/a_k·z_2/z_1·ℏ^{k-1})/θ(z_2/z_1·ℏ^{k-2}) · ∏_{i>k}θ(tℏ/a_i)`;
/// * K: `∏_{i<k}â(a_i/t) · (tℏ/a_k)^{⌊s⌋+1/2} · ∏_{i>k}â(tℏ/a_i)`;
/// * H: `∏_{i<k}(a_i − t) · ∏_{i>k}(t − a_i + ℏ)`.
pub fn projective_closed_form(n: usize, k: usize, flavor: Flavor, slopes: Option<&SlopeConfig>) -> Result<FlavorClass> {
    projective_fixed_point(n, k)?;
    let t = Monomial::var(Var::t(-1, 1));
    let a = |i: usize| Monomial::var(Var::a(i));
    let h = Monomial::hbar(1);
    let mut term = Term::one();
    for i in 1..k {
        term = term.mul(&Term::atom(a(i).div(&t), 1));
    }
    for i in k + 1..=n {
        term = term.mul(&Term::atom(t.mul(&h).div(&a(i)), 1));
    }
    match flavor {
        Flavor::E => {
            let z21 = Monomial::var(Var::z(2)).div(&Monomial::var(Var::z(1)));
            let kk = k as i32;
            term = term
                .mul(&Term::atom(t.div(&a(k)).mul(&z21).mul(&Monomial::hbar(kk - 1)), 1))
                .mul(&Term::atom(z21.mul(&Monomial::hbar(kk - 2)), -1));
        }
        Flavor::K => {
            let s = slopes.ok_or_else(|| Error::Input("the K flavor needs slopes".into()))?;
            let e = s.m(1, 2)?.floor() + Rational64::new(1, 2);
            term.prefactor = RatMonomial::power_of(&t.mul(&h).div(&a(k)), e);
        }
        Flavor::H => {}
    }
    Ok(FlavorClass::from_term(flavor, term))
}

/// `Stab^E(f_k)|_{f_k} = ∏_{i<k}θ(a_iℏ/a_k) · ∏_{i>k}θ(a_k/a_i)`.
pub fn projective_diagonal(n: usize, k: usize, flavor: Flavor) -> Result<FlavorClass> {
    projective_fixed_point(n, k)?;
    let a = |i: usize| Monomial::var(Var::a(i));
    let mut term = Term::one();
    for i in 1..k {
        term = term.mul(&Term::atom(a(i).mul(&Monomial::hbar(1)).div(&a(k)), 1));
    }
    for i in k + 1..=n {
        term = term.mul(&Term::atom(a(k).div(&a(i)), 1));
    }
    Ok(FlavorClass::from_term(flavor, term))
}
