//! Virtual torus characters: tangent spaces at fixed points, the D5 part
//! `T'_D5(c)`, chamber-negative parts and their Euler classes.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::bct::{Chamber, FixedPoint};
use super::restriction::{decorations, right_bundle};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass, Monomial, Term, Var};

/// A finitely supported ℤ-combination of monomials in `a_j` and `ℏ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSum {
    /// Coefficient of each monomial; zero coefficients are never stored.
    pub terms: BTreeMap<Monomial, i64>,
}

impl CharacterSum {
    /// The zero character.
    pub fn zero() -> CharacterSum {
        CharacterSum::default()
    }

    /// `Σ_{x ∈ xs} x` with multiplicity.
    pub fn from_monomials(xs: &[Monomial]) -> CharacterSum {
        let mut ch = CharacterSum::zero();
        for x in xs {
            ch.add_term(x.clone(), 1);
        }
        ch
    }

    /// Adds `coeff · x`.
    pub fn add_term(&mut self, x: Monomial, coeff: i64) {
        let e = self.terms.entry(x.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&x);
        }
    }

    /// Sum.
    pub fn add(&self, other: &CharacterSum) -> CharacterSum {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), *c);
        }
        out
    }

    /// `coeff · self`.
    pub fn scale(&self, coeff: i64) -> CharacterSum {
        let mut out = CharacterSum::zero();
        for (x, c) in &self.terms {
            out.add_term(x.clone(), c * coeff);
        }
        out
    }

    /// Tensor product.
    pub fn mul(&self, other: &CharacterSum) -> CharacterSum {
        let mut out = CharacterSum::zero();
        for (x, c) in &self.terms {
            for (y, d) in &other.terms {
                out.add_term(x.mul(y), c * d);
            }
        }
        out
    }

    /// Dual (inverts every monomial).
    pub fn dual(&self) -> CharacterSum {
        let mut out = CharacterSum::zero();
        for (x, c) in &self.terms {
            out.add_term(x.inv(), *c);
        }
        out
    }

    /// Multiplies every monomial by `x`.
    pub fn shift(&self, x: &Monomial) -> CharacterSum {
        self.mul(&CharacterSum::from_monomials(std::slice::from_ref(x)))
    }

    /// Virtual rank (sum of coefficients).
    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Whether the character is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether every coefficient is positive.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Iterates over `(monomial, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(x, c)| (x, *c))
    }
}

impl fmt::Display for CharacterSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(x, c)| match *c {
                1 => x.to_string(),
                -1 => format!("-{x}"),
                c => format!("{c}*{x}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// `Hom(A, B) = A^∨ ⊗ B`.
fn hom(a: &CharacterSum, b: &CharacterSum) -> CharacterSum {
    a.dual().mul(b)
}

fn hbar() -> Monomial {
    Monomial::hbar(1)
}

/// `T_NS5` evaluated on the left bundles `xi[j] = ξ_{-j}`, `j = 0..m` (the
/// last one empty).
fn t_ns5(xi: &[CharacterSum]) -> CharacterSum {
    let mut out = CharacterSum::zero();
    let one_plus_h = CharacterSum::from_monomials(&[Monomial::one(), hbar()]);
    for j in 0..xi.len() - 1 {
        let (k, km1) = (&xi[j], &xi[j + 1]);
        out = out.add(&hom(k, km1).shift(&hbar())).add(&hom(km1, k));
        if j >= 1 {
            out = out.add(&one_plus_h.mul(&hom(k, k)).scale(-1));
        }
    }
    out
}

/// `T_D5` evaluated on the right bundles `xi[k] = ξ_k`, `k = 0..=n`.
fn t_d5(xi: &[CharacterSum]) -> CharacterSum {
    let n = xi.len() - 1;
    let h = hbar();
    let one_minus_h = CharacterSum::from_monomials(&[Monomial::one()]).add(&CharacterSum::from_monomials(std::slice::from_ref(&h)).scale(-1));
    let one_plus_h = CharacterSum::from_monomials(&[Monomial::one(), h.clone()]);
    let mut out = CharacterSum::zero();
    for k in 1..=n {
        let ak = CharacterSum::from_monomials(&[Monomial::var(Var::a(k))]);
        out = out
            .add(&hom(&ak, &xi[k - 1]))
            .add(&hom(&xi[k], &ak).shift(&h))
            .add(&one_minus_h.mul(&hom(&xi[k], &xi[k - 1])))
            .add(&hom(&xi[k - 1], &xi[k - 1]).shift(&h))
            .add(&hom(&xi[k], &xi[k]).shift(&h));
    }
    for x in xi {
        out = out.add(&one_plus_h.mul(&hom(x, x)).scale(-1));
    }
    out
}

/// `T'_D5(c)`: the D5 part of the tangent character with `ξ_{k≥0}`
/// trivialized by the charges. It is the same at every fixed point.
pub fn d5_character(c: &[usize]) -> CharacterSum {
    let xi: Vec<CharacterSum> = (0..=c.len()).map(|k| CharacterSum::from_monomials(&right_bundle(c, k))).collect();
    t_d5(&xi)
}

/// The tangent character `TX|_f = T_NS5 ⊕ T_D5` at the fixed point `f`.
pub fn tangent_character(f: &FixedPoint) -> CharacterSum {
    let mut left: Vec<CharacterSum> = decorations(f).iter().map(|l| CharacterSum::from_monomials(l)).collect();
    left.push(CharacterSum::zero());
    t_ns5(&left).add(&d5_character(&f.col_sums()))
}

/// Which permutation convention decides the sign of a weight `a_i/a_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeConvention {
    /// Negative iff `σ(i) < σ(j)`.
    Literal,
    /// Negative iff `σ⁻¹(i) < σ⁻¹(j)`, i.e. `a_i` precedes `a_j` in the
    /// chamber. This is the reading under which the diagonal axiom holds for
    /// chambers that are not involutions.
    #[default]
    Position,
}

impl std::str::FromStr for NegativeConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<NegativeConvention> {
        match s {
            "literal" => Ok(NegativeConvention::Literal),
            "position" => Ok(NegativeConvention::Position),
            _ => Err(Error::Parse(format!("unknown convention `{s}` (literal|position)"))),
        }
    }
}

/// Splits a monomial into `(i, j, s)` with `x = a_i/a_j · ℏ^s`, or `None` if
/// it is a pure (integral) power of `ℏ`.
fn weight_shape(x: &Monomial) -> Result<Option<(usize, usize, i32)>> {
    let mut plus = None;
    let mut minus = None;
    let mut s = 0;
    for (v, e) in x.iter() {
        match (v, e) {
            (Var::Hbar, e) if e % 2 == 0 => s = e / 2,
            (Var::A(i), 2) if plus.is_none() => plus = Some(i as usize),
            (Var::A(j), -2) if minus.is_none() => minus = Some(j as usize),
            _ => return Err(Error::Input(format!("weight {x} is not of the form a_i/a_j·ℏ^s"))),
        }
    }
    match (plus, minus) {
        (Some(i), Some(j)) => Ok(Some((i, j, s))),
        (None, None) => Ok(None),
        _ => Err(Error::Input(format!("weight {x} is not of the form a_i/a_j·ℏ^s"))),
    }
}

/// The chamber-negative part of `ch`: the weights `a_i/a_j ℏ^s` whose sign
/// test holds under `conv`; A-fixed weights (pure ℏ powers) are dropped.
pub fn negative_part(ch: &CharacterSum, sigma: &Chamber, conv: NegativeConvention) -> Result<CharacterSum> {
    let mut out = CharacterSum::zero();
    for (x, c) in ch.iter() {
        if let Some((i, j, _)) = weight_shape(x)? {
            let neg = match conv {
                NegativeConvention::Literal => sigma.sigma(i) < sigma.sigma(j),
                NegativeConvention::Position => sigma.position(i) < sigma.position(j),
            };
            if neg {
                out.add_term(x.clone(), c);
            }
        }
    }
    Ok(out)
}

/// `e*(ch) = ∏ atom(w)^{mult}` as a one-term class.
pub fn euler_class(ch: &CharacterSum, flavor: Flavor) -> Result<FlavorClass> {
    let mut term = Term::one();
    for (x, c) in ch.iter() {
        if x.is_one() {
            return Err(Error::Input("Euler class of a character with a trivial weight".into()));
        }
        term = term.mul(&Term::atom(x.clone(), c as i32));
    }
    term.coeff = Rational64::from_integer(1);
    Ok(FlavorClass::from_term(flavor, term))
}
