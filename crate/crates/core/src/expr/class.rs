//! Flavored expressions: sums of signed products of theta / â / linear atoms.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, RatMonomial, Substitution};
use super::var::Var;
use crate::error::{Error, Result};

/// Cohomological (`H`), K-theoretic (`K`) or elliptic (`E`) flavor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Flavor {
    /// Equivariant cohomology; atoms are linear forms.
    H,
    /// Equivariant K-theory; atoms are `â(x) = x^{1/2} − x^{-1/2}`.
    K,
    /// Equivariant elliptic cohomology; atoms are theta functions.
    E,
}

impl Flavor {
    /// Name of the atom kind used in serialized output.
    pub fn atom_kind(self) -> AtomKind {
        match self {
            Flavor::H => AtomKind::Linear,
            Flavor::K => AtomKind::Ahat,
            Flavor::E => AtomKind::Theta,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::H => "H",
            Flavor::K => "K",
            Flavor::E => "E",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Flavor> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H" => Ok(Flavor::H),
            "K" => Ok(Flavor::K),
            "E" => Ok(Flavor::E),
            _ => Err(Error::Parse(format!("unknown flavor `{s}` (expected H, K or E)"))),
        }
    }
}

/// Atom kinds, one per flavor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomKind {
    /// `θ(x)`.
    Theta,
    /// `â(x)`.
    Ahat,
    /// The linear form read off the exponent vector of `x`.
    Linear,
}

/// One atom raised to a nonzero integer power.
///
/// `arg` is always a monomial; the flavor decides whether it is read as
/// `θ(arg)`, `â(arg)` or the linear form `Σ e_v v`. All three atoms are odd
/// under `arg ↦ 1/arg`, which is what makes this uniform treatment work.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    /// The argument.
    pub arg: Monomial,
    /// Integer power (negative for denominators).
    pub power: i32,
    /// Set when a substitution turned `arg` into exactly 1: the Chern-root
    /// part of the argument before substitution, i.e. the linear form that
    /// governs how the factor approaches zero under a perturbation of the
    /// substituted variables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<Monomial>,
}

impl Factor {
    /// A factor `atom(arg)^power`.
    pub fn new(arg: Monomial, power: i32) -> Factor {
        Factor { arg, power, zero: None }
    }

    /// Whether the factor is tagged as a structural zero.
    pub fn is_zero(&self) -> bool {
        self.zero.is_some()
    }
}

/// A product `coeff · prefactor · ∏ atom(arg)^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    /// Exact rational coefficient (±1 for every term the formulas produce
    /// directly; limits of balanced 0/0 terms can contribute other values).
    pub coeff: Rational64,
    /// Monomial prefactor with rational exponents (K flavor slope powers).
    pub prefactor: RatMonomial,
    /// The atoms.
    pub factors: Vec<Factor>,
}

impl Term {
    /// The constant term 1.
    pub fn one() -> Term {
        Term { coeff: Rational64::one(), prefactor: RatMonomial::one(), factors: Vec::new() }
    }

    /// A term consisting of a single atom power.
    pub fn atom(arg: Monomial, power: i32) -> Term {
        let mut t = Term::one();
        t.factors.push(Factor::new(arg, power));
        t
    }

    /// Product of two terms (concatenation of factors).
    pub fn mul(&self, other: &Term) -> Term {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        factors.extend(self.factors.iter().cloned());
        factors.extend(other.factors.iter().cloned());
        Term {
            coeff: self.coeff * other.coeff,
            prefactor: self.prefactor.mul(&other.prefactor),
            factors,
        }
    }

    /// Applies `f` to every argument and the prefactor's variables.
    fn map_args(&self, f: impl Fn(&Monomial) -> Monomial, g: impl Fn(&RatMonomial) -> RatMonomial) -> Term {
        Term {
            coeff: self.coeff,
            prefactor: g(&self.prefactor),
            factors: self
                .factors
                .iter()
                .map(|x| Factor { arg: f(&x.arg), power: x.power, zero: x.zero.clone() })
                .collect(),
        }
    }

    /// Merges equal atoms (identifying `x` with `1/x` up to sign) and drops
    /// zero powers. Factors tagged as structural zeros are left untouched.
    pub fn canonicalize(&self) -> Term {
        let mut coeff = self.coeff;
        let mut merged: BTreeMap<Monomial, i32> = BTreeMap::new();
        let mut zeros = Vec::new();
        for f in &self.factors {
            if f.is_zero() {
                zeros.push(f.clone());
                continue;
            }
            let (arg, flipped) = f.arg.oriented();
            if flipped && f.power % 2 != 0 {
                coeff = -coeff;
            }
            *merged.entry(arg).or_insert(0) += f.power;
        }
        let mut factors: Vec<Factor> = merged
            .into_iter()
            .filter(|(_, p)| *p != 0)
            .map(|(arg, power)| Factor::new(arg, power))
            .collect();
        factors.extend(zeros);
        Term { coeff, prefactor: self.prefactor.clone(), factors }
    }

    /// Number of structural zeros in the numerator and in the denominator.
    pub fn zero_orders(&self) -> (i64, i64) {
        let mut num = 0;
        let mut den = 0;
        for f in self.factors.iter().filter(|f| f.is_zero()) {
            if f.power > 0 {
                num += f.power as i64;
            } else {
                den += (-f.power) as i64;
            }
        }
        (num, den)
    }

    /// Sum of atom powers (the cohomological degree of the term).
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|f| f.power as i64).sum()
    }
}

/// A flavored expression: a sum of terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlavorClass {
    /// The flavor shared by all terms.
    pub flavor: Flavor,
    /// The terms, in a deterministic order.
    pub terms: Vec<Term>,
}

impl FlavorClass {
    /// The constant 1.
    pub fn one(flavor: Flavor) -> FlavorClass {
        FlavorClass { flavor, terms: vec![Term::one()] }
    }

    /// The constant 0 (empty sum).
    pub fn zero(flavor: Flavor) -> FlavorClass {
        FlavorClass { flavor, terms: Vec::new() }
    }

    /// A single-term class.
    pub fn from_term(flavor: Flavor, term: Term) -> FlavorClass {
        FlavorClass { flavor, terms: vec![term] }
    }

    /// Product, distributing over terms.
    pub fn mul(&self, other: &FlavorClass) -> Result<FlavorClass> {
        if self.flavor != other.flavor {
            return Err(Error::Input(format!("flavor mismatch {} vs {}", self.flavor, other.flavor)));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        Ok(FlavorClass { flavor: self.flavor, terms })
    }

    /// Sum (concatenation of term lists).
    pub fn add(&self, other: &FlavorClass) -> Result<FlavorClass> {
        if self.flavor != other.flavor {
            return Err(Error::Input(format!("flavor mismatch {} vs {}", self.flavor, other.flavor)));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(FlavorClass { flavor: self.flavor, terms })
    }

    /// Multiplies every term by `c`.
    pub fn scale(&self, c: Rational64) -> FlavorClass {
        FlavorClass {
            flavor: self.flavor,
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: t.coeff * c, ..t.clone() })
                .collect(),
        }
    }

    /// Canonicalizes each term (see [`Term::canonicalize`]).
    pub fn canonicalize(&self) -> FlavorClass {
        FlavorClass { flavor: self.flavor, terms: self.terms.iter().map(Term::canonicalize).collect() }
    }

    /// Renames variables in every argument and prefactor.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> FlavorClass {
        FlavorClass {
            flavor: self.flavor,
            terms: self.terms.iter().map(|t| t.map_args(|m| m.rename(map), |p| p.rename(map))).collect(),
        }
    }

    /// Every variable occurring anywhere in the class.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs = std::collections::BTreeSet::new();
        for t in &self.terms {
            for f in &t.factors {
                vs.extend(f.arg.iter().map(|p| p.0));
            }
            vs.extend(t.prefactor.iter().map(|p| p.0));
        }
        vs.into_iter().collect()
    }

    /// Rewrites every argument by the substitution. Arguments that become
    /// exactly 1 are tagged as structural zeros (with the perturbation
    /// direction recorded) rather than simplified away.
    pub fn apply_substitution(&self, sub: &Substitution) -> FlavorClass {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff,
                prefactor: t.prefactor.substitute(sub),
                factors: t
                    .factors
                    .iter()
                    .map(|f| {
                        let arg = f.arg.substitute(sub);
                        let zero = if f.zero.is_some() {
                            f.zero.clone()
                        } else if arg.is_one() {
                            Some(f.arg.filter(|v| sub.contains(v)))
                        } else {
                            None
                        };
                        Factor { arg, power: f.power, zero }
                    })
                    .collect(),
            })
            .collect();
        FlavorClass { flavor: self.flavor, terms }
    }

    /// The dynamical shift `z_k ↦ ℏ^{-c_k} z_k` (elliptic flavor only; the
    /// identity otherwise). `charges[k-1]` is `c_k`.
    pub fn z_shift(&self, charges: &[i64]) -> FlavorClass {
        if self.flavor != Flavor::E || charges.iter().all(|c| *c == 0) {
            return self.clone();
        }
        let shift = |m: &Monomial| -> Monomial {
            let mut d = 0i64;
            for (k, c) in charges.iter().enumerate() {
                d += c * m.doubled(Var::z(k + 1)) as i64;
            }
            m.shift_hbar_doubled(-(d as i32))
        };
        let shift_r = |p: &RatMonomial| -> RatMonomial {
            let mut d = Rational64::zero();
            for (k, c) in charges.iter().enumerate() {
                d += p.exponent(Var::z(k + 1)) * Rational64::from_integer(*c);
            }
            p.shift_hbar(-d)
        };
        FlavorClass {
            flavor: self.flavor,
            terms: self.terms.iter().map(|t| t.map_args(shift, shift_r)).collect(),
        }
    }

    /// Applies a monomial map to every argument (used for variable swaps
    /// such as the mirror identification).
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial, g: impl Fn(&RatMonomial) -> RatMonomial) -> FlavorClass {
        FlavorClass { flavor: self.flavor, terms: self.terms.iter().map(|t| t.map_args(&f, &g)).collect() }
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether the class is the empty sum.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Plain-text rendering of one atom.
pub fn atom_string(flavor: Flavor, arg: &Monomial) -> String {
    match flavor {
        Flavor::E => format!("theta({arg})"),
        Flavor::K => format!("ahat({arg})"),
        Flavor::H => format!("({})", linear_form_string(arg)),
    }
}

/// `Σ e_v v` rendered additively, e.g. `t_{-1,1} - a_2 + hbar`.
pub fn linear_form_string(arg: &Monomial) -> String {
    // Chern roots first, then a's, then hbar: the reading order of the
    // printed cohomological formulas.
    let rank = |v: &Var| match v {
        Var::T(..) => 0,
        Var::A(_) => 1,
        Var::Z(_) => 2,
        Var::Hbar => 3,
    };
    let mut coeffs = arg.linear_coefficients();
    coeffs.sort_by(|x, y| rank(&x.0).cmp(&rank(&y.0)).then(y.0.cmp(&x.0).reverse()));
    let mut out = String::new();
    for (i, (v, c)) in coeffs.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if a.is_one() { v.to_string() } else { format!("{a}*{v}") };
        if i == 0 {
            out.push_str(&if neg { format!("-{body}") } else { body });
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for FlavorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mut parts = Vec::new();
            let a = t.coeff.abs();
            if !a.is_one() {
                parts.push(a.to_string());
            }
            if !t.prefactor.is_one() {
                parts.push(format!("[{}]", t.prefactor));
            }
            for fac in &t.factors {
                let atom = if fac.is_zero() { format!("{}{{0}}", atom_string(self.flavor, &fac.arg)) } else { atom_string(self.flavor, &fac.arg) };
                if fac.power == 1 {
                    parts.push(atom);
                } else {
                    parts.push(format!("{atom}^{}", fac.power));
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
