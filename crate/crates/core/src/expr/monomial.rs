//! Laurent monomials with half-integer exponents, rational-exponent
//! prefactors, and substitutions of Chern roots.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::var::Var;
use crate::error::{Error, Result};

/// A Laurent monomial `∏ v^{e_v/2}`; exponents are stored doubled so that
/// half-integer powers stay exact.
///
/// The entries are kept sorted by variable with no zero exponents, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    /// The monomial 1.
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    /// The monomial `v`.
    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 2)])
    }

    /// Builds `∏ v^{e}` from integer (not doubled) exponents.
    pub fn from_int(pairs: &[(Var, i32)]) -> Monomial {
        Monomial::from_doubled(pairs.iter().map(|&(v, e)| (v, 2 * e)))
    }

    /// Builds a monomial from doubled exponents, merging repeats.
    pub fn from_doubled<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// `ℏ^e` with an integer exponent.
    pub fn hbar(e: i32) -> Monomial {
        Monomial::from_int(&[(Var::Hbar, e)])
    }

    /// Whether this is the monomial 1 (zero exponent vector).
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Doubled exponent of `v`.
    pub fn doubled(&self, v: Var) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Iterator over `(variable, doubled exponent)`.
    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().copied()
    }

    /// Number of variables with nonzero exponent.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the exponent vector is empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j >= other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i >= self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j]);
                j += 1;
            } else {
                let e = self.0[i].1 + other.0[j].1;
                if e != 0 {
                    out.push((self.0[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    /// Inverse monomial.
    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    /// Integer power.
    pub fn pow(&self, p: i32) -> Monomial {
        if p == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * p)).collect())
    }

    /// Part of the monomial supported on variables satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(Var) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(v, _)| keep(v)).collect())
    }

    /// Part of the monomial in the Chern roots.
    pub fn t_part(&self) -> Monomial {
        self.filter(|v| v.is_t())
    }

    /// Renames variables; variables absent from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Monomial {
        Monomial::from_doubled(
            self.0
                .iter()
                .map(|&(v, e)| (map.get(&v).copied().unwrap_or(v), e)),
        )
    }

    /// Multiplies by `ℏ^{d/2}` (doubled shift).
    pub fn shift_hbar_doubled(&self, d: i32) -> Monomial {
        self.mul(&Monomial::from_doubled([(Var::Hbar, d)]))
    }

    /// Orientation used to identify `x` with `1/x` for odd atoms: returns the
    /// representative whose first nonzero exponent is positive, and whether
    /// the input had to be inverted.
    pub fn oriented(&self) -> (Monomial, bool) {
        match self.0.first() {
            Some(&(_, e)) if e < 0 => (self.inv(), true),
            _ => (self.clone(), false),
        }
    }

    /// Applies a substitution of Chern roots.
    pub fn substitute(&self, sub: &Substitution) -> Monomial {
        let mut pairs: Vec<(Var, i32)> = Vec::with_capacity(self.0.len() + 2);
        for &(v, e) in &self.0 {
            match sub.map.get(&v) {
                Some(m) => {
                    for (w, f) in m.iter() {
                        let prod = f * e;
                        debug_assert!(prod % 2 == 0, "odd exponent product in substitution");
                        pairs.push((w, prod / 2));
                    }
                }
                None => pairs.push((v, e)),
            }
        }
        Monomial::from_doubled(pairs)
    }

    /// `Σ (e_v/2)·value(v)`: the log of the monomial given logs of the
    /// variables (and, read additively, the linear form of the cohomological
    /// flavor).
    pub fn log_value(&self, logs: &BTreeMap<Var, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for &(v, e) in &self.0 {
            let l = logs
                .get(&v)
                .ok_or_else(|| Error::Eval(format!("no value for variable {v}")))?;
            acc += l * (e as f64 / 2.0);
        }
        Ok(acc)
    }

    /// The additive linear form: coefficients `e_v/2` as exact rationals.
    pub fn linear_coefficients(&self) -> Vec<(Var, Rational64)> {
        self.0
            .iter()
            .map(|&(v, e)| (v, Rational64::new(e as i64, 2)))
            .collect()
    }

    /// Integer exponent of `v`, or an error if it is a half-integer.
    pub fn int_exponent(&self, v: Var) -> Option<i32> {
        let d = self.doubled(v);
        (d % 2 == 0).then_some(d / 2)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let show = |v: Var, e: i32| -> String {
            let a = e.abs();
            if a == 2 {
                v.to_string()
            } else if a % 2 == 0 {
                format!("{v}^{}", a / 2)
            } else {
                format!("{v}^({a}/2)")
            }
        };
        let num: Vec<String> = self.0.iter().filter(|p| p.1 > 0).map(|&(v, e)| show(v, e)).collect();
        let den: Vec<String> = self.0.iter().filter(|p| p.1 < 0).map(|&(v, e)| show(v, e)).collect();
        let num_s = if num.is_empty() { "1".to_string() } else { num.join("*") };
        if den.is_empty() {
            write!(f, "{num_s}")
        } else {
            write!(f, "{num_s}/({})", den.join("*"))
        }
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, i32> = self.0.iter().map(|&(v, e)| (v.to_string(), e)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Monomial, D::Error> {
        let map: BTreeMap<String, i32> = BTreeMap::deserialize(d)?;
        let mut pairs = Vec::new();
        for (k, e) in map {
            let v: Var = k.parse().map_err(serde::de::Error::custom)?;
            pairs.push((v, e));
        }
        Ok(Monomial::from_doubled(pairs))
    }
}

/// A monomial with exact rational exponents, used for the slope-dependent
/// prefactors of the K-theoretic flavor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatMonomial(Vec<(Var, Rational64)>);

impl RatMonomial {
    /// The monomial 1.
    pub fn one() -> RatMonomial {
        RatMonomial(Vec::new())
    }

    /// `m^p` for a half-integer monomial `m` and rational `p`.
    pub fn power_of(m: &Monomial, p: Rational64) -> RatMonomial {
        RatMonomial::from_pairs(m.iter().map(|(v, e)| (v, Rational64::new(e as i64, 2) * p)))
    }

    /// Builds from exponent pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (Var, Rational64)>>(pairs: I) -> RatMonomial {
        let mut map: BTreeMap<Var, Rational64> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert_with(Rational64::zero) += e;
        }
        RatMonomial(map.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    /// Whether this is 1.
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterator over exponents.
    pub fn iter(&self) -> impl Iterator<Item = (Var, Rational64)> + '_ {
        self.0.iter().copied()
    }

    /// Product.
    pub fn mul(&self, other: &RatMonomial) -> RatMonomial {
        RatMonomial::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Renames variables.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> RatMonomial {
        RatMonomial::from_pairs(
            self.0
                .iter()
                .map(|&(v, e)| (map.get(&v).copied().unwrap_or(v), e)),
        )
    }

    /// Applies a substitution of Chern roots.
    pub fn substitute(&self, sub: &Substitution) -> RatMonomial {
        let mut pairs = Vec::new();
        for &(v, e) in &self.0 {
            match sub.map.get(&v) {
                Some(m) => pairs.extend(m.iter().map(|(w, f)| (w, Rational64::new(f as i64, 2) * e))),
                None => pairs.push((v, e)),
            }
        }
        RatMonomial::from_pairs(pairs)
    }

    /// Multiplies every exponent of ℏ by adding `d` (rational shift of ℏ).
    pub fn shift_hbar(&self, d: Rational64) -> RatMonomial {
        self.mul(&RatMonomial::from_pairs([(Var::Hbar, d)]))
    }

    /// Exponent of `v`.
    pub fn exponent(&self, v: Var) -> Rational64 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|p| p.1)
            .unwrap_or_else(Rational64::zero)
    }

    /// Logarithm of the value given logs of the variables.
    pub fn log_value(&self, logs: &BTreeMap<Var, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for &(v, e) in &self.0 {
            let l = logs
                .get(&v)
                .ok_or_else(|| Error::Eval(format!("no value for variable {v}")))?;
            acc += l * e.to_f64().unwrap_or(0.0);
        }
        Ok(acc)
    }
}

impl fmt::Display for RatMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if e.is_one() {
                    v.to_string()
                } else if e.is_integer() && !e.is_negative() {
                    format!("{v}^{e}")
                } else {
                    format!("{v}^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Serialize for RatMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self.0.iter().map(|(v, e)| (v.to_string(), e.to_string())).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMonomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RatMonomial, D::Error> {
        let map: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut pairs = Vec::new();
        for (k, e) in map {
            let v: Var = k.parse().map_err(serde::de::Error::custom)?;
            let r: Rational64 = e.parse().map_err(|_| serde::de::Error::custom(format!("bad exponent {e}")))?;
            pairs.push((v, r));
        }
        Ok(RatMonomial::from_pairs(pairs))
    }
}

/// Assignment of monomials to Chern roots.
///
/// Read multiplicatively (`t ↦ a_j ℏ^{-s}`) this is the K/E restriction;
/// read through the log dictionary (`t ↦ a_j − sℏ`) it is the cohomological
/// one. A single representation serves both, so the two always agree.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Substitution {
    /// The assignment.
    pub map: BTreeMap<Var, Monomial>,
}

impl Substitution {
    /// The empty substitution.
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Adds `v ↦ m`.
    pub fn insert(&mut self, v: Var, m: Monomial) {
        self.map.insert(v, m);
    }

    /// Looks up the value of `v`.
    pub fn get(&self, v: Var) -> Option<&Monomial> {
        self.map.get(&v)
    }

    /// Union of two substitutions with disjoint domains.
    pub fn union(&self, other: &Substitution) -> Result<Substitution> {
        let mut out = self.clone();
        for (v, m) in &other.map {
            if out.map.insert(*v, m.clone()).is_some() {
                return Err(Error::Input(format!("variable {v} substituted twice")));
            }
        }
        Ok(out)
    }

    /// Whether `v` is in the domain.
    pub fn contains(&self, v: Var) -> bool {
        self.map.contains_key(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t11() -> Var {
        Var::t(-1, 1)
    }

    #[test]
    fn mul_cancels_to_one() {
        let m = Monomial::from_int(&[(Var::a(1), 2), (Var::Hbar, -1)]);
        assert!(m.mul(&m.inv()).is_one());
        assert_eq!(m.pow(2).doubled(Var::a(1)), 8);
    }

    #[test]
    fn substitution_detects_structural_one() {
        let mut sub = Substitution::new();
        sub.insert(t11(), Monomial::from_int(&[(Var::a(1), 1), (Var::Hbar, -1)]));
        let arg = Monomial::from_int(&[(t11(), 1), (Var::a(1), -1)]);
        assert_eq!(arg.substitute(&sub), Monomial::hbar(-1));
        let arg0 = Monomial::from_int(&[(t11(), 1), (Var::a(1), -1), (Var::Hbar, 1)]);
        assert!(arg0.substitute(&sub).is_one());
    }

    #[test]
    fn half_integer_exponents_stay_exact() {
        let half = Monomial::from_doubled([(Var::Hbar, 1)]);
        assert_eq!(half.mul(&half), Monomial::hbar(1));
        assert_eq!(half.int_exponent(Var::Hbar), None);
    }

    #[test]
    fn orientation_is_an_involution_class_representative() {
        let m = Monomial::from_int(&[(Var::a(1), -1), (Var::a(2), 1)]);
        let (o, flipped) = m.oriented();
        assert!(flipped);
        assert_eq!(o, m.inv());
        assert_eq!(m.inv().oriented(), (o, false));
    }

    #[test]
    fn serde_roundtrip() {
        let m = Monomial::from_doubled([(Var::a(1), 2), (Var::t(-2, 3), -1), (Var::Hbar, 3)]);
        let s = serde_json::to_string(&m).unwrap();
        let back: Monomial = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        let r = RatMonomial::from_pairs([(Var::Hbar, Rational64::new(7, 3))]);
        let back: RatMonomial = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn display_is_readable() {
        let m = Monomial::from_int(&[(Var::a(1), 1), (Var::a(2), -1), (Var::Hbar, 1)]);
        assert_eq!(m.to_string(), "hbar*a_1/(a_2)");
    }
}
