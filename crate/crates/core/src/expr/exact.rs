//! Exact rational arithmetic for the cohomological flavor: linear forms,
//! sparse multivariate polynomials over ℚ and rational functions whose
//! denominators are products of linear forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::class::{Flavor, FlavorClass};
use super::monomial::Monomial;
use super::var::Var;
use crate::error::{Error, Result};

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// A linear form `Σ c_v v` with rational coefficients (no constant term;
/// constants in the cohomological formulas are multiples of ℏ).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm(Vec<(Var, BigRational)>);

impl LinearForm {
    /// The linear form read off a monomial's exponent vector.
    pub fn from_monomial(m: &Monomial) -> LinearForm {
        LinearForm(m.linear_coefficients().into_iter().map(|(v, c)| (v, big(c))).collect())
    }

    /// Whether all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Splits into `(scale, normalized)` with the normalized form's first
    /// coefficient equal to 1.
    pub fn normalized(&self) -> (BigRational, LinearForm) {
        match self.0.first() {
            None => (BigRational::zero(), self.clone()),
            Some((_, c0)) => {
                let c0 = c0.clone();
                let forms = self.0.iter().map(|(v, c)| (*v, c / &c0)).collect();
                (c0, LinearForm(forms))
            }
        }
    }

    /// As a polynomial.
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (v, c) in &self.0 {
            p.add_term(vec![(*v, 1)], c.clone());
        }
        p
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (v, c) in &self.0 {
            let x = point.get(v).ok_or_else(|| Error::Eval(format!("no value for {v}")))?;
            acc += c * x;
        }
        Ok(acc)
    }
}

type PolyMono = Vec<(Var, u32)>;

/// A sparse multivariate polynomial over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<PolyMono, BigRational>);

fn mono_mul(a: &PolyMono, b: &PolyMono) -> PolyMono {
    let mut m: BTreeMap<Var, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *m.entry(v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly(BTreeMap::new())
    }

    /// A constant.
    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// The constant 1.
    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    /// The polynomial `v`.
    pub fn var(v: Var) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![(v, 1)], BigRational::one());
        p
    }

    fn add_term(&mut self, m: PolyMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum.
    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    /// Product.
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Power.
    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// If the polynomial is a constant, returns it.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn degree_in(&self, v: Var) -> u32 {
        self.0
            .keys()
            .map(|m| m.iter().find(|p| p.0 == v).map(|p| p.1).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^d` (a polynomial free of `v`).
    fn coeff_in(&self, v: Var, d: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let e = m.iter().find(|p| p.0 == v).map(|p| p.1).unwrap_or(0);
            if e == d {
                let rest: PolyMono = m.iter().copied().filter(|p| p.0 != v).collect();
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Exact division by a nonzero linear form; `None` if it does not divide.
    pub fn div_linear(&self, l: &LinearForm) -> Option<Poly> {
        let (v, c) = l.0.last()?.clone();
        let lp = l.to_poly();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        loop {
            let d = rem.degree_in(v);
            if d == 0 {
                break;
            }
            let lead = rem.coeff_in(v, d).scale(&(BigRational::one() / &c));
            let step = lead.mul(&Poly::var(v).pow(d - 1));
            quot = quot.add(&step);
            rem = rem.sub(&step.mul(&lp));
        }
        rem.is_zero().then_some(quot)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.0 {
            let mut t = c.clone();
            for (v, e) in m {
                let x = point.get(v).ok_or_else(|| Error::Eval(format!("no value for {v}")))?;
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // Higher degree first; within a degree, Chern roots before a's
        // before z's before ℏ.
        let rank = |v: &Var| match v {
            Var::T(k, i) => (0, -(*k as i64), *i as i64),
            Var::A(j) => (1, *j as i64, 0),
            Var::Z(j) => (2, *j as i64, 0),
            Var::Hbar => (3, 0, 0),
        };
        let mut terms: Vec<(&PolyMono, &BigRational)> = self.0.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| {
            let da: u32 = ma.iter().map(|p| p.1).sum();
            let db: u32 = mb.iter().map(|p| p.1).sum();
            let ka: Vec<_> = ma.iter().map(|p| (rank(&p.0), std::cmp::Reverse(p.1))).collect();
            let kb: Vec<_> = mb.iter().map(|p| (rank(&p.0), std::cmp::Reverse(p.1))).collect();
            db.cmp(&da).then(ka.cmp(&kb))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            let body = match (vars.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{a}*{}", vars.join("*")),
            };
            if i == 0 {
                write!(f, "{}{body}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if neg { "-" } else { "+" })?;
            }
        }
        Ok(())
    }
}

/// A rational function `num / ∏ den_i` with linear-form denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    /// Numerator.
    pub num: Poly,
    /// Denominator factors (normalized linear forms, with repetition).
    pub den: Vec<LinearForm>,
}

impl RationalFunction {
    /// A polynomial.
    pub fn poly(p: Poly) -> RationalFunction {
        RationalFunction { num: p, den: Vec::new() }
    }

    /// The constant `c`.
    pub fn constant(c: BigRational) -> RationalFunction {
        RationalFunction::poly(Poly::constant(c))
    }

    /// Expanded denominator.
    pub fn den_poly(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, l| acc.mul(&l.to_poly()))
    }

    /// Mathematical equality (cross-multiplication).
    pub fn equals(&self, other: &RationalFunction) -> bool {
        self.num.mul(&other.den_poly()) == other.num.mul(&self.den_poly())
    }

    /// Whether this is identically zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduced(&self) -> RationalFunction {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for l in &self.den {
            match num.div_linear(l) {
                Some(q) => num = q,
                None => den.push(l.clone()),
            }
        }
        RationalFunction { num, den }
    }

    /// Sum over a list, using the least common multiple of the factored
    /// denominators.
    pub fn sum(items: &[RationalFunction]) -> RationalFunction {
        let mut lcm: BTreeMap<LinearForm, usize> = BTreeMap::new();
        let count = |den: &[LinearForm]| {
            let mut m: BTreeMap<LinearForm, usize> = BTreeMap::new();
            for l in den {
                *m.entry(l.clone()).or_insert(0) += 1;
            }
            m
        };
        for it in items {
            for (l, k) in count(&it.den) {
                let e = lcm.entry(l).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let mut num = Poly::zero();
        for it in items {
            let own = count(&it.den);
            let mut p = it.num.clone();
            for (l, k) in &lcm {
                let have = own.get(l).copied().unwrap_or(0);
                for _ in have..*k {
                    p = p.mul(&l.to_poly());
                }
            }
            num = num.add(&p);
        }
        let den = lcm.into_iter().flat_map(|(l, k)| std::iter::repeat_n(l, k)).collect();
        RationalFunction { num, den }
    }

    /// Exact value at a rational point (`None` if a denominator vanishes).
    pub fn eval(&self, point: &BTreeMap<Var, BigRational>) -> Result<Option<BigRational>> {
        let mut d = BigRational::one();
        for l in &self.den {
            d *= l.eval(point)?;
        }
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self.den.iter().map(|l| format!("({})", l.to_poly())).collect();
        write!(f, "({}) / ({})", self.num, den.join("*"))
    }
}

/// Converts a cohomological class without structural zeros into an exact
/// rational function.
pub fn class_to_rational(cls: &FlavorClass) -> Result<RationalFunction> {
    if cls.flavor != Flavor::H {
        return Err(Error::Input("exact arithmetic is only available in the H flavor".into()));
    }
    let mut items = Vec::with_capacity(cls.terms.len());
    for t in &cls.terms {
        if !t.prefactor.is_one() {
            return Err(Error::Input("cohomological term with a monomial prefactor".into()));
        }
        let mut scale = big(t.coeff);
        let mut num = Poly::one();
        let mut den = Vec::new();
        for f in &t.factors {
            if f.is_zero() {
                if f.power > 0 {
                    scale = BigRational::zero();
                    continue;
                }
                return Err(Error::Eval("structural zero in a denominator".into()));
            }
            let (c, l) = LinearForm::from_monomial(&f.arg).normalized();
            if l.is_zero() {
                return Err(Error::Eval("zero linear form".into()));
            }
            if f.power > 0 {
                for _ in 0..f.power {
                    scale *= &c;
                    num = num.mul(&l.to_poly());
                }
            } else {
                for _ in 0..(-f.power) {
                    scale /= &c;
                    den.push(l.clone());
                }
            }
        }
        items.push(RationalFunction { num: num.scale(&scale), den });
    }
    Ok(RationalFunction::sum(&items).reduced())
}

/// The linear polynomial `Σ c_v v` with integer coefficients.
pub fn linear_poly(pairs: &[(Var, i64)]) -> Poly {
    let mut p = Poly::zero();
    for (v, c) in pairs {
        p = p.add(&Poly::var(*v).scale(&BigRational::from_integer(BigInt::from(*c))));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::class::{Factor, Term};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn divides_product_of_linear_forms() {
        let x = Poly::var(Var::a(1));
        let y = Poly::var(Var::a(2));
        let l = LinearForm::from_monomial(&Monomial::from_int(&[(Var::a(1), 1), (Var::a(2), -1)]));
        let p = x.sub(&y).mul(&x.add(&y));
        assert_eq!(p.div_linear(&l).unwrap(), x.add(&y));
        assert!(x.mul(&y).div_linear(&l).is_none());
    }

    #[test]
    fn sum_to_one() {
        // a_1/(a_1 + ℏ) + ℏ/(a_1 + ℏ) = 1
        let x = Monomial::var(Var::a(1));
        let xy = Monomial::from_int(&[(Var::a(1), 1), (Var::Hbar, 1)]);
        let mut t1 = Term::atom(x.clone(), 1);
        t1.factors.push(Factor::new(xy.clone(), -1));
        let mut t2 = Term::atom(Monomial::hbar(1), 1);
        t2.factors.push(Factor::new(xy, -1));
        let cls = FlavorClass { flavor: Flavor::H, terms: vec![t1, t2] };
        let r = class_to_rational(&cls).unwrap();
        assert!(r.equals(&RationalFunction::constant(q(1))));
        assert_eq!(r.num.as_constant(), Some(q(1)));
        assert!(r.den.is_empty());
    }

    #[test]
    fn display_of_linear_polynomial() {
        let p = linear_poly(&[(Var::t(-1, 1), 1), (Var::a(2), -1), (Var::Hbar, 1)]);
        assert_eq!(p.to_string(), "t_{-1,1} - a_2 + hbar");
    }
}
