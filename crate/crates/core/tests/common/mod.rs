//! Helpers shared by the integration tests: an independent theta product,
//! exact comparison of rational functions, the displayed identities in a
//! compact shorthand, and the fixture of displayed fixed-point labels.

#![allow(dead_code)]

use std::collections::BTreeMap;

use bowcalc_core::bowcore::FixedPoint;
use bowcalc_core::expr::{Monomial, Poly, RationalFunction, Var};
use bowcalc_core::verify::IdentityTerm;
use num_complex::Complex64;
use serde::Deserialize;

/// `θ(x) = (x^{1/2} − x^{-1/2}) ∏_{n=1}^{80} (1 − qⁿx)(1 − qⁿ/x)` from `log x`.
pub fn theta(log_x: Complex64, q: Complex64) -> Complex64 {
    let x = log_x.exp();
    let mut v = (log_x * 0.5).exp() - (-log_x * 0.5).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..80 {
        qn *= q;
        v *= (Complex64::new(1.0, 0.0) - qn * x) * (Complex64::new(1.0, 0.0) - qn / x);
    }
    v
}

/// `a · den(b) = b · den(a)` after expanding both denominators.
pub fn same_rational(a: &RationalFunction, b: &RationalFunction) -> bool {
    a.num.mul(&b.den_poly()).sub(&b.num.mul(&a.den_poly())).is_zero()
}

/// Whether `got` equals `num / den`.
pub fn is_fraction(got: &RationalFunction, num: &Poly, den: &Poly) -> bool {
    got.num.mul(den).sub(&num.mul(&got.den_poly())).is_zero()
}

/// `Σ c_v v` as a polynomial.
pub fn lin(pairs: &[(Var, i64)]) -> Poly {
    bowcalc_core::expr::exact::linear_poly(pairs)
}

/// Parses one theta argument written as space-separated tokens:
/// `aij` is `a_i/a_j`, `zij` is `z_i/z_j`, `h` is `ℏ`, `hN` is `ℏ^N`.
/// A trailing `^p` on the whole string is returned as the power.
pub fn factor(text: &str) -> (Monomial, u32) {
    let (body, power) = match text.split_once('^') {
        Some((b, p)) => (b, p.parse().expect("power")),
        None => (text, 1),
    };
    let mut m = Monomial::one();
    for tok in body.split_whitespace() {
        let (head, rest) = tok.split_at(1);
        m = match head {
            "h" => m.mul(&Monomial::hbar(if rest.is_empty() { 1 } else { rest.parse().expect("hbar exponent") })),
            "a" | "z" => {
                let digits: Vec<usize> = rest.chars().map(|c| c.to_digit(10).expect("index") as usize).collect();
                assert_eq!(digits.len(), 2, "token {tok}");
                let v = |i: usize| if head == "a" { Var::a(i) } else { Var::z(i) };
                m.mul(&Monomial::var(v(digits[0]))).div(&Monomial::var(v(digits[1])))
            }
            _ => panic!("bad token {tok}"),
        };
    }
    (m, power)
}

/// A term as a sorted list of oriented arguments (with repetition) and the
/// sign picked up from the coefficient and from orienting odd factors.
pub type Oriented = (Vec<Monomial>, i32);

fn orient(sign: i32, factors: impl IntoIterator<Item = (Monomial, u32)>) -> Oriented {
    let mut sign = sign;
    let mut args = Vec::new();
    for (m, p) in factors {
        let (o, flipped) = m.oriented();
        if flipped && p % 2 == 1 {
            sign = -sign;
        }
        for _ in 0..p {
            args.push(o.clone());
        }
    }
    args.sort();
    (args, sign)
}

/// A displayed identity: one `(sign, factors)` pair per term.
pub fn displayed(terms: &[(i32, &[&str])]) -> Vec<Oriented> {
    let mut out: Vec<Oriented> = terms.iter().map(|(s, fs)| orient(*s, fs.iter().map(|f| factor(f)))).collect();
    out.sort();
    out
}

/// Computed identity terms in the same normal form.
pub fn computed(terms: &[IdentityTerm]) -> Vec<Oriented> {
    let mut out: Vec<Oriented> = terms
        .iter()
        .map(|t| {
            let s = if *t.coeff.numer() > 0 { 1 } else { -1 };
            assert!(*t.coeff.denom() == 1 && t.coeff.numer().abs() == 1, "non-unit coefficient");
            orient(s, t.factors.iter().map(|f| (f.arg.clone(), f.power)))
        })
        .collect();
    out.sort();
    out
}

/// Whether two identities agree term by term up to one overall sign.
pub fn same_identity(a: &[Oriented], b: &[Oriented]) -> bool {
    let flip = |v: &[Oriented]| {
        let mut w: Vec<Oriented> = v.iter().map(|(m, s)| (m.clone(), -s)).collect();
        w.sort();
        w
    };
    a == b || a == flip(b).as_slice()
}

/// Displayed data for `X(r=(1,1,2,1), c=(2,2,1))`.
#[derive(Deserialize)]
pub struct DisplayedLabels {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub count: usize,
    pub matrices: BTreeMap<String, Vec<Vec<u8>>>,
    pub hasse_edges: Vec<(usize, usize)>,
}

impl DisplayedLabels {
    pub fn load() -> DisplayedLabels {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/displayed_labels.json");
        serde_json::from_str(&std::fs::read_to_string(path).expect("fixture")).expect("fixture json")
    }

    /// The displayed matrix of label `p`.
    pub fn matrix(&self, p: usize) -> FixedPoint {
        FixedPoint::from_rows(self.matrices[&p.to_string()].clone()).expect("matrix")
    }
}

/// Our 1-based ID of the displayed label `p` on the running example.
pub fn id_of_label(p: usize) -> usize {
    13 - p
}
