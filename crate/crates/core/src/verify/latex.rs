//! LaTeX and plain-text rendering of expanded identities in the shorthand
//! `(x) = θ(x)`, `a_{ij} = a_i/a_j`, `z_{ij} = z_i/z_j`.

use num_rational::Rational64;
use num_traits::{One, Signed};

use super::mirror::IdentityTerm;
use crate::expr::{Monomial, Var};

/// Exponents of one family of variables, as integers (doubled exponents
/// halved; odd ones are kept as fractions).
fn family(x: &Monomial, pick: impl Fn(Var) -> Option<u16>) -> Vec<(u16, i32)> {
    x.iter().filter_map(|(v, e)| pick(v).map(|i| (i, e))).collect()
}

fn family_latex(name: &str, parts: &[(u16, i32)]) -> String {
    // a_i/a_j with unit exponents prints as a_{ij}.
    if let [(i, e1), (j, e2)] = parts {
        if *e1 == 2 && *e2 == -2 {
            return format!("{name}_{{{i}{j}}}");
        }
        if *e1 == -2 && *e2 == 2 {
            return format!("{name}_{{{j}{i}}}");
        }
    }
    parts
        .iter()
        .map(|&(i, e)| match e {
            2 => format!("{name}_{{{i}}}"),
            _ if e % 2 == 0 => format!("{name}_{{{i}}}^{{{}}}", e / 2),
            _ => format!("{name}_{{{i}}}^{{{e}/2}}"),
        })
        .collect()
}

/// LaTeX for a monomial in `a`, `z`, ℏ.
pub fn monomial_latex(x: &Monomial) -> String {
    if x.is_one() {
        return "1".into();
    }
    let a = family(x, |v| if let Var::A(i) = v { Some(i) } else { None });
    let z = family(x, |v| if let Var::Z(i) = v { Some(i) } else { None });
    let mut out = String::new();
    if !a.is_empty() {
        out.push_str(&family_latex("a", &a));
    }
    if !z.is_empty() {
        out.push_str(&family_latex("z", &z));
    }
    for (v, e) in x.iter() {
        if v == Var::Hbar { out.push_str(&match e {
            2 => "\\hbar".to_string(),
            _ if e % 2 == 0 => format!("\\hbar^{{{}}}", e / 2),
            _ => format!("\\hbar^{{{e}/2}}"),
        }) }
    }
    out
}

fn coeff_latex(c: Rational64, first: bool) -> String {
    let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
    let a = c.abs();
    let body = if a.is_one() {
        String::new()
    } else if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    };
    format!("{sign}{body}")
}

/// The identity `Σ terms = 0` in the shorthand, one term per line.
pub fn identity_latex(terms: &[IdentityTerm]) -> String {
    if terms.is_empty() {
        return "0=0".into();
    }
    let mut lines = Vec::new();
    for (k, t) in terms.iter().enumerate() {
        let mut s = coeff_latex(t.coeff, k == 0);
        for f in &t.factors {
            s.push_str(&format!("({})", monomial_latex(&f.arg)));
            if f.power > 1 {
                s.push_str(&format!("^{}", f.power));
            }
        }
        lines.push(s);
    }
    format!("{}=0", lines.join("\\\\\n"))
}

/// Plain-text form `±theta(x)·…` of the identity, one term per line.
pub fn identity_text(terms: &[IdentityTerm]) -> String {
    if terms.is_empty() {
        return "0 = 0".into();
    }
    let mut lines = Vec::new();
    for t in terms {
        let sign = if t.coeff.is_negative() { "-" } else { "+" };
        let a = t.coeff.abs();
        let mut s = if a.is_one() { sign.to_string() } else { format!("{sign}{a}*") };
        let parts: Vec<String> = t
            .factors
            .iter()
            .map(|f| if f.power > 1 { format!("theta({})^{}", f.arg, f.power) } else { format!("theta({})", f.arg) })
            .collect();
        s.push_str(&parts.join("*"));
        lines.push(s);
    }
    format!("{}\n= 0", lines.join("\n"))
}
