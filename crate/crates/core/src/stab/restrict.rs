//! Term-by-term restriction of `W` to a fixed point, with exact
//! zero-order counting and first-order limits for balanced `0/0` terms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bowcore::{restriction_substitution, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::eval::{sum_values, term_scale, term_values};
use crate::expr::exact::RationalFunction;
use crate::expr::{class_to_rational, EvalCtx, EvalPoint, Flavor, FlavorClass, Monomial, Substitution, Term, Var};

/// Relative agreement required between the two perturbation directions.
pub const DIRECTION_TOL: f64 = 1e-6;

/// A restricted class with every structural zero resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Restricted {
    /// The restriction, computed along the first perturbation direction.
    pub class: FlavorClass,
    /// The same along a second direction, present when some term was a
    /// balanced `0/0` (only then does the direction matter term by term).
    pub alt: Option<FlavorClass>,
    /// Terms dropped because they vanish to positive order.
    pub vanished: usize,
    /// Balanced terms resolved by a first-order limit.
    pub balanced: usize,
}

/// Restricts `w` (a function of the roots `t_{k<0}`) to the fixed point `g`.
///
/// Per term: with `n` structural zeros upstairs and `d` downstairs, the
/// term is dropped when `n > d`, is a pole error when `n < d`, and when
/// `n = d > 0` each zero atom `atom(x)` is replaced by the derivative
/// direction `L(u) = Σ e_v u_v` of `log x` along `t_v ↦ t_v e^{εu_v}`. All
/// three atoms have the same unit slope at `x = 1` up to a common constant
/// that cancels when the orders balance, so this is the exact limit along
/// the direction `u`.
pub fn restrict_class(w: &FlavorClass, g: &FixedPoint, seed: u64) -> Result<Restricted> {
    let sub = restriction_substitution(g);
    let applied = w.apply_substitution(&sub);
    let vars: Vec<Var> = sub.map.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1 = draw_direction(&mut rng, &vars);
    let u2 = draw_direction(&mut rng, &vars);
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut vanished = 0;
    let mut balanced = 0;
    for (idx, t) in applied.terms.iter().enumerate() {
        let (num, den) = t.zero_orders();
        if num > den {
            vanished += 1;
            continue;
        }
        if num < den {
            return Err(Error::Pole { term: idx, ord_num: num, ord_den: den });
        }
        if num == 0 {
            first.push(t.clone());
            second.push(t.clone());
            continue;
        }
        balanced += 1;
        first.push(resolve(t, &u1)?);
        second.push(resolve(t, &u2)?);
    }
    let class = FlavorClass { flavor: w.flavor, terms: first };
    let alt = (balanced > 0).then_some(FlavorClass { flavor: w.flavor, terms: second });
    Ok(Restricted { class, alt, vanished, balanced })
}

fn draw_direction(rng: &mut ChaCha8Rng, vars: &[Var]) -> BTreeMap<Var, i64> {
    vars.iter().map(|v| (*v, rng.gen_range(1..=997))).collect()
}

fn slope(zero: &Monomial, u: &BTreeMap<Var, i64>) -> Rational64 {
    zero.iter()
        .map(|(v, e)| Rational64::new(e as i64, 2) * Rational64::from_integer(u.get(&v).copied().unwrap_or(0)))
        .fold(Rational64::zero(), |a, b| a + b)
}

fn resolve(t: &Term, u: &BTreeMap<Var, i64>) -> Result<Term> {
    let mut out = Term { coeff: t.coeff, prefactor: t.prefactor.clone(), factors: Vec::new() };
    for f in &t.factors {
        match &f.zero {
            None => out.factors.push(f.clone()),
            Some(z) => {
                let l = slope(z, u);
                if l.is_zero() {
                    return Err(Error::Limit(format!("perturbation direction is tangent to the zero of {}", f.arg)));
                }
                let mut p = Rational64::one();
                for _ in 0..f.power.unsigned_abs() {
                    p *= l;
                }
                out.coeff = if f.power > 0 { out.coeff * p } else { out.coeff / p };
            }
        }
    }
    Ok(out)
}

impl Restricted {
    /// Whether the restriction is the empty sum (every term vanished).
    pub fn is_structurally_zero(&self) -> bool {
        self.class.terms.is_empty()
    }

    /// Value at `pt` and the largest single-term modulus. With two
    /// directions present they must agree to `DIRECTION_TOL` relative.
    pub fn value(&self, pt: &EvalPoint, ctx: &EvalCtx) -> Result<(Complex64, f64)> {
        let none = Substitution::new();
        let vals = term_values(&self.class, &none, pt, ctx)?;
        let v = sum_values(&vals, ctx.precision);
        let scale = term_scale(&vals);
        if let Some(alt) = &self.alt {
            let vals2 = term_values(alt, &none, pt, ctx)?;
            let v2 = sum_values(&vals2, ctx.precision);
            let s = scale.max(term_scale(&vals2));
            if (v - v2).norm() > DIRECTION_TOL * s.max(f64::MIN_POSITIVE) {
                return Err(Error::Limit(format!(
                    "balanced limit depends on the direction: {v} vs {v2} (term scale {s:.3e})"
                )));
            }
        }
        Ok((v, scale))
    }

    /// The exact rational function (cohomological flavor); with two
    /// directions both must give the same function.
    pub fn rational(&self) -> Result<RationalFunction> {
        if self.class.flavor != Flavor::H {
            return Err(Error::Input("exact restriction needs the H flavor".into()));
        }
        let r = class_to_rational(&self.class)?;
        if let Some(alt) = &self.alt {
            let r2 = class_to_rational(alt)?;
            if !r.equals(&r2) {
                return Err(Error::Limit(format!("balanced limit depends on the direction: {r} vs {r2}")));
            }
        }
        Ok(r)
    }
}
