//! Numeric evaluation of flavored classes at sample points.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::class::{Flavor, FlavorClass, Term};
use super::monomial::{Monomial, Substitution};
use super::theta::{ahat_eval, theta_eval};
use super::var::Var;
use crate::error::{Error, Result};

/// Evaluator precision mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    /// Plain double precision.
    #[default]
    Double,
    /// Double precision with a tighter theta truncation and compensated
    /// (Neumaier) summation over terms.
    Extended,
}

impl Precision {
    /// Reads `BOWCALC_PRECISION` (`double` or `extended`); unset means double.
    pub fn from_env() -> Result<Precision> {
        match std::env::var("BOWCALC_PRECISION") {
            Err(_) => Ok(Precision::Double),
            Ok(s) => s.parse(),
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Precision> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::Input(format!("unknown precision mode `{other}`"))),
        }
    }
}

/// Evaluation context: nome and numeric tolerances.
#[derive(Clone, Copy, Debug)]
pub struct EvalCtx {
    /// Elliptic nome, `|q| < 1`.
    pub q: Complex64,
    /// Theta truncation tolerance.
    pub tol: f64,
    /// Denominators smaller than this in modulus trigger a resample.
    pub guard: f64,
    /// Precision mode.
    pub precision: Precision,
}

impl EvalCtx {
    /// Context for nome `q` with default tolerances.
    pub fn new(q: Complex64) -> EvalCtx {
        EvalCtx::with_precision(q, Precision::Double)
    }

    /// Context for nome `q` in the given precision mode.
    pub fn with_precision(q: Complex64, precision: Precision) -> EvalCtx {
        let tol = match precision {
            Precision::Double => 1e-17,
            Precision::Extended => 1e-22,
        };
        EvalCtx { q, tol, guard: 1e-6, precision }
    }
}

/// Values of the variables, stored as logarithms on a fixed branch so that
/// every half-integer or rational power is single-valued.
///
/// In the cohomological flavor the same numbers are read as the additive
/// values of the variables (the log dictionary).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalPoint {
    /// `log(value)` for each variable.
    pub logs: BTreeMap<Var, Complex64>,
}

impl EvalPoint {
    /// Empty point.
    pub fn new() -> EvalPoint {
        EvalPoint::default()
    }

    /// Sets `v` to `exp(log)`.
    pub fn set_log(&mut self, v: Var, log: Complex64) {
        self.logs.insert(v, log);
    }

    /// Sets `v` to a nonzero value using the principal logarithm.
    pub fn set_value(&mut self, v: Var, value: Complex64) {
        self.logs.insert(v, value.ln());
    }

    /// Value of `v`.
    pub fn value(&self, v: Var) -> Option<Complex64> {
        self.logs.get(&v).map(|l| l.exp())
    }

    /// A random point: `a_1..a_n`, `z_1..z_m`, ℏ and the given extra
    /// variables, with moduli in `[0.6, 1.6]` and uniform phases.
    pub fn random<R: Rng>(rng: &mut R, n_a: usize, n_z: usize, extra: &[Var]) -> EvalPoint {
        let mut pt = EvalPoint::new();
        let draw = |rng: &mut R| -> Complex64 {
            let modulus: f64 = rng.gen_range(0.6..1.6);
            let phase: f64 = rng.gen_range(-PI..PI);
            Complex64::new(modulus.ln(), phase)
        };
        pt.set_log(Var::Hbar, draw(rng));
        for j in 1..=n_a {
            pt.set_log(Var::a(j), draw(rng));
        }
        for j in 1..=n_z {
            pt.set_log(Var::z(j), draw(rng));
        }
        for v in extra {
            pt.set_log(*v, draw(rng));
        }
        pt
    }

    /// Extends the point by the values that `sub` assigns to its variables.
    pub fn extended_by(&self, sub: &Substitution) -> Result<EvalPoint> {
        let mut pt = self.clone();
        for (v, m) in &sub.map {
            let l = m.log_value(&self.logs)?;
            pt.logs.insert(*v, l);
        }
        Ok(pt)
    }
}

/// Value of one atom.
pub fn atom_value(flavor: Flavor, arg: &Monomial, pt: &EvalPoint, ctx: &EvalCtx) -> Result<Complex64> {
    let l = arg.log_value(&pt.logs)?;
    Ok(match flavor {
        Flavor::E => theta_eval(l, ctx.q, ctx.tol)?,
        Flavor::K => ahat_eval(l),
        Flavor::H => l,
    })
}

/// Value of a single term.
pub fn term_value(flavor: Flavor, term: &Term, pt: &EvalPoint, ctx: &EvalCtx) -> Result<Complex64> {
    let mut v = Complex64::new(term.coeff.to_f64().unwrap_or(f64::NAN), 0.0);
    if !term.prefactor.is_one() {
        v *= term.prefactor.log_value(&pt.logs)?.exp();
    }
    for f in &term.factors {
        if f.is_zero() {
            if f.power > 0 {
                return Ok(Complex64::zero());
            }
            return Err(Error::Eval("structural zero in a denominator; use the limit-aware restriction".into()));
        }
        let a = atom_value(flavor, &f.arg, pt, ctx)?;
        if f.power < 0 && a.norm() < ctx.guard {
            return Err(Error::Resample(format!("denominator atom {} is {:.3e}", f.arg, a.norm())));
        }
        v *= a.powi(f.power);
    }
    Ok(v)
}

/// Values of all terms (after extending the point by `sub`).
pub fn term_values(cls: &FlavorClass, sub: &Substitution, pt: &EvalPoint, ctx: &EvalCtx) -> Result<Vec<Complex64>> {
    let pt = pt.extended_by(sub)?;
    cls.terms.iter().map(|t| term_value(cls.flavor, t, &pt, ctx)).collect()
}

/// Sum of values, compensated in extended mode.
pub fn sum_values(values: &[Complex64], precision: Precision) -> Complex64 {
    match precision {
        Precision::Double => values.iter().sum(),
        Precision::Extended => {
            let re = neumaier(values.iter().map(|v| v.re));
            let im = neumaier(values.iter().map(|v| v.im));
            Complex64::new(re, im)
        }
    }
}

fn neumaier(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Evaluates `cls` at `pt` after substituting Chern roots by `sub`.
pub fn evaluate(cls: &FlavorClass, sub: &Substitution, pt: &EvalPoint, ctx: &EvalCtx) -> Result<Complex64> {
    let vals = term_values(cls, sub, pt, ctx)?;
    Ok(sum_values(&vals, ctx.precision))
}

/// Largest single-term modulus, used to normalise residuals.
pub fn term_scale(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::class::Factor;
    use num_rational::Rational64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> EvalCtx {
        EvalCtx::new(Complex64::new(0.1, 0.05))
    }

    #[test]
    fn constant_one() {
        let pt = EvalPoint::new();
        let v = evaluate(&FlavorClass::one(Flavor::E), &Substitution::new(), &pt, &ctx()).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hbar_power_in_cohomology() {
        // ℏ^{k-1} at ℏ = 2+i, k = 3.
        let mut pt = EvalPoint::new();
        pt.set_log(Var::Hbar, Complex64::new(2.0, 1.0));
        let cls = FlavorClass::from_term(Flavor::H, Term::atom(Monomial::hbar(1), 2));
        let v = evaluate(&cls, &Substitution::new(), &pt, &ctx()).unwrap();
        assert!((v - Complex64::new(2.0, 1.0).powi(2)).norm() < 1e-14);
    }

    #[test]
    fn delta_function_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (x, z) = (Var::a(1), Var::z(1));
        let pt = EvalPoint::random(&mut rng, 1, 1, &[]);
        let mut term = Term::atom(Monomial::var(x).mul(&Monomial::var(z)), 1);
        term.factors.push(Factor::new(Monomial::var(x), -1));
        term.factors.push(Factor::new(Monomial::var(z), -1));
        let cls = FlavorClass::from_term(Flavor::E, term);
        let v = evaluate(&cls, &Substitution::new(), &pt, &ctx()).unwrap();
        let c = ctx();
        let th = |m: Monomial| atom_value(Flavor::E, &m, &pt, &c).unwrap();
        let direct = th(Monomial::var(x).mul(&Monomial::var(z))) / (th(Monomial::var(x)) * th(Monomial::var(z)));
        assert!((v - direct).norm() <= 1e-13 * direct.norm());
    }

    #[test]
    fn evaluation_is_linear_in_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pt = EvalPoint::random(&mut rng, 2, 2, &[]);
        let a = FlavorClass::from_term(Flavor::E, Term::atom(Monomial::from_int(&[(Var::a(1), 1), (Var::z(2), -1)]), 2));
        let mut bt = Term::atom(Monomial::from_int(&[(Var::a(2), 1), (Var::Hbar, 1)]), -1);
        bt.coeff = Rational64::new(-3, 2);
        let b = FlavorClass::from_term(Flavor::E, bt);
        let s = Substitution::new();
        let c = ctx();
        let sum = evaluate(&a.add(&b).unwrap(), &s, &pt, &c).unwrap();
        let sep = evaluate(&a, &s, &pt, &c).unwrap() + evaluate(&b, &s, &pt, &c).unwrap();
        assert!((sum - sep).norm() <= 1e-12 * sep.norm().max(1.0));
    }

    #[test]
    fn substitution_commutes_with_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = Var::t(-1, 1);
        let pt = EvalPoint::random(&mut rng, 2, 2, &[]);
        let mut sub = Substitution::new();
        sub.insert(t, Monomial::from_int(&[(Var::a(2), 1), (Var::Hbar, -1)]));
        let mut term = Term::atom(Monomial::from_int(&[(t, 1), (Var::a(1), -1)]), 1);
        term.factors.push(Factor::new(Monomial::from_int(&[(t, 1), (Var::z(1), 1), (Var::Hbar, 1)]), -1));
        for flavor in [Flavor::H, Flavor::K, Flavor::E] {
            let cls = FlavorClass::from_term(flavor, term.clone());
            let c = ctx();
            let direct = evaluate(&cls, &sub, &pt, &c).unwrap();
            let applied = evaluate(&cls.apply_substitution(&sub), &Substitution::new(), &pt, &c).unwrap();
            assert!((direct - applied).norm() <= 1e-12 * direct.norm());
        }
    }

    #[test]
    fn extended_sum_agrees_with_plain_sum_on_benign_input() {
        let xs = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25), Complex64::new(3.0, -1.0)];
        let a = sum_values(&xs, Precision::Double);
        let b = sum_values(&xs, Precision::Extended);
        assert!((a - b).norm() < 1e-15);
        let cancel = [Complex64::new(1e16, 0.0), Complex64::new(1.0, 0.0), Complex64::new(-1e16, 0.0)];
        assert_eq!(sum_values(&cancel, Precision::Extended).re, 1.0);
    }
}
