//! Numerical checks of the wheel conditions and of level symmetry.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graded::GradedFunction;
use crate::error::{Error, Result};
use crate::expr::eval::{sum_values, term_scale, term_values};
use crate::expr::{EvalCtx, EvalPoint, Substitution, Var};

/// Which neighbouring level a wheel specialization pairs with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WheelFamily {
    /// `t_{L,a} = t_{L+1,b} = ℏ t_{L,c}`.
    Up,
    /// `t_{L,a} = t_{L-1,b} = ℏ^{-1} t_{L,c}`.
    Down,
}

/// One wheel specialization: level `L = -j` and indices `a ≠ c` at `L`, `b`
/// at the neighbouring level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelSite {
    /// Family.
    pub family: WheelFamily,
    /// The level `L` (negative).
    pub level: i64,
    /// Index `a` at level `L`.
    pub a: usize,
    /// Index `b` at the neighbouring level.
    pub b: usize,
    /// Index `c` at level `L`.
    pub c: usize,
}

/// Outcome of a wheel or symmetry check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Number of specializations tried.
    pub trials: usize,
    /// Largest `|f|` seen.
    pub max_abs: f64,
    /// Largest `|f|` divided by the largest single-term modulus.
    pub max_residual: f64,
    /// Whether `max_residual` is below the tolerance.
    pub pass: bool,
    /// The worst site, when any was tried.
    pub worst: Option<WheelSite>,
}

/// Every wheel site of the dimension vector.
pub fn wheel_sites(dims: &[usize]) -> Vec<WheelSite> {
    let dim = |j: i64| -> usize { if j < 0 { 0 } else { dims.get(j as usize).copied().unwrap_or(0) } };
    let mut out = Vec::new();
    for j in 1..dims.len() as i64 {
        let d = dim(j);
        for a in 1..=d {
            for c in (1..=d).filter(|&c| c != a) {
                for b in 1..=dim(j - 1) {
                    out.push(WheelSite { family: WheelFamily::Up, level: -j, a, b, c });
                }
                for b in 1..=dim(j + 1) {
                    out.push(WheelSite { family: WheelFamily::Down, level: -j, a, b, c });
                }
            }
        }
    }
    out
}

fn draw<R: Rng>(rng: &mut R, f: &GradedFunction, n_a: usize, n_z: usize) -> EvalPoint {
    EvalPoint::random(rng, n_a, n_z, &f.t_vars())
}

fn counts(f: &GradedFunction) -> (usize, usize) {
    let mut n_a = 0;
    let mut n_z = 0;
    for v in f.class.variables() {
        match v {
            Var::A(j) => n_a = n_a.max(j as usize),
            Var::Z(j) => n_z = n_z.max(j as usize),
            _ => {}
        }
    }
    (n_a, n_z)
}

/// Evaluates `f` at `pt`, returning the value and the largest term modulus.
/// Resamples are reported as errors so callers can redraw.
fn value(f: &GradedFunction, pt: &EvalPoint, ctx: &EvalCtx) -> Result<(Complex64, f64)> {
    let vals = term_values(&f.class, &Substitution::new(), pt, ctx)?;
    Ok((sum_values(&vals, ctx.precision), term_scale(&vals)))
}

fn specialize(pt: &mut EvalPoint, site: &WheelSite) {
    let l = site.level;
    let base = pt.logs[&Var::t(l, site.c)];
    let h = pt.logs[&Var::Hbar];
    let (other, shifted) = match site.family {
        WheelFamily::Up => (Var::t(l + 1, site.b), base + h),
        WheelFamily::Down => (Var::t(l - 1, site.b), base - h),
    };
    pt.set_log(Var::t(l, site.a), shifted);
    pt.set_log(other, shifted);
}

/// Evaluates `f` at `trials` random points of every wheel site (in the log
/// dictionary, so the cohomological flavor gets the additive version).
///
/// At a wheel site every term may vanish on its own, so the residual is
/// `|f|` at the site divided by the largest term modulus at the generic
/// point the site was specialized from.
///
/// A site whose specialization meets a pole is redrawn up to 20 times.
pub fn wheel_check<R: Rng>(f: &GradedFunction, trials: usize, tol: f64, rng: &mut R, ctx: &EvalCtx) -> Result<CheckReport> {
    let (n_a, n_z) = counts(f);
    let mut report = CheckReport { trials: 0, max_abs: 0.0, max_residual: 0.0, pass: true, worst: None };
    for site in wheel_sites(&f.dims) {
        for _ in 0..trials {
            let mut tries = 0;
            let (v, scale) = loop {
                let generic = draw(rng, f, n_a, n_z);
                let mut pt = generic.clone();
                specialize(&mut pt, &site);
                match (value(f, &generic, ctx), value(f, &pt, ctx)) {
                    (Ok((_, scale)), Ok((v, _))) => break (v, scale),
                    (Err(Error::Resample(_)), _) | (_, Err(Error::Resample(_))) if tries < 20 => tries += 1,
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            };
            report.trials += 1;
            let res = if scale > 0.0 { v.norm() / scale } else { 0.0 };
            report.max_abs = report.max_abs.max(v.norm());
            if res >= report.max_residual {
                report.max_residual = res;
                report.worst = Some(site);
            }
        }
    }
    report.pass = report.max_residual < tol;
    Ok(report)
}

/// Checks symmetry in each level `k < 0` by comparing `f` at random points
/// and at the same points with two roots of one level swapped.
pub fn symmetry_check<R: Rng>(f: &GradedFunction, trials: usize, tol: f64, rng: &mut R, ctx: &EvalCtx) -> Result<CheckReport> {
    let (n_a, n_z) = counts(f);
    let mut report = CheckReport { trials: 0, max_abs: 0.0, max_residual: 0.0, pass: true, worst: None };
    for (j, &d) in f.dims.iter().enumerate().skip(1) {
        let l = -(j as i64);
        for x in 1..d {
            for _ in 0..trials {
                let mut tries = 0;
                let (diff, scale) = loop {
                    let pt = draw(rng, f, n_a, n_z);
                    let mut swapped = pt.clone();
                    swapped.set_log(Var::t(l, x), pt.logs[&Var::t(l, x + 1)]);
                    swapped.set_log(Var::t(l, x + 1), pt.logs[&Var::t(l, x)]);
                    match (value(f, &pt, ctx), value(f, &swapped, ctx)) {
                        (Ok((u, s1)), Ok((w, s2))) => break (u - w, s1.max(s2)),
                        (Err(Error::Resample(_)), _) | (_, Err(Error::Resample(_))) if tries < 20 => tries += 1,
                        (Err(e), _) | (_, Err(e)) => return Err(e),
                    }
                };
                report.trials += 1;
                report.max_abs = report.max_abs.max(diff.norm());
                let res = if scale > 0.0 { diff.norm() / scale } else { 0.0 };
                report.max_residual = report.max_residual.max(res);
            }
        }
    }
    report.pass = report.max_residual < tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Flavor, FlavorClass, Monomial, Term};
    use crate::shuffle::star::star;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(k: i64, i: usize) -> Monomial {
        Monomial::var(Var::t(k, i))
    }

    fn ctx() -> EvalCtx {
        EvalCtx::new(Complex64::new(0.1, 0.05))
    }

    #[test]
    fn site_enumeration() {
        // d = (1, 2, 1): level -1 has a ≠ c (2 ordered pairs), b ∈ level 0 or -2.
        let sites = wheel_sites(&[1, 2, 1]);
        assert_eq!(sites.len(), 4);
        assert!(wheel_sites(&[3, 1, 1]).is_empty());
    }

    #[test]
    fn non_wheel_function_fails() {
        // θ(t_{-1,1}/t_{-2,1}) θ(t_{-1,2}/t_{-2,1}) does not vanish on the Up family.
        let term = Term::atom(t(-1, 1).div(&t(-2, 1)), 1).mul(&Term::atom(t(-1, 2).div(&t(-2, 1)), 1));
        let f = GradedFunction::new(FlavorClass::from_term(Flavor::E, term), vec![1, 2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = wheel_check(&f, 3, 1e-9, &mut rng, &ctx()).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.worst.unwrap().family, WheelFamily::Up);
    }

    #[test]
    fn products_of_rank_one_pieces_satisfy_wheels() {
        let one = GradedFunction::new(FlavorClass::one(Flavor::E), vec![1, 1]).unwrap();
        let two = star(&one, &one).unwrap();
        let three = star(&two, &one).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in [&two, &three] {
            let rep = wheel_check(f, 4, 1e-9, &mut rng, &ctx()).unwrap();
            assert!(rep.pass, "{rep:?}");
            let sym = symmetry_check(f, 4, 1e-9, &mut rng, &ctx()).unwrap();
            assert!(sym.pass, "{sym:?}");
        }
    }

    #[test]
    fn asymmetric_function_is_detected() {
        let f = GradedFunction::new(FlavorClass::from_term(Flavor::H, Term::atom(t(-1, 1), 1)), vec![0, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(!symmetry_check(&f, 2, 1e-9, &mut rng, &ctx()).unwrap().pass);
    }
}
