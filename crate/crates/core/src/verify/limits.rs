//! Limits between flavors: elliptic to K-theoretic with pinned Kähler
//! parameters, and K-theoretic to cohomological by leading degree.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample::{atom_arguments, point_is_clear, MAX_REDRAWS};
use crate::bowcore::{enumerate_fixed_points, BraneDiagram, Chamber};
use crate::error::{Error, Result};
use crate::expr::eval::{sum_values, term_scale, term_values};
use crate::expr::{class_to_rational, EvalCtx, EvalPoint, Flavor, FlavorClass, Precision, RatMonomial, Substitution, Term, Var};
use crate::stab::{w_function, SlopeConfig, StabOptions};

/// Which ratio of Kähler parameters is pinned to `q^{−s_i}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pinning {
    /// `z_{i+1}/z_i = q^{−s_i}`.
    #[default]
    Ascending,
    /// `z_i/z_{i+1} = q^{−s_i}`.
    Descending,
}

impl std::str::FromStr for Pinning {
    type Err = Error;
    fn from_str(s: &str) -> Result<Pinning> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ascending" => Ok(Pinning::Ascending),
            "descending" => Ok(Pinning::Descending),
            other => Err(Error::Parse(format!("unknown pinning `{other}` (ascending|descending)"))),
        }
    }
}

/// Settings of the limit suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    /// Slopes (drawn from the seed when absent).
    pub slopes: Option<SlopeConfig>,
    /// Nomes, expected to decrease towards 0.
    pub q_list: Vec<Complex64>,
    /// Random points per nome.
    pub points: usize,
    /// Tolerance on the residual at the smallest nome.
    pub tol: f64,
    /// Seed.
    pub seed: u64,
    /// Pinning direction.
    pub pinning: Pinning,
    /// Evaluator precision.
    #[serde(skip)]
    pub precision: Precision,
}

impl Default for LimitOptions {
    fn default() -> LimitOptions {
        LimitOptions {
            slopes: None,
            q_list: vec![Complex64::new(1e-2, 0.0), Complex64::new(1e-3, 0.0), Complex64::new(1e-4, 0.0)],
            points: 10,
            tol: 1e-6,
            seed: 0,
            pinning: Pinning::Ascending,
            precision: Precision::Double,
        }
    }
}

/// Limit results for one fixed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEntry {
    /// 1-based fixed-point ID.
    pub id: usize,
    /// Largest relative `|W^E − W^K|` at each nome.
    pub residuals: Vec<f64>,
    /// Whether the residuals strictly decrease.
    pub monotone: bool,
    /// Fitted exponent `ρ` of `residual ∼ |q|^ρ` between the last two nomes.
    pub rate: f64,
    /// Whether the leading-degree part of `W^K` equals `W^H` exactly.
    pub k_to_h_exact: bool,
}

/// Outcome of `limit_suite`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    /// NS5 charges.
    pub r: Vec<usize>,
    /// D5 charges.
    pub c: Vec<usize>,
    /// Chamber.
    pub chamber: Chamber,
    /// Slopes used.
    pub slopes: SlopeConfig,
    /// Nomes.
    pub q_values: Vec<Complex64>,
    /// Tolerance.
    pub tol: f64,
    /// Per fixed point.
    pub entries: Vec<LimitEntry>,
    /// Every sequence of residuals decreases.
    pub monotone: bool,
    /// Largest residual at the smallest nome.
    pub final_residual: f64,
    /// Every K→H comparison is exact.
    pub k_to_h_exact: bool,
    /// `monotone`, `final_residual < tol` and `k_to_h_exact`.
    pub pass: bool,
}

/// The terms of lowest cohomological degree of `cls` under `x ↦ e^x`:
/// every atom keeps its argument as a linear form and every monomial
/// prefactor becomes 1.
pub fn leading_degree(cls: &FlavorClass) -> FlavorClass {
    let Some(min) = cls.terms.iter().map(|t| t.degree()).min() else {
        return FlavorClass::zero(Flavor::H);
    };
    let terms = cls
        .terms
        .iter()
        .filter(|t| t.degree() == min)
        .map(|t| Term { coeff: t.coeff, prefactor: RatMonomial::one(), factors: t.factors.clone() })
        .collect();
    FlavorClass { flavor: Flavor::H, terms }
}

/// Runs both limits for every fixed point of `X(r, c)` in chamber `sigma`.
pub fn limit_suite(r: &[usize], c: &[usize], sigma: &Chamber, opts: &LimitOptions) -> Result<LimitReport> {
    let diagram = BraneDiagram::new(r.to_vec(), c.to_vec())?;
    let m = diagram.m();
    let slopes = match &opts.slopes {
        Some(s) => s.clone(),
        None => SlopeConfig::from_seed(m, opts.seed),
    };
    if slopes.len() + 1 != m {
        return Err(Error::Input(format!("{m} NS5 branes need {} slopes, got {}", m - 1, slopes.len())));
    }
    let s = slopes.as_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6c69_6d69_7473);
    let mut entries = Vec::new();
    for (idx, f) in enumerate_fixed_points(r, c).iter().enumerate() {
        let e = w_function(f, sigma, Flavor::E, &StabOptions::default())?;
        let k = w_function(f, sigma, Flavor::K, &StabOptions { slopes: Some(slopes.clone()), ..Default::default() })?;
        let h = w_function(f, sigma, Flavor::H, &StabOptions::default())?;
        let k_to_h_exact = class_to_rational(&leading_degree(&k.class))?.equals(&class_to_rational(&h.class)?);
        let t_vars: Vec<Var> = e.class.variables().into_iter().filter(|v| v.is_t()).collect();
        let args_e = atom_arguments([&e.class]);
        let args_k = atom_arguments([&k.class]);
        let mut residuals = Vec::new();
        for &q in &opts.q_list {
            let ctx_e = EvalCtx::with_precision(q, opts.precision);
            let ctx_k = EvalCtx::with_precision(Complex64::new(0.0, 0.0), opts.precision);
            let mut worst = 0.0f64;
            for _ in 0..opts.points.max(1) {
                let mut tries = 0;
                let res = loop {
                    tries += 1;
                    if tries > MAX_REDRAWS {
                        return Err(Error::Resample("no admissible point for the limit check".into()));
                    }
                    let pt = pinned_point(&mut rng, &diagram, &t_vars, &s, q, opts.pinning);
                    if !point_is_clear(&pt, Flavor::K, &args_k, &[ctx_k.q])? || !point_is_clear(&pt, Flavor::E, &args_e, &[q])? {
                        continue;
                    }
                    let none = Substitution::new();
                    let ve = match term_values(&e.class, &none, &pt, &ctx_e) {
                        Err(Error::Resample(_)) => continue,
                        other => other?,
                    };
                    let vk = match term_values(&k.class, &none, &pt, &ctx_k) {
                        Err(Error::Resample(_)) => continue,
                        other => other?,
                    };
                    let xe = sum_values(&ve, ctx_e.precision);
                    let xk = sum_values(&vk, ctx_k.precision);
                    let scale = term_scale(&vk).max(xk.norm());
                    break (xe - xk).norm() / scale;
                };
                worst = worst.max(res);
            }
            residuals.push(worst);
        }
        let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
        let rate = match (residuals.len(), opts.q_list.len()) {
            (n, _) if n >= 2 => {
                let (r0, r1) = (residuals[n - 2], residuals[n - 1]);
                let (q0, q1) = (opts.q_list[n - 2].norm(), opts.q_list[n - 1].norm());
                (r1 / r0).ln() / (q1 / q0).ln()
            }
            _ => f64::NAN,
        };
        entries.push(LimitEntry { id: idx + 1, residuals, monotone, rate, k_to_h_exact });
    }
    let monotone = entries.iter().all(|e| e.monotone);
    let final_residual = entries.iter().filter_map(|e| e.residuals.last().copied()).fold(0.0, f64::max);
    let k_to_h_exact = entries.iter().all(|e| e.k_to_h_exact);
    Ok(LimitReport {
        r: r.to_vec(),
        c: c.to_vec(),
        chamber: sigma.clone(),
        slopes,
        q_values: opts.q_list.clone(),
        tol: opts.tol,
        entries,
        monotone,
        final_residual,
        k_to_h_exact,
        pass: monotone && final_residual < opts.tol && k_to_h_exact,
    })
}

/// A random point with `z` pinned: `log z_{i+1} = log z_i − s_i log q`
/// (ascending) or `log z_{i+1} = log z_i + s_i log q` (descending).
fn pinned_point(rng: &mut ChaCha8Rng, d: &BraneDiagram, t_vars: &[Var], s: &[f64], q: Complex64, pinning: Pinning) -> EvalPoint {
    let mut pt = EvalPoint::random(rng, d.n(), 1, t_vars);
    let log_q = q.ln();
    let mut lz = pt.logs[&Var::z(1)];
    for (i, si) in s.iter().enumerate() {
        lz = match pinning {
            Pinning::Ascending => lz - log_q * *si,
            Pinning::Descending => lz + log_q * *si,
        };
        pt.set_log(Var::z(i + 2), lz);
    }
    pt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stab::one_tie;

    #[test]
    fn single_tie_atoms_are_one_in_both_flavors() {
        let s = SlopeConfig::parse("456/997").unwrap();
        assert_eq!(one_tie(1, Flavor::E, None).unwrap().class, FlavorClass::one(Flavor::E));
        assert_eq!(one_tie(1, Flavor::K, Some(&s)).unwrap().class, FlavorClass::one(Flavor::K));
    }

    #[test]
    fn leading_degree_drops_prefactors() {
        let k = FlavorClass::from_term(Flavor::K, Term::atom(crate::expr::Monomial::var(Var::a(1)), 1));
        let h = leading_degree(&k);
        assert_eq!(h.flavor, Flavor::H);
        assert_eq!(h.terms.len(), 1);
    }
}
