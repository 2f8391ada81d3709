//! The `W` function `ε*_c · τ*_r · eu*_{c,σ} · W̃*_σ(f)|_{(c,σ)}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::factors::{epsilon_factor, eu_factor, t0_substitution, tau_factor};
use super::slopes::SlopeConfig;
use super::wtilde::wtilde;
use crate::bowcore::{BraneDiagram, Chamber, FixedPoint, NegativeConvention};
use crate::error::{Error, Result};
use crate::expr::{evaluate, AtomKind, EvalCtx, EvalPoint, Flavor, FlavorClass, Substitution};
use crate::shuffle::GradedFunction;

/// Options shared by every `W` computation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabOptions {
    /// Slopes (required for the K flavor).
    pub slopes: Option<SlopeConfig>,
    /// Sign convention of the chamber-negative part.
    pub convention: NegativeConvention,
}

/// `W*_σ(f)` with its factors kept apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabResult {
    /// The variety.
    pub diagram: BraneDiagram,
    /// The fixed point.
    pub fixed_point: FixedPoint,
    /// The chamber.
    pub chamber: Chamber,
    /// The flavor.
    pub flavor: Flavor,
    /// Atom kind of every factor (`theta`, `ahat` or `linear`).
    pub atom_kind: AtomKind,
    /// Options used.
    pub options: StabOptions,
    /// `W̃*_σ(f)` before the `t_0` substitution.
    pub wtilde: GradedFunction,
    /// `ε*_c`.
    pub epsilon: FlavorClass,
    /// `τ*_r`.
    pub tau: FlavorClass,
    /// `eu*_{c,σ}`.
    pub eu: FlavorClass,
    /// The product `W*_σ(f)`, a function of `t_{k<0}`, `a`, `z`, `ℏ`.
    pub class: FlavorClass,
    /// How each stored piece was produced.
    pub provenance: Vec<String>,
}

/// Computes `W*_σ(f)`.
pub fn w_function(f: &FixedPoint, sigma: &Chamber, flavor: Flavor, opts: &StabOptions) -> Result<StabResult> {
    let diagram = f.diagram()?;
    let c = diagram.c().to_vec();
    let wt = wtilde(f, sigma, flavor, opts.slopes.as_ref())?;
    let epsilon = epsilon_factor(&c, flavor);
    let tau = tau_factor(&diagram.left_dims(), flavor);
    let eu = eu_factor(&c, sigma, flavor, opts.convention)?;
    let sub = t0_substitution(&c, sigma)?;
    let restricted = wt.class.apply_substitution(&sub);
    let class = epsilon.mul(&tau)?.mul(&eu)?.mul(&restricted)?.canonicalize();
    let provenance = vec![
        format!("wtilde: star product of one-tie functions in order {:?}", super::wtilde::tie_order(f, sigma)),
        format!("epsilon: charges c = {c:?}"),
        format!("tau: left dimensions {:?}", diagram.left_dims()),
        format!("eu: negative part of T'_D5(c) under the {:?} convention", opts.convention),
        format!("t0: ordered substitution for chamber {sigma}"),
    ];
    Ok(StabResult {
        diagram,
        fixed_point: f.clone(),
        chamber: sigma.clone(),
        flavor,
        atom_kind: flavor.atom_kind(),
        options: opts.clone(),
        wtilde: wt,
        epsilon,
        tau,
        eu,
        class,
        provenance,
    })
}

impl StabResult {
    /// Evaluates the stored product and the product of the stored factors at
    /// `pt`; returns the relative disagreement.
    pub fn provenance_residual(&self, pt: &EvalPoint, ctx: &EvalCtx) -> Result<f64> {
        let sub = t0_substitution(self.diagram.c(), &self.chamber)?;
        let none = Substitution::new();
        let parts = evaluate(&self.epsilon, &none, pt, ctx)?
            * evaluate(&self.tau, &none, pt, ctx)?
            * evaluate(&self.eu, &none, pt, ctx)?
            * evaluate(&self.wtilde.class, &sub, pt, ctx)?;
        let whole: Complex64 = evaluate(&self.class, &none, pt, ctx)?;
        let scale = parts.norm().max(whole.norm());
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok((parts - whole).norm() / scale)
    }

    /// Checks that the flavor matches.
    pub fn expect_flavor(&self, flavor: Flavor) -> Result<()> {
        if self.flavor != flavor {
            return Err(Error::Input(format!("expected a {flavor} class, found {}", self.flavor)));
        }
        Ok(())
    }
}
