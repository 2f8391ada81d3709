//! Theta-function identities from 3d mirror symmetry.
//!
//! For fixed points `f, g` of `X(r, c)` (with `m` NS5 and `n` D5 branes) the
//! identity is
//!
//! `W(f)|_g / W(g)|_g = (−1)^{#f+#g} · W(g!)|_{f!} / W(f!)|_{f!}`
//!
//! with the right side computed on the mirror variety and its variables
//! renamed by `a!_j ↦ z_{m+1−j}`, `z!_i ↦ a_{n+1−i}` and optionally
//! `ℏ ↦ ℏ⁻¹`. Both sides use the identity chamber and the elliptic flavor.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample::{atom_arguments, draw_point, with_resample};
use super::variety::Variety;
use crate::bowcore::{BraneDiagram, Chamber, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::eval::{evaluate, sum_values, term_scale, term_values};
use crate::expr::{EvalCtx, EvalPoint, Factor, Flavor, FlavorClass, Monomial, Precision, RatMonomial, Substitution, Term, Var};
use crate::stab::{Restricted, StabOptions};

/// Whether the identification of variables also inverts ℏ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HbarSwap {
    /// `ℏ ↦ ℏ⁻¹`.
    On,
    /// ℏ unchanged.
    Off,
    /// Try `On` first and fall back to `Off` if it does not certify.
    #[default]
    Auto,
}

impl std::str::FromStr for HbarSwap {
    type Err = Error;
    fn from_str(s: &str) -> Result<HbarSwap> {
        match s.trim().to_ascii_lowercase().as_str() {
            "on" => Ok(HbarSwap::On),
            "off" => Ok(HbarSwap::Off),
            "auto" => Ok(HbarSwap::Auto),
            other => Err(Error::Parse(format!("unknown hbar swap `{other}` (on|off|auto)"))),
        }
    }
}

/// Certification settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorOptions {
    /// Sample points per nome.
    pub points: usize,
    /// Nomes.
    pub q_list: Vec<Complex64>,
    /// Relative residual tolerance.
    pub tol: f64,
    /// Seed of the sample points and limit directions.
    pub seed: u64,
    /// ℏ convention.
    pub hbar: HbarSwap,
    /// Evaluator precision.
    #[serde(skip)]
    pub precision: Precision,
}

impl Default for MirrorOptions {
    fn default() -> MirrorOptions {
        MirrorOptions {
            points: 20,
            q_list: default_nomes(),
            tol: 1e-8,
            seed: 0,
            hbar: HbarSwap::Auto,
            precision: Precision::Double,
        }
    }
}

/// The nomes `0.05`, `0.1 + 0.1i`, `0.3`.
pub fn default_nomes() -> Vec<Complex64> {
    vec![Complex64::new(0.05, 0.0), Complex64::new(0.1, 0.1), Complex64::new(0.3, 0.0)]
}

/// `θ(arg)^power` in an expanded identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaFactor {
    /// Argument (doubled exponents when serialized).
    pub arg: Monomial,
    /// Positive power.
    pub power: u32,
}

/// `coeff · ∏ θ(arg)^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTerm {
    /// Rational coefficient (±1 in every identity seen so far).
    pub coeff: Rational64,
    /// Factors, sorted by argument.
    pub factors: Vec<ThetaFactor>,
}

impl IdentityTerm {
    /// Number of theta factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|f| f.power).sum()
    }

    /// The term as a one-term elliptic class.
    pub fn to_term(&self) -> Term {
        Term {
            coeff: self.coeff,
            prefactor: RatMonomial::one(),
            factors: self.factors.iter().map(|f| Factor::new(f.arg.clone(), f.power as i32)).collect(),
        }
    }
}

/// A restricted ratio `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    /// `W(·)|_·` off the diagonal.
    pub numerator: Restricted,
    /// The diagonal restriction.
    pub denominator: Restricted,
    /// The Euler class the diagonal restriction equals (one term), used to
    /// clear denominators.
    pub diagonal: FlavorClass,
}

/// Outcome of the numeric certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    /// Points evaluated per nome.
    pub points: usize,
    /// Nomes used.
    pub q_values: Vec<Complex64>,
    /// Largest `|Σ terms| / max |term|` of the expanded identity.
    pub max_residual: f64,
    /// Largest `|LHS − RHS| / scale` of the ratio form.
    pub max_ratio_residual: f64,
    /// Largest disagreement between the expanded form and the ratio
    /// difference times the cleared denominator.
    pub max_consistency: f64,
    /// Whether ℏ was inverted by the identification.
    pub hbar_inverted: bool,
    /// Every convention tried and its worst residual.
    pub tried: Vec<(bool, f64)>,
    /// Tolerance.
    pub tol: f64,
    /// Whether all residuals are below the tolerance.
    pub certified: bool,
}

/// A mirror-symmetry identity for one pair of fixed points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    /// NS5 charges of `X`.
    pub r: Vec<usize>,
    /// D5 charges of `X`.
    pub c: Vec<usize>,
    /// NS5 charges of the mirror.
    pub r_mirror: Vec<usize>,
    /// D5 charges of the mirror.
    pub c_mirror: Vec<usize>,
    /// `f`.
    pub f: FixedPoint,
    /// `g`.
    pub g: FixedPoint,
    /// 1-based IDs of `f` and `g` on `X`.
    pub ids: (usize, usize),
    /// `f!`.
    pub f_mirror: FixedPoint,
    /// `g!`.
    pub g_mirror: FixedPoint,
    /// Crossing counts `(#f, #g)`.
    pub crossings: (usize, usize),
    /// `(−1)^{#f+#g}`.
    pub sign: i32,
    /// `W(f)|_g / W(g)|_g` on `X`.
    pub left: Ratio,
    /// `W(g!)|_{f!} / W(f!)|_{f!}` in the variables of `X`.
    pub right: Ratio,
    /// Both sides vanish identically.
    pub trivial: bool,
    /// The cleared identity `Σ terms = 0` in the variables of `X`.
    pub terms: Vec<IdentityTerm>,
    /// The same identity in the variables of the mirror.
    pub mirror_terms: Vec<IdentityTerm>,
    /// The one-term multiplier `M` with `Σ terms = (LHS − RHS) · M` once the
    /// diagonal restrictions are replaced by their Euler classes.
    pub cleared_by: FlavorClass,
    /// Numeric certification.
    pub certification: Certification,
}

impl IdentityRecord {
    /// `(term count, factor count of each term)`.
    pub fn shape(&self) -> (usize, Vec<u32>) {
        (self.terms.len(), self.terms.iter().map(|t| t.factor_count()).collect())
    }

    /// `(term count, factors per term)` when every term has the same count.
    pub fn uniform_shape(&self) -> Option<(usize, u32)> {
        let (n, counts) = self.shape();
        let first = *counts.first()?;
        counts.iter().all(|&c| c == first).then_some((n, first))
    }

    /// The expanded identity as an elliptic class.
    pub fn expanded_class(&self) -> FlavorClass {
        FlavorClass { flavor: Flavor::E, terms: self.terms.iter().map(|t| t.to_term()).collect() }
    }
}

/// Renames a monomial on the mirror of `X` (which has `m` D5 and `n` NS5
/// branes) into the variables of `X`.
pub fn swap_monomial(x: &Monomial, m: usize, n: usize, invert_hbar: bool) -> Monomial {
    Monomial::from_doubled(x.iter().map(|(v, e)| swap_var(v, e, m, n, invert_hbar)))
}

fn swap_var<E: std::ops::Neg<Output = E>>(v: Var, e: E, m: usize, n: usize, invert_hbar: bool) -> (Var, E) {
    match v {
        Var::A(j) => (Var::z(m + 1 - j as usize), e),
        Var::Z(i) => (Var::a(n + 1 - i as usize), e),
        Var::Hbar if invert_hbar => (Var::Hbar, -e),
        other => (other, e),
    }
}

fn swap_class(cls: &FlavorClass, m: usize, n: usize, invert_hbar: bool) -> FlavorClass {
    cls.map_monomials(
        |x| swap_monomial(x, m, n, invert_hbar),
        |p| RatMonomial::from_pairs(p.iter().map(|(v, e)| swap_var(v, e, m, n, invert_hbar))),
    )
}

fn swap_restricted(r: &Restricted, m: usize, n: usize, invert_hbar: bool) -> Restricted {
    Restricted {
        class: swap_class(&r.class, m, n, invert_hbar),
        alt: r.alt.as_ref().map(|a| swap_class(a, m, n, invert_hbar)),
        vanished: r.vanished,
        balanced: r.balanced,
    }
}

/// A variety and its mirror with all elliptic `W` functions for the
/// identity chamber.
#[derive(Clone, Debug)]
pub struct MirrorSetup {
    /// `X(r, c)`.
    pub x: Variety,
    /// `X(r!, c!)`.
    pub mirror: Variety,
}

impl MirrorSetup {
    /// Builds both varieties.
    pub fn new(r: &[usize], c: &[usize]) -> Result<MirrorSetup> {
        let d = BraneDiagram::new(r.to_vec(), c.to_vec())?;
        let dm = d.mirror()?;
        if !dm.has_positive_charges() {
            return Err(Error::Input(format!("the mirror X(r={:?}, c={:?}) has a zero charge", dm.r(), dm.c())));
        }
        let x = Variety::new(d.clone(), Chamber::identity(d.n()), Flavor::E, StabOptions::default())?;
        let mirror = Variety::new(dm.clone(), Chamber::identity(dm.n()), Flavor::E, StabOptions::default())?;
        Ok(MirrorSetup { x, mirror })
    }

    /// The identity for the pair `(f, g)` of fixed points of `X`, given by
    /// 0-based indices.
    pub fn identity(&self, fi: usize, gi: usize, opts: &MirrorOptions) -> Result<IdentityRecord> {
        let (m, n) = (self.x.diagram.m(), self.x.diagram.n());
        let f = self.x.points.get(fi).ok_or_else(|| Error::Input(format!("no fixed point with ID {}", fi + 1)))?.clone();
        let g = self.x.points.get(gi).ok_or_else(|| Error::Input(format!("no fixed point with ID {}", gi + 1)))?.clone();
        let (fm, gm) = (f.mirror(), g.mirror());
        let (fmi, gmi) = (self.mirror.require(&fm)?, self.mirror.require(&gm)?);
        let crossings = (f.crossings(), g.crossings());
        let sign = if (crossings.0 + crossings.1) % 2 == 0 { 1 } else { -1 };
        let seed = opts.seed;
        let left = Ratio {
            numerator: self.x.restrict(fi, gi, seed)?,
            denominator: self.x.restrict(gi, gi, seed)?,
            diagonal: self.x.diagonal_class(gi)?,
        };
        let right_raw = Ratio {
            numerator: self.mirror.restrict(gmi, fmi, seed)?,
            denominator: self.mirror.restrict(fmi, fmi, seed)?,
            diagonal: self.mirror.diagonal_class(fmi)?,
        };
        let conventions: &[bool] = match opts.hbar {
            HbarSwap::On => &[true],
            HbarSwap::Off => &[false],
            HbarSwap::Auto => &[true, false],
        };
        let mut tried = Vec::new();
        let mut first: Option<IdentityRecord> = None;
        for &inv in conventions {
            let right = Ratio {
                numerator: swap_restricted(&right_raw.numerator, m, n, inv),
                denominator: swap_restricted(&right_raw.denominator, m, n, inv),
                diagonal: swap_class(&right_raw.diagonal, m, n, inv),
            };
            let trivial_structural = left.numerator.is_structurally_zero() && right.numerator.is_structurally_zero();
            let (terms, cleared_by) = if trivial_structural {
                (Vec::new(), FlavorClass::one(Flavor::E))
            } else {
                expand(&left, &right, sign)?
            };
            let mut rec = IdentityRecord {
                r: self.x.diagram.r().to_vec(),
                c: self.x.diagram.c().to_vec(),
                r_mirror: self.mirror.diagram.r().to_vec(),
                c_mirror: self.mirror.diagram.c().to_vec(),
                f: f.clone(),
                g: g.clone(),
                ids: (fi + 1, gi + 1),
                f_mirror: fm.clone(),
                g_mirror: gm.clone(),
                crossings,
                sign,
                left: left.clone(),
                right,
                trivial: trivial_structural,
                mirror_terms: to_mirror_frame(&terms, m, n, inv)?,
                terms,
                cleared_by,
                certification: Certification {
                    points: opts.points,
                    q_values: opts.q_list.clone(),
                    max_residual: 0.0,
                    max_ratio_residual: 0.0,
                    max_consistency: 0.0,
                    hbar_inverted: inv,
                    tried: Vec::new(),
                    tol: opts.tol,
                    certified: true,
                },
            };
            if !trivial_structural {
                certify(&mut rec, n, m, opts)?;
            }
            let worst = rec
                .certification
                .max_residual
                .max(rec.certification.max_ratio_residual)
                .max(rec.certification.max_consistency);
            tried.push((inv, worst));
            rec.certification.tried = tried.clone();
            if rec.certification.certified {
                return Ok(rec);
            }
            if first.is_none() {
                first = Some(rec);
            }
        }
        let mut rec = first.expect("at least one convention is tried");
        rec.certification.tried = tried;
        Ok(rec)
    }
}

/// Rewrites identity terms from the variables of `X` (`m` NS5, `n` D5)
/// into those of its mirror; the inverse of the identification.
fn to_mirror_frame(terms: &[IdentityTerm], m: usize, n: usize, invert_hbar: bool) -> Result<Vec<IdentityTerm>> {
    let prods = terms
        .iter()
        .map(|t| {
            let mut p = Product { coeff: t.coeff, powers: BTreeMap::new() };
            for f in &t.factors {
                p.push(&swap_monomial(&f.arg, n, m, invert_hbar), f.power as i32);
            }
            p
        })
        .collect();
    Ok(normalize(prods)?.0)
}

/// Builds and certifies the identity for `(f, g)` on `X(r, c)`.
pub fn mirror_identity(r: &[usize], c: &[usize], f: &FixedPoint, g: &FixedPoint, opts: &MirrorOptions) -> Result<IdentityRecord> {
    let setup = MirrorSetup::new(r, c)?;
    let fi = setup.x.require(f)?;
    let gi = setup.x.require(g)?;
    setup.identity(fi, gi, opts)
}

/// Accumulates `coeff · ∏ θ(arg)^power` with arguments identified up to
/// inversion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Product {
    coeff: Rational64,
    powers: BTreeMap<Monomial, i32>,
}

impl Product {
    fn from_term(t: &Term) -> Result<Product> {
        if !t.prefactor.is_one() {
            return Err(Error::Input("mirror identities are built from elliptic classes without prefactors".into()));
        }
        let mut p = Product { coeff: t.coeff, powers: BTreeMap::new() };
        for f in &t.factors {
            if f.is_zero() {
                return Err(Error::Input("unresolved structural zero in a restricted class".into()));
            }
            p.push(&f.arg, f.power);
        }
        Ok(p)
    }

    fn push(&mut self, arg: &Monomial, power: i32) {
        let (o, flipped) = arg.oriented();
        if o.is_one() {
            // θ(1) = 0 never survives restriction; keep it visible if it does.
            *self.powers.entry(o).or_insert(0) += power;
            return;
        }
        if flipped && power % 2 != 0 {
            self.coeff = -self.coeff;
        }
        let e = self.powers.entry(o.clone()).or_insert(0);
        *e += power;
        if *e == 0 {
            self.powers.remove(&o);
        }
    }

    fn divide(&mut self, other: &Product) {
        self.coeff /= other.coeff;
        for (a, p) in &other.powers {
            self.push(a, -p);
        }
    }
}

fn single_term(cls: &FlavorClass) -> Result<Product> {
    let c = cls.canonicalize();
    match c.terms.as_slice() {
        [t] => Product::from_term(t),
        _ => Err(Error::Input(format!("diagonal class has {} terms; expected one", c.terms.len()))),
    }
}

/// `Σ_{t ∈ N₁} t/D₁ − sign · Σ_{t ∈ N₂} t/D₂`, denominators cleared, common
/// factors removed and equal products merged.
fn expand(left: &Ratio, right: &Ratio, sign: i32) -> Result<(Vec<IdentityTerm>, FlavorClass)> {
    let d1 = single_term(&left.diagonal)?;
    let d2 = single_term(&right.diagonal)?;
    let mut prods = Vec::new();
    for t in &left.numerator.class.terms {
        let mut p = Product::from_term(t)?;
        p.divide(&d1);
        prods.push(p);
    }
    for t in &right.numerator.class.terms {
        let mut p = Product::from_term(t)?;
        p.divide(&d2);
        p.coeff = -p.coeff * Rational64::from_integer(sign as i64);
        prods.push(p);
    }
    normalize(prods)
}

fn normalize(prods: Vec<Product>) -> Result<(Vec<IdentityTerm>, FlavorClass)> {
    let mut merged: BTreeMap<Vec<(Monomial, i32)>, Rational64> = BTreeMap::new();
    for p in prods {
        let key: Vec<(Monomial, i32)> = p.powers.into_iter().collect();
        *merged.entry(key).or_insert_with(Rational64::zero) += p.coeff;
    }
    let merged: Vec<(BTreeMap<Monomial, i32>, Rational64)> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k.into_iter().collect(), c))
        .collect();
    if merged.is_empty() {
        return Ok((Vec::new(), FlavorClass::one(Flavor::E)));
    }
    let mut args: Vec<Monomial> = merged.iter().flat_map(|(m, _)| m.keys().cloned()).collect();
    args.sort();
    args.dedup();
    // Multiply by the common denominator, then divide by the common factor:
    // both amount to subtracting the least exponent of every argument.
    let least: BTreeMap<Monomial, i32> = args
        .iter()
        .map(|a| (a.clone(), merged.iter().map(|(m, _)| m.get(a).copied().unwrap_or(0)).min().unwrap_or(0)))
        .collect();
    let mut coeff_gcd: Option<Rational64> = None;
    for (_, c) in &merged {
        coeff_gcd = Some(match coeff_gcd {
            None => c.abs(),
            Some(g) => rational_gcd(g, c.abs()),
        });
    }
    let g = coeff_gcd.unwrap_or(Rational64::from_integer(1));
    let lead_sign = if merged[0].1.is_negative() { -1 } else { 1 };
    let mut out: Vec<IdentityTerm> = merged
        .into_iter()
        .map(|(m, c)| {
            let factors = least
                .iter()
                .map(|(a, l)| (a.clone(), m.get(a).copied().unwrap_or(0) - l))
                .filter(|(_, e)| *e > 0)
                .map(|(arg, e)| ThetaFactor { arg, power: e as u32 })
                .collect();
            IdentityTerm { coeff: c / g * Rational64::from_integer(lead_sign), factors }
        })
        .collect();
    out.sort_by(|a, b| a.factors.cmp(&b.factors));
    let multiplier = Term {
        coeff: Rational64::from_integer(lead_sign) / g,
        prefactor: RatMonomial::one(),
        factors: least.into_iter().filter(|(_, e)| *e != 0).map(|(a, e)| Factor::new(a, -e)).collect(),
    };
    Ok((out, FlavorClass::from_term(Flavor::E, multiplier)))
}

fn rational_gcd(a: Rational64, b: Rational64) -> Rational64 {
    Rational64::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Evaluates every residual of `rec` on fresh points and fills in its
/// certification.
fn certify(rec: &mut IdentityRecord, n_a: usize, n_z: usize, opts: &MirrorOptions) -> Result<()> {
    let expanded = rec.expanded_class();
    let classes: Vec<&FlavorClass> = [
        &rec.left.numerator.class,
        &rec.left.denominator.class,
        &rec.left.diagonal,
        &rec.right.numerator.class,
        &rec.right.denominator.class,
        &rec.right.diagonal,
        &expanded,
    ]
    .into_iter()
    .chain(rec.left.numerator.alt.iter())
    .chain(rec.left.denominator.alt.iter())
    .chain(rec.right.numerator.alt.iter())
    .chain(rec.right.denominator.alt.iter())
    .collect();
    let args = atom_arguments(classes);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6d69_7272_6f72);
    let none = Substitution::new();
    let sign = rec.sign as f64;
    let (mut worst, mut worst_ratio, mut worst_cons) = (0.0f64, 0.0f64, 0.0f64);
    let mut left_zero = true;
    let mut right_zero = true;
    for &q in &opts.q_list {
        let ctx = EvalCtx::with_precision(q, opts.precision);
        for _ in 0..opts.points {
            let draw = |rng: &mut ChaCha8Rng| draw_point(rng, n_a, n_z, &[], Flavor::E, &args, std::slice::from_ref(&q));
            let (res, ratio_res, cons, lz, rz) = with_resample(&mut rng, draw, |pt: &EvalPoint| {
                let (n1, s1) = rec.left.numerator.value(pt, &ctx)?;
                let (d1, _) = rec.left.denominator.value(pt, &ctx)?;
                let (n2, s2) = rec.right.numerator.value(pt, &ctx)?;
                let (d2, _) = rec.right.denominator.value(pt, &ctx)?;
                if d1.norm() < ctx.guard || d2.norm() < ctx.guard {
                    return Err(Error::Resample("diagonal restriction too small".into()));
                }
                let lhs = n1 / d1;
                let rhs = n2 / d2 * sign;
                let scale = (s1 / d1.norm()).max(s2 / d2.norm());
                let ratio_res = if scale > 0.0 { (lhs - rhs).norm() / scale } else { 0.0 };
                let lz = s1 == 0.0 || n1.norm() <= opts.tol * s1;
                let rz = s2 == 0.0 || n2.norm() <= opts.tol * s2;
                let vals = term_values(&expanded, &none, pt, &ctx)?;
                let total = sum_values(&vals, ctx.precision);
                let tscale = term_scale(&vals);
                let res = if tscale > 0.0 { total.norm() / tscale } else { 0.0 };
                let m = evaluate(&rec.cleared_by, &none, pt, &ctx)?;
                let cons = if tscale > 0.0 { (total - (lhs - rhs) * m).norm() / tscale } else { 0.0 };
                Ok((res, ratio_res, cons, lz, rz))
            })?;
            worst = worst.max(res);
            worst_ratio = worst_ratio.max(ratio_res);
            worst_cons = worst_cons.max(cons);
            left_zero &= lz;
            right_zero &= rz;
        }
    }
    rec.trivial = left_zero && right_zero;
    let cert = &mut rec.certification;
    cert.max_residual = worst;
    cert.max_ratio_residual = worst_ratio;
    cert.max_consistency = worst_cons;
    cert.certified = worst < opts.tol && worst_ratio < opts.tol && worst_cons < opts.tol;
    Ok(())
}

