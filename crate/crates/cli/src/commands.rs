//! One function per subcommand. Each returns the rendered output and
//! whether every certification in it passed.

use std::fmt::Write as _;

use bowcalc_core::bowcore::{enumerate_fixed_points, BraneDiagram, FixedPoint};
use bowcalc_core::expr::{evaluate, EvalCtx, EvalPoint, Flavor, Substitution};
use bowcalc_core::shuffle::{symmetry_check, wheel_check};
use bowcalc_core::stab::{projective_closed_form, projective_fixed_point, restrict_class, w_function, wtilde, Restricted, SlopeConfig, StabOptions, StabResult};
use bowcalc_core::verify::{
    check_axioms, default_nomes, fay_normal_form, identity_latex, identity_text, limit_suite, sweep, AxiomOptions, Frame, HbarSwap, LimitOptions, MirrorOptions,
    MirrorSetup, Pinning, SweepOptions,
};
use bowcalc_core::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// Rendered result of a subcommand.
pub struct Outcome {
    /// JSON form.
    pub json: Value,
    /// Text form.
    pub text: String,
    /// LaTeX form, for the commands that have one.
    pub latex: Option<String>,
    /// Whether every certification passed.
    pub pass: bool,
}

impl Outcome {
    fn new(json: Value, text: String, pass: bool) -> Outcome {
        Outcome { json, text, latex: None, pass }
    }

    /// The output in the requested format.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).map_err(|e| Error::Input(e.to_string()))? + "\n"),
            Format::Text => Ok(self.text.clone()),
            Format::Latex => self
                .latex
                .clone()
                .map(|s| s + "\n")
                .ok_or_else(|| Error::Input("LaTeX output is available for mirror-identity only".into())),
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn point(points: &[FixedPoint], id: usize) -> Result<&FixedPoint> {
    id.checked_sub(1)
        .and_then(|i| points.get(i))
        .ok_or_else(|| Error::Input(format!("fixed-point ID {id} is out of range 1..={}", points.len())))
}

fn stab_options(cfg: &RunConfig, d: &BraneDiagram) -> StabOptions {
    let slopes = match (cfg.flavor, &cfg.slopes) {
        (_, Some(s)) => Some(s.clone()),
        (Flavor::K, None) => Some(SlopeConfig::from_seed(d.m(), cfg.seed)),
        _ => None,
    };
    StabOptions { slopes, ..Default::default() }
}

/// `parse`: charges and dimension vector.
pub fn parse(d: &BraneDiagram) -> Result<Outcome> {
    let mirror = d.mirror().ok();
    let json = json!({
        "r": d.r(),
        "c": d.c(),
        "d": d.dimension_vector(),
        "d0": d.d0(),
        "dimension": d.dimension(),
        "slash": d.slash_notation(),
        "mirror": mirror.as_ref().map(|m| json!({ "r": m.r(), "c": m.c(), "positive": m.has_positive_charges() })),
    });
    let mut text = String::new();
    writeln!(text, "diagram   {}", d.slash_notation()).ok();
    writeln!(text, "r         {:?}", d.r()).ok();
    writeln!(text, "c         {:?}", d.c()).ok();
    writeln!(text, "d         {:?}", d.dimension_vector()).ok();
    writeln!(text, "dimension {}", d.dimension()).ok();
    if let Some(m) = mirror {
        writeln!(text, "mirror    r={:?} c={:?}", m.r(), m.c()).ok();
    }
    Ok(Outcome::new(json, text, true))
}

/// `fixed-points`: every BCT with ID, margins, crossings and mirror ID.
pub fn fixed_points(d: &BraneDiagram) -> Result<Outcome> {
    let points = enumerate_fixed_points(d.r(), d.c());
    if points.is_empty() {
        return Err(Error::Input(format!("X(r={:?}, c={:?}) has no fixed points", d.r(), d.c())));
    }
    let mirror_points = d.mirror().ok().filter(|m| m.has_positive_charges()).map(|m| enumerate_fixed_points(m.r(), m.c()));
    let mut rows = Vec::new();
    let mut text = format!("{} fixed points of X(r={:?}, c={:?})\n", points.len(), d.r(), d.c());
    for (i, f) in points.iter().enumerate() {
        let mirror_id = mirror_points.as_ref().and_then(|mp| mp.iter().position(|g| *g == f.mirror()).map(|j| j + 1));
        rows.push(json!({
            "id": i + 1,
            "matrix": f.rows(),
            "ties": f.tie_notation(),
            "row_sums": f.row_sums(),
            "col_sums": f.col_sums(),
            "crossings": f.crossings(),
            "mirror_id": mirror_id,
        }));
        let mid = mirror_id.map(|j| j.to_string()).unwrap_or_else(|| "-".into());
        writeln!(text, "{:>3}  {}  crossings {}  mirror {}", i + 1, f.tie_notation(), f.crossings(), mid).ok();
        for row in f.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(text, "     {}", cells.join(" ")).ok();
        }
    }
    let json = json!({ "r": d.r(), "c": d.c(), "count": points.len(), "fixed_points": rows });
    Ok(Outcome::new(json, text, true))
}

fn restriction_json(r: &Restricted) -> Result<(Value, String)> {
    let exact = if r.class.flavor == Flavor::H { Some(r.rational()?.to_string()) } else { None };
    let text = match &exact {
        Some(s) => s.clone(),
        None => r.class.canonicalize().to_string(),
    };
    Ok((json!({ "restricted": to_json(r), "exact": exact }), text))
}

/// Largest relative deviation between `W` and the closed form on `T*P^{n-1}`.
fn closed_form_residual(w: &StabResult, cfg: &RunConfig) -> Result<Option<f64>> {
    let d = &w.diagram;
    let n = d.n();
    if n < 2 || d.r() != [n - 1, 1] || d.c().iter().any(|&c| c != 1) || !w.chamber.is_identity() {
        return Ok(None);
    }
    let Some(k) = (1..=n).find(|&k| projective_fixed_point(n, k).map(|f| f == w.fixed_point).unwrap_or(false)) else {
        return Ok(None);
    };
    let closed = projective_closed_form(n, k, w.flavor, w.options.slopes.as_ref())?;
    let t_vars: Vec<_> = w.class.variables().into_iter().filter(|v| v.is_t()).collect();
    let q = cfg.q.as_ref().map(|q| q[0]).unwrap_or(Complex64::new(0.1, 0.1));
    let ctx = EvalCtx::with_precision(if w.flavor == Flavor::E { q } else { Complex64::new(0.0, 0.0) }, cfg.precision);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let none = Substitution::new();
    let mut worst = 0.0f64;
    for _ in 0..cfg.points.unwrap_or(20) {
        let pt = EvalPoint::random(&mut rng, n, d.m(), &t_vars);
        let a = evaluate(&w.class, &none, &pt, &ctx)?;
        let b = evaluate(&closed, &none, &pt, &ctx)?;
        worst = worst.max((a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE));
    }
    Ok(Some(worst))
}

/// `stab`: the `W` function of one fixed point, optionally restricted.
pub fn stab(d: &BraneDiagram, id: usize, restrict_at: Option<usize>, cfg: &RunConfig) -> Result<Outcome> {
    let points = enumerate_fixed_points(d.r(), d.c());
    let f = point(&points, id)?;
    let sigma = cfg.chamber_or_identity(d.n())?;
    let w = w_function(f, &sigma, cfg.flavor, &stab_options(cfg, d))?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let closed = closed_form_residual(&w, cfg)?;
    let pass = closed.map(|r| r < tol).unwrap_or(true);
    let mut text = format!("W^{}_{}(f{id}) = {}\n", cfg.flavor, sigma, w.class);
    let mut json = json!({ "stab": to_json(&w) });
    if let Some(r) = closed {
        writeln!(text, "closed form: max relative residual {r:.3e} ({})", if r < tol { "match" } else { "MISMATCH" }).ok();
        json["closed_form_residual"] = json!(r);
    }
    if let Some(g) = restrict_at {
        let gp = point(&points, g)?;
        let r = restrict_class(&w.class, gp, cfg.seed)?;
        let (rj, rt) = restriction_json(&r)?;
        writeln!(text, "W(f{id})|_f{g} = {rt}").ok();
        json["restriction"] = rj;
    }
    json["pass"] = json!(pass);
    Ok(Outcome::new(json, text, pass))
}

/// `restrict`: `W(f)|_g`.
pub fn restrict(d: &BraneDiagram, f: usize, g: usize, cfg: &RunConfig) -> Result<Outcome> {
    let points = enumerate_fixed_points(d.r(), d.c());
    let (fp, gp) = (point(&points, f)?, point(&points, g)?);
    let sigma = cfg.chamber_or_identity(d.n())?;
    let w = w_function(fp, &sigma, cfg.flavor, &stab_options(cfg, d))?;
    let r = restrict_class(&w.class, gp, cfg.seed)?;
    let (mut json, text) = restriction_json(&r)?;
    json["f"] = json!(f);
    json["g"] = json!(g);
    json["flavor"] = to_json(&cfg.flavor);
    json["chamber"] = to_json(&sigma);
    Ok(Outcome::new(json, format!("W^{}_{}(f{f})|_f{g} = {text}\n", cfg.flavor, sigma), true))
}

/// `verify-axioms`: diagonal and support axioms and the induced order.
pub fn verify_axioms(d: &BraneDiagram, cfg: &RunConfig) -> Result<Outcome> {
    let sigma = cfg.chamber_or_identity(d.n())?;
    let mut opts = AxiomOptions { seed: cfg.seed, precision: cfg.precision, stab: stab_options(cfg, d), ..Default::default() };
    if let Some(p) = cfg.points {
        opts.points = p;
    }
    if let Some(q) = &cfg.q {
        opts.q_list = q.clone();
    }
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    let rep = check_axioms(d.r(), d.c(), &sigma, cfg.flavor, &opts)?;
    let mut text = format!(
        "axioms for X(r={:?}, c={:?}), chamber {}, flavor {}: {}\n",
        rep.r,
        rep.c,
        rep.chamber,
        rep.flavor,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    writeln!(text, "fixed points {}; {}; max residual {:.3e}", rep.fixed_points.len(), if rep.exact { "exact" } else { "numeric" }, rep.max_residual).ok();
    writeln!(text, "antisymmetric order: {}; comparable pairs {}", rep.antisymmetric, rep.order.len()).ok();
    let edges: Vec<String> = rep.hasse.iter().map(|(g, f)| format!("{g}<{f}")).collect();
    writeln!(text, "Hasse diagram: {}", edges.join(" ")).ok();
    for f in &rep.failures {
        writeln!(text, "  failure: {f}").ok();
    }
    Ok(Outcome::new(to_json(&rep), text, rep.pass))
}

/// `mirror-identity`: the certified identity for one pair.
pub fn mirror_identity(d: &BraneDiagram, f: usize, g: usize, hbar: HbarSwap, frame: Frame, cfg: &RunConfig) -> Result<Outcome> {
    let setup = MirrorSetup::new(d.r(), d.c())?;
    point(&setup.x.points, f)?;
    point(&setup.x.points, g)?;
    let mut opts = MirrorOptions { seed: cfg.seed, hbar, precision: cfg.precision, ..Default::default() };
    if let Some(p) = cfg.points {
        opts.points = p;
    }
    opts.q_list = cfg.q.clone().unwrap_or_else(default_nomes);
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    let rec = setup.identity(f - 1, g - 1, &opts)?;
    let fay = fay_normal_form(&rec, frame);
    let terms = match frame {
        Frame::Variety => &rec.terms,
        Frame::Mirror => &rec.mirror_terms,
    };
    let cert = &rec.certification;
    let mut text = format!("mirror identity for (f{f}, f{g}) on X(r={:?}, c={:?})\n", rec.r, rec.c);
    writeln!(text, "mirror X(r={:?}, c={:?}); f! = {}, g! = {}", rec.r_mirror, rec.c_mirror, rec.f_mirror.tie_notation(), rec.g_mirror.tie_notation()).ok();
    writeln!(text, "sign {}; trivial {}; hbar inverted {}", rec.sign, rec.trivial, cert.hbar_inverted).ok();
    if let Some((n, k)) = rec.uniform_shape() {
        writeln!(text, "shape: {n} terms, {k} factors each").ok();
    } else if !rec.terms.is_empty() {
        writeln!(text, "shape: {} terms, factor counts {:?}", rec.terms.len(), rec.shape().1).ok();
    }
    writeln!(
        text,
        "certified {} at {} points x {} nomes; residuals: expanded {:.3e}, ratio {:.3e}, consistency {:.3e}",
        cert.certified,
        cert.points,
        cert.q_values.len(),
        cert.max_residual,
        cert.max_ratio_residual,
        cert.max_consistency
    )
    .ok();
    if let Some(sols) = &fay {
        let p = &sols[0];
        writeln!(text, "trisecant form: x = ({}, {}, {}), y = ({}, {}, {})", p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2]).ok();
    }
    writeln!(text, "{}", identity_text(terms)).ok();
    let mut json = to_json(&rec);
    json["frame"] = to_json(&frame);
    json["fay"] = to_json(&fay);
    let pass = cert.certified;
    Ok(Outcome { json, text, latex: Some(identity_latex(terms)), pass })
}

/// `limits`: elliptic to K-theoretic and K-theoretic to cohomological.
pub fn limits(d: &BraneDiagram, pinning: Pinning, cfg: &RunConfig) -> Result<Outcome> {
    let sigma = cfg.chamber_or_identity(d.n())?;
    let mut opts = LimitOptions { slopes: cfg.slopes.clone(), seed: cfg.seed, pinning, precision: cfg.precision, ..Default::default() };
    if let Some(p) = cfg.points {
        opts.points = p;
    }
    if let Some(q) = &cfg.q {
        opts.q_list = q.clone();
    }
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    let rep = limit_suite(d.r(), d.c(), &sigma, &opts)?;
    let mut text = format!("limits for X(r={:?}, c={:?}), chamber {}, slopes {:?}\n", rep.r, rep.c, rep.chamber, rep.slopes.as_f64());
    let qs: Vec<String> = rep.q_values.iter().map(|q| format!("{q}")).collect();
    writeln!(text, "nomes {}", qs.join(", ")).ok();
    for e in &rep.entries {
        let res: Vec<String> = e.residuals.iter().map(|r| format!("{r:.3e}")).collect();
        writeln!(text, "  f{}: E-K residuals [{}] rate {:.2} monotone {}; K-H exact {}", e.id, res.join(", "), e.rate, e.monotone, e.k_to_h_exact).ok();
    }
    writeln!(
        text,
        "monotone {}; final residual {:.3e} (tol {:.1e}); K-H exact {}: {}",
        rep.monotone,
        rep.final_residual,
        rep.tol,
        rep.k_to_h_exact,
        if rep.pass { "PASS" } else { "FAIL" }
    )
    .ok();
    Ok(Outcome::new(to_json(&rep), text, rep.pass))
}

/// `wheel-check`: wheel conditions and level symmetry of `W̃(f)`.
pub fn wheel(d: &BraneDiagram, id: usize, cfg: &RunConfig) -> Result<Outcome> {
    let points = enumerate_fixed_points(d.r(), d.c());
    let f = point(&points, id)?;
    let sigma = cfg.chamber_or_identity(d.n())?;
    let opts = stab_options(cfg, d);
    let wt = wtilde(f, &sigma, cfg.flavor, opts.slopes.as_ref())?;
    let q = cfg.q.as_ref().map(|q| q[0]).unwrap_or(Complex64::new(0.1, 0.1));
    let ctx = EvalCtx::with_precision(if cfg.flavor == Flavor::E { q } else { Complex64::new(0.0, 0.0) }, cfg.precision);
    let trials = cfg.points.unwrap_or(20);
    let tol = cfg.tol.unwrap_or(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = wheel_check(&wt, trials, tol, &mut rng, &ctx)?;
    let s = symmetry_check(&wt, trials, tol, &mut rng, &ctx)?;
    let pass = w.pass && s.pass;
    let text = format!(
        "W~(f{id}) on X(r={:?}, c={:?}), dims {:?}\nwheel: {} evaluations, max residual {:.3e}: {}\nsymmetry: max residual {:.3e}: {}\n",
        d.r(),
        d.c(),
        wt.dims,
        w.trials,
        w.max_residual,
        if w.pass { "PASS" } else { "FAIL" },
        s.max_residual,
        if s.pass { "PASS" } else { "FAIL" }
    );
    let json = json!({ "id": id, "dims": wt.dims, "wheel": to_json(&w), "symmetry": to_json(&s), "pass": pass });
    Ok(Outcome::new(json, text, pass))
}

/// `sweep`: bounded scan of small varieties.
pub fn sweep_cmd(max_m: usize, max_n: usize, max_boxes: usize, max_fixed_points: usize, cfg: &RunConfig) -> Result<Outcome> {
    let mut opts = SweepOptions { max_m, max_n, max_boxes, max_fixed_points, ..Default::default() };
    opts.mirror.seed = cfg.seed;
    opts.mirror.precision = cfg.precision;
    if let Some(p) = cfg.points {
        opts.mirror.points = p;
    }
    if let Some(q) = &cfg.q {
        opts.mirror.q_list = q.clone();
    }
    if let Some(t) = cfg.tol {
        opts.mirror.tol = t;
    }
    let rep = sweep(&opts)?;
    let mut text = format!("sweep: m <= {max_m}, n <= {max_n}, boxes <= {max_boxes}, fixed points <= {max_fixed_points}\n");
    for v in &rep.varieties {
        writeln!(
            text,
            "  X(r={:?}, c={:?}): {} fixed points, {} nontrivial, {} tautological, {} irreducible, {} failed",
            v.r,
            v.c,
            v.fixed_points,
            v.nontrivial,
            v.tautological,
            v.irreducible,
            v.failed.len()
        )
        .ok();
    }
    for (r, c, n) in &rep.skipped {
        writeln!(text, "  skipped X(r={r:?}, c={c:?}): {n} fixed points").ok();
    }
    writeln!(text, "terms  factors  uniform  count  first example").ok();
    for p in &rep.shapes {
        writeln!(text, "{:>5}  {:>7}  {:>7}  {:>5}  X(r={:?}, c={:?}) f{} f{}", p.terms, p.factors, p.uniform, p.count, p.example.0, p.example.1, p.example.2, p.example.3).ok();
    }
    writeln!(text, "{}", if rep.pass { "all pairs certified or trivial" } else { "some pairs failed to certify" }).ok();
    Ok(Outcome::new(to_json(&rep), text, rep.pass))
}
