//! Axiom checks: diagonal restrictions against Euler classes, vanishing
//! off the order, and the partial order induced by the vanishing pattern.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::{atom_arguments, draw_point, with_resample};
use super::variety::Variety;
use crate::bowcore::{BraneDiagram, Chamber, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::{class_to_rational, evaluate, EvalCtx, Flavor, FlavorClass, Precision, Substitution};
use crate::stab::{Restricted, SlopeConfig, StabOptions};

/// Settings of an axiom run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomOptions {
    /// Random points per nome (ignored in the exact cohomological flavor).
    pub points: usize,
    /// Nomes for the elliptic flavor.
    pub q_list: Vec<Complex64>,
    /// Relative tolerance.
    pub tol: f64,
    /// Seed of points, limit directions and default slopes.
    pub seed: u64,
    /// Options passed to every `W`.
    pub stab: StabOptions,
    /// Evaluator precision.
    #[serde(skip)]
    pub precision: Precision,
}

impl Default for AxiomOptions {
    fn default() -> AxiomOptions {
        AxiomOptions {
            points: 5,
            q_list: vec![Complex64::new(0.1, 0.1)],
            tol: 1e-8,
            seed: 0,
            stab: StabOptions::default(),
            precision: Precision::Double,
        }
    }
}

/// One diagonal comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCheck {
    /// 1-based fixed-point ID.
    pub id: usize,
    /// Relative residual (0 when exact).
    pub residual: f64,
    /// Whether the check passed.
    pub pass: bool,
}

/// Outcome of `check_axioms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// NS5 charges.
    pub r: Vec<usize>,
    /// D5 charges.
    pub c: Vec<usize>,
    /// Chamber.
    pub chamber: Chamber,
    /// Flavor.
    pub flavor: Flavor,
    /// Fixed points by ID (index + 1).
    pub fixed_points: Vec<FixedPoint>,
    /// Whether each comparison was exact.
    pub exact: bool,
    /// Diagonal checks.
    pub diagonal: Vec<DiagonalCheck>,
    /// `nonzero[i][j]`: whether `W(f_{i+1})|_{f_{j+1}}` is nonzero.
    pub nonzero: Vec<Vec<bool>>,
    /// Pairs `(g, f)` of IDs with `g < f` in the induced order.
    pub order: Vec<(usize, usize)>,
    /// Covering relations `(g, f)` of the induced order.
    pub hasse: Vec<(usize, usize)>,
    /// Whether the transitive closure of the vanishing pattern is antisymmetric.
    pub antisymmetric: bool,
    /// Largest residual seen.
    pub max_residual: f64,
    /// Descriptions of every violation.
    pub failures: Vec<String>,
    /// Whether every check passed.
    pub pass: bool,
}

/// Runs the diagonal and support checks on every pair of fixed points of
/// `X(r, c)` for chamber `sigma`.
pub fn check_axioms(r: &[usize], c: &[usize], sigma: &Chamber, flavor: Flavor, opts: &AxiomOptions) -> Result<AxiomReport> {
    let diagram = BraneDiagram::new(r.to_vec(), c.to_vec())?;
    let mut stab = opts.stab.clone();
    if flavor == Flavor::K && stab.slopes.is_none() {
        stab.slopes = Some(SlopeConfig::from_seed(diagram.m(), opts.seed));
    }
    let v = Variety::new(diagram, sigma.clone(), flavor, stab)?;
    check_variety(&v, opts)
}

/// `check_axioms` on an already computed variety.
pub fn check_variety(v: &Variety, opts: &AxiomOptions) -> Result<AxiomReport> {
    let n = v.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let restricted: Vec<Restricted> = pairs
        .par_iter()
        .map(|&(i, j)| v.restrict(i, j, opts.seed))
        .collect::<Result<Vec<_>>>()?;
    let at = |i: usize, j: usize| &restricted[i * n + j];
    let mut failures = Vec::new();
    let mut diagonal = Vec::new();
    let mut nonzero = vec![vec![false; n]; n];
    let mut max_residual = 0.0f64;
    let exact = v.flavor == Flavor::H;
    if exact {
        let rationals = pairs
            .par_iter()
            .map(|&(i, j)| at(i, j).rational())
            .collect::<Result<Vec<_>>>()?;
        for j in 0..n {
            let want = class_to_rational(&v.diagonal_class(j)?)?;
            let ok = rationals[j * n + j].equals(&want);
            if !ok {
                failures.push(format!("diagonal at ID {}: {} vs Euler class {}", j + 1, rationals[j * n + j], want));
            }
            diagonal.push(DiagonalCheck { id: j + 1, residual: if ok { 0.0 } else { 1.0 }, pass: ok });
        }
        for &(i, j) in &pairs {
            nonzero[i][j] = !rationals[i * n + j].is_zero();
        }
    } else {
        let numeric = numeric_checks(v, &restricted, opts)?;
        for (j, res) in numeric.diagonal.iter().enumerate() {
            let ok = *res < opts.tol;
            max_residual = max_residual.max(*res);
            if !ok {
                failures.push(format!("diagonal at ID {}: relative residual {res:.3e}", j + 1));
            }
            diagonal.push(DiagonalCheck { id: j + 1, residual: *res, pass: ok });
        }
        nonzero = numeric.nonzero;
    }
    for (j, row) in nonzero.iter().enumerate().take(n) {
        if !row[j] {
            failures.push(format!("W(f_{0})|_f{0} vanishes", j + 1));
        }
    }
    let closure = transitive_closure(&nonzero);
    let mut antisymmetric = true;
    for i in 0..n {
        for j in i + 1..n {
            if closure[i][j] && closure[j][i] {
                antisymmetric = false;
                failures.push(format!("IDs {} and {} restrict nontrivially to each other", i + 1, j + 1));
            }
        }
    }
    let order = strict_pairs(&closure);
    let hasse = transitive_reduction(&closure);
    Ok(AxiomReport {
        r: v.diagram.r().to_vec(),
        c: v.diagram.c().to_vec(),
        chamber: v.chamber.clone(),
        flavor: v.flavor,
        fixed_points: v.points.clone(),
        exact,
        diagonal,
        nonzero,
        order,
        hasse,
        antisymmetric,
        max_residual,
        pass: failures.is_empty(),
        failures,
    })
}

struct Numeric {
    diagonal: Vec<f64>,
    nonzero: Vec<Vec<bool>>,
}

fn numeric_checks(v: &Variety, restricted: &[Restricted], opts: &AxiomOptions) -> Result<Numeric> {
    let n = v.len();
    let diag_classes: Vec<FlavorClass> = (0..n).map(|j| v.diagonal_class(j)).collect::<Result<_>>()?;
    let all: Vec<&FlavorClass> = restricted
        .iter()
        .flat_map(|r| std::iter::once(&r.class).chain(r.alt.iter()))
        .chain(diag_classes.iter())
        .collect();
    let args = atom_arguments(all);
    let q_list: Vec<Complex64> = match v.flavor {
        Flavor::E => opts.q_list.clone(),
        _ => vec![Complex64::new(0.0, 0.0)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6178_696f_6d73);
    let mut diagonal = vec![0.0f64; n];
    let mut nonzero = vec![vec![false; n]; n];
    let none = Substitution::new();
    let (na, nz) = (v.diagram.n(), v.diagram.m());
    for &q in &q_list {
        let ctx = EvalCtx::with_precision(q, opts.precision);
        for _ in 0..opts.points.max(1) {
            let draw = |rng: &mut ChaCha8Rng| draw_point(rng, na, nz, &[], v.flavor, &args, std::slice::from_ref(&q));
            let values = with_resample(&mut rng, draw, |pt| {
                let vals = restricted.par_iter().map(|r| r.value(pt, &ctx)).collect::<Result<Vec<_>>>()?;
                let diag = diag_classes.iter().map(|d| evaluate(d, &none, pt, &ctx)).collect::<Result<Vec<_>>>()?;
                Ok((vals, diag))
            })?;
            let (vals, diag) = values;
            for i in 0..n {
                for j in 0..n {
                    let (x, scale) = vals[i * n + j];
                    if scale > 0.0 && x.norm() > opts.tol * scale {
                        nonzero[i][j] = true;
                    }
                }
                let (x, scale) = vals[i * n + i];
                let e = diag[i];
                let s = scale.max(e.norm());
                if s == 0.0 {
                    return Err(Error::Eval(format!("diagonal of ID {} evaluates to 0", i + 1)));
                }
                diagonal[i] = diagonal[i].max((x - e).norm() / s);
            }
        }
    }
    Ok(Numeric { diagonal, nonzero })
}

/// Reflexive-transitive closure of `rel` (`rel[i][j]`: `j ≤ i`).
pub fn transitive_closure(rel: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = rel.len();
    let mut c: Vec<Vec<bool>> = rel.to_vec();
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if c[i][k] {
                for j in 0..n {
                    if c[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}

/// Pairs `(g, f)` of 1-based IDs with `g < f`, from a closed relation.
pub fn strict_pairs(closure: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = closure.len();
    let mut out = Vec::new();
    for f in 0..n {
        for g in 0..n {
            if f != g && closure[f][g] {
                out.push((g + 1, f + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Covering pairs `(g, f)` of a closed, antisymmetric relation.
pub fn transitive_reduction(closure: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = closure.len();
    let mut out = Vec::new();
    for f in 0..n {
        for g in 0..n {
            if f == g || !closure[f][g] {
                continue;
            }
            let covered = (0..n).any(|k| k != f && k != g && closure[f][k] && closure[k][g]);
            if !covered {
                out.push((g + 1, f + 1));
            }
        }
    }
    out.sort_unstable();
    out
}
