//! Bounded sweep over small varieties, tabulating the shapes of the
//! nontrivial mirror identities.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mirror::{IdentityRecord, MirrorOptions, MirrorSetup};
use super::sample::{atom_arguments, draw_point, with_resample};
use crate::bowcore::{margins_feasible, BraneDiagram};
use crate::error::Result;
use crate::expr::eval::{term_scale, term_values};
use crate::expr::{EvalCtx, Flavor, Substitution};

/// Bounds and settings of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Largest number of NS5 branes.
    pub max_m: usize,
    /// Largest number of D5 branes.
    pub max_n: usize,
    /// Largest number of ties (`Σr = Σc`).
    pub max_boxes: usize,
    /// Varieties with more fixed points are skipped.
    pub max_fixed_points: usize,
    /// Largest subset size tested for vanishing subsums.
    pub subset_max: usize,
    /// Points used for the subset test.
    pub subset_points: usize,
    /// Settings of every identity certification.
    pub mirror: MirrorOptions,
}

impl Default for SweepOptions {
    fn default() -> SweepOptions {
        SweepOptions {
            max_m: 3,
            max_n: 3,
            max_boxes: 6,
            max_fixed_points: 12,
            subset_max: 4,
            subset_points: 3,
            mirror: MirrorOptions::default(),
        }
    }
}

/// Summary for one variety of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepVariety {
    /// NS5 charges.
    pub r: Vec<usize>,
    /// D5 charges.
    pub c: Vec<usize>,
    /// Number of fixed points.
    pub fixed_points: usize,
    /// Ordered pairs `f ≠ g` examined.
    pub pairs: usize,
    /// Pairs whose identity is nontrivial.
    pub nontrivial: usize,
    /// Nontrivial pairs whose two sides agree term by term, so the cleared
    /// identity reads `0 = 0`.
    pub tautological: usize,
    /// Nontrivial pairs without a vanishing proper subsum.
    pub irreducible: usize,
    /// IDs `(f, g)` of pairs that failed to certify.
    pub failed: Vec<(usize, usize)>,
}

/// One cell of the shape table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapePoint {
    /// Number of terms.
    pub terms: usize,
    /// Factors per term (the largest, when they differ).
    pub factors: u32,
    /// Whether every term has the same factor count.
    pub uniform: bool,
    /// Irreducible identities with this shape.
    pub count: usize,
    /// First occurrence: `(r, c, f ID, g ID)`.
    pub example: (Vec<usize>, Vec<usize>, usize, usize),
}

/// Outcome of `sweep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Settings used.
    pub options: SweepOptions,
    /// Varieties examined, in enumeration order.
    pub varieties: Vec<SweepVariety>,
    /// Varieties skipped for size: `(r, c, fixed points)`.
    pub skipped: Vec<(Vec<usize>, Vec<usize>, usize)>,
    /// Shape table of irreducible identities, sorted by `(terms, factors)`.
    pub shapes: Vec<ShapePoint>,
    /// Whether every examined pair certified or was trivial.
    pub pass: bool,
}

impl SweepReport {
    /// Whether the table has an irreducible identity of the given uniform shape.
    pub fn has_shape(&self, terms: usize, factors: u32) -> bool {
        self.shapes.iter().any(|p| p.uniform && p.terms == terms && p.factors == factors)
    }
}

/// Compositions of `total` into `parts` positive integers, lexicographic.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every `(r, c)` within the bounds whose variety and mirror both have
/// positive charges and at least one fixed point.
pub fn sweep_diagrams(max_m: usize, max_n: usize, max_boxes: usize) -> Vec<BraneDiagram> {
    let mut out = Vec::new();
    for boxes in 1..=max_boxes {
        for m in 1..=max_m {
            for n in 1..=max_n {
                for r in compositions(boxes, m) {
                    for c in compositions(boxes, n) {
                        if !margins_feasible(&r, &c) {
                            continue;
                        }
                        let Ok(d) = BraneDiagram::new(r.clone(), c) else { continue };
                        if d.mirror().map(|dm| dm.has_positive_charges()).unwrap_or(false) {
                            out.push(d);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether some subset of the identity's terms, of size between 1 and
/// `max_size` and proper, sums to zero at every sampled point.
pub fn has_vanishing_subsum(rec: &IdentityRecord, max_size: usize, points: usize, seed: u64) -> Result<bool> {
    let k = rec.terms.len();
    if k < 2 {
        return Ok(false);
    }
    let cls = rec.expanded_class();
    let args = atom_arguments([&cls]);
    let q = Complex64::new(0.1, 0.1);
    let ctx = EvalCtx::new(q);
    let (n_a, n_z) = (rec.c.len(), rec.r.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7377_6565_70);
    let none = Substitution::new();
    let mut samples = Vec::new();
    for _ in 0..points.max(1) {
        let draw = |rng: &mut ChaCha8Rng| draw_point(rng, n_a, n_z, &[], Flavor::E, &args, &[q]);
        samples.push(with_resample(&mut rng, draw, |pt| term_values(&cls, &none, pt, &ctx))?);
    }
    let tol = rec.certification.tol.max(1e-10);
    let limit = max_size.min(k - 1);
    for mask in 1u64..(1u64 << k) - 1 {
        if mask.count_ones() as usize > limit {
            continue;
        }
        let vanishes = samples.iter().all(|vals| {
            let chosen: Vec<Complex64> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| vals[i]).collect();
            let sum: Complex64 = chosen.iter().sum();
            sum.norm() <= tol * term_scale(&chosen)
        });
        if vanishes {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sweeps every diagram within the bounds and tabulates the shapes of the
/// irreducible nontrivial identities.
pub fn sweep(opts: &SweepOptions) -> Result<SweepReport> {
    let mut varieties = Vec::new();
    let mut skipped = Vec::new();
    let mut table: BTreeMap<(usize, u32, bool), ShapePoint> = BTreeMap::new();
    for d in sweep_diagrams(opts.max_m, opts.max_n, opts.max_boxes) {
        let count = crate::bowcore::enumerate_fixed_points(d.r(), d.c()).len();
        if count > opts.max_fixed_points {
            skipped.push((d.r().to_vec(), d.c().to_vec(), count));
            continue;
        }
        let setup = MirrorSetup::new(d.r(), d.c())?;
        let pairs: Vec<(usize, usize)> = (0..count).flat_map(|f| (0..count).filter(move |&g| g != f).map(move |g| (f, g))).collect();
        let results = pairs
            .par_iter()
            .map(|&(f, g)| -> Result<(IdentityRecord, bool)> {
                let rec = setup.identity(f, g, &opts.mirror)?;
                let reducible = if rec.trivial || !rec.certification.certified {
                    false
                } else {
                    has_vanishing_subsum(&rec, opts.subset_max, opts.subset_points, opts.mirror.seed)?
                };
                Ok((rec, reducible))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut summary = SweepVariety {
            r: d.r().to_vec(),
            c: d.c().to_vec(),
            fixed_points: count,
            pairs: pairs.len(),
            nontrivial: 0,
            tautological: 0,
            irreducible: 0,
            failed: Vec::new(),
        };
        for (rec, reducible) in results {
            if rec.trivial {
                continue;
            }
            summary.nontrivial += 1;
            if !rec.certification.certified {
                summary.failed.push(rec.ids);
                continue;
            }
            if rec.terms.is_empty() {
                summary.tautological += 1;
                continue;
            }
            if reducible {
                continue;
            }
            summary.irreducible += 1;
            let (terms, counts) = rec.shape();
            let factors = counts.iter().copied().max().unwrap_or(0);
            let uniform = rec.uniform_shape().is_some();
            table
                .entry((terms, factors, uniform))
                .or_insert_with(|| ShapePoint {
                    terms,
                    factors,
                    uniform,
                    count: 0,
                    example: (rec.r.clone(), rec.c.clone(), rec.ids.0, rec.ids.1),
                })
                .count += 1;
        }
        varieties.push(summary);
    }
    let pass = varieties.iter().all(|v| v.failed.is_empty());
    Ok(SweepReport { options: opts.clone(), varieties, skipped, shapes: table.into_values().collect(), pass })
}
