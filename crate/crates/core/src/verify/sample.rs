//! Random evaluation points with a conditioning guard.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{EvalPoint, Flavor, FlavorClass, Monomial, Var};

/// Arguments closer than this (in log distance) to the zero set are rejected.
pub const ZERO_SET_DISTANCE: f64 = 1e-4;

/// The zero set tested is `{q^n : |n| ≤ ZERO_SET_DEPTH}`.
pub const ZERO_SET_DEPTH: i64 = 8;

/// Redraws allowed before a sampling problem is reported.
pub const MAX_REDRAWS: usize = 200;

/// Whether `exp(log_x)` lies within `ZERO_SET_DISTANCE` of a zero of the
/// atom of `flavor` (`q^n` for theta, `1` for the other two atoms).
pub fn near_zero_set(flavor: Flavor, log_x: Complex64, q: Complex64) -> bool {
    let depth = if flavor == Flavor::E && q.norm() > 0.0 { ZERO_SET_DEPTH } else { 0 };
    let log_q = if depth > 0 { q.ln() } else { Complex64::new(0.0, 0.0) };
    (-depth..=depth).any(|n| {
        let mut d = log_x - log_q * n as f64;
        if flavor != Flavor::H {
            d.im = (d.im + PI).rem_euclid(2.0 * PI) - PI;
        }
        d.norm() < ZERO_SET_DISTANCE
    })
}

/// Every atom argument appearing in `classes`.
pub fn atom_arguments<'a>(classes: impl IntoIterator<Item = &'a FlavorClass>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = classes
        .into_iter()
        .flat_map(|c| c.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.arg.clone())))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Draws a point (`a_1..a_n`, `z_1..z_m`, ℏ, `extra`) whose values keep every
/// argument in `args` away from the zero set for every nome in `q_list`.
pub fn draw_point<R: Rng>(
    rng: &mut R,
    n_a: usize,
    n_z: usize,
    extra: &[Var],
    flavor: Flavor,
    args: &[Monomial],
    q_list: &[Complex64],
) -> Result<EvalPoint> {
    for _ in 0..MAX_REDRAWS {
        let pt = EvalPoint::random(rng, n_a, n_z, extra);
        if point_is_clear(&pt, flavor, args, q_list)? {
            return Ok(pt);
        }
    }
    Err(Error::Resample(format!("no admissible point after {MAX_REDRAWS} draws")))
}

/// Whether no argument in `args` is near the zero set at `pt`.
pub fn point_is_clear(pt: &EvalPoint, flavor: Flavor, args: &[Monomial], q_list: &[Complex64]) -> Result<bool> {
    for x in args {
        let l = x.log_value(&pt.logs)?;
        if q_list.iter().any(|&q| near_zero_set(flavor, l, q)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs `f` on freshly drawn points until it does not report a resample.
pub fn with_resample<R: Rng, T>(rng: &mut R, mut draw: impl FnMut(&mut R) -> Result<EvalPoint>, mut f: impl FnMut(&EvalPoint) -> Result<T>) -> Result<T> {
    let mut last = None;
    for _ in 0..MAX_REDRAWS {
        let pt = draw(rng)?;
        match f(&pt) {
            Err(Error::Resample(msg)) => last = Some(msg),
            other => return other,
        }
    }
    Err(Error::Resample(last.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_set_membership() {
        let q = Complex64::new(0.1, 0.0);
        assert!(near_zero_set(Flavor::E, Complex64::new(0.0, 2.0 * PI), q));
        assert!(near_zero_set(Flavor::E, q.ln() * 3.0, q));
        assert!(!near_zero_set(Flavor::E, Complex64::new(0.3, 0.2), q));
        assert!(near_zero_set(Flavor::K, Complex64::new(1e-6, 0.0), Complex64::new(0.0, 0.0)));
        assert!(!near_zero_set(Flavor::H, Complex64::new(0.0, 2.0 * PI), q));
    }
}
