//! Matching a 3-term identity against Fay's trisecant identity.
//!
//! With `x_1x_2x_3 = y_1y_2y_3 = 1` the cleared trisecant identity reads
//!
//! `θ(x_3)θ(y_3)θ(x_1y_2)θ(x_2/y_1) + θ(x_1)θ(y_1)θ(x_2y_3)θ(x_3/y_2)
//!  + θ(x_2)θ(y_2)θ(x_3y_1)θ(x_1/y_3) = 0`.

use serde::{Deserialize, Serialize};

use super::mirror::{IdentityRecord, IdentityTerm};
use crate::expr::Monomial;

/// Which variables an identity is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// The variables of `X(r, c)`.
    Variety,
    /// The variables of the mirror `X(r!, c!)`.
    Mirror,
}

/// Trisecant parameters `x_1, x_2, x_3` and `y_1, y_2, y_3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FayParams {
    /// `x_1, x_2, x_3`.
    pub x: [Monomial; 3],
    /// `y_1, y_2, y_3`.
    pub y: [Monomial; 3],
}

impl FayParams {
    /// Builds the parameters from `x_1, x_2, y_1, y_2`.
    pub fn from_free(x1: Monomial, x2: Monomial, y1: Monomial, y2: Monomial) -> FayParams {
        let x3 = x1.mul(&x2).inv();
        let y3 = y1.mul(&y2).inv();
        FayParams { x: [x1, x2, x3], y: [y1, y2, y3] }
    }

    /// The three cleared terms, each a list of four theta arguments.
    pub fn terms(&self) -> [[Monomial; 4]; 3] {
        let [x1, x2, x3] = &self.x;
        let [y1, y2, y3] = &self.y;
        [
            [x3.clone(), y3.clone(), x1.mul(y2), x2.div(y1)],
            [x1.clone(), y1.clone(), x2.mul(y3), x3.div(y2)],
            [x2.clone(), y2.clone(), x3.mul(y1), x1.div(y3)],
        ]
    }
}

/// Sorted oriented arguments of a 4-factor product, with the sign picked
/// up by orienting.
fn oriented(args: &[Monomial]) -> Option<(Vec<Monomial>, i32)> {
    let mut sign = 1;
    let mut out = Vec::with_capacity(args.len());
    for a in args {
        if a.is_one() {
            return None;
        }
        let (o, flipped) = a.oriented();
        if flipped {
            sign = -sign;
        }
        out.push(o);
    }
    out.sort();
    Some((out, sign))
}

/// Every trisecant assignment reproducing `terms` up to an overall sign.
/// Empty unless there are exactly three terms of four simple factors.
pub fn fay_solutions(terms: &[IdentityTerm]) -> Vec<FayParams> {
    if terms.len() != 3 || terms.iter().any(|t| t.factors.len() != 4 || t.factor_count() != 4) {
        return Vec::new();
    }
    let record: Vec<(Vec<Monomial>, num_rational::Rational64)> = terms
        .iter()
        .map(|t| {
            let mut args: Vec<Monomial> = t.factors.iter().map(|f| f.arg.clone()).collect();
            args.sort();
            (args, t.coeff)
        })
        .collect();
    let choices = |term: &[Monomial]| -> Vec<(Monomial, Monomial)> {
        let mut out = Vec::new();
        for (i, a) in term.iter().enumerate() {
            for (j, b) in term.iter().enumerate() {
                if i == j {
                    continue;
                }
                for sa in [false, true] {
                    for sb in [false, true] {
                        let x = if sa { a.inv() } else { a.clone() };
                        let y = if sb { b.inv() } else { b.clone() };
                        out.push((x, y));
                    }
                }
            }
        }
        out
    };
    let mut found = Vec::new();
    for i2 in 0..3 {
        for i3 in (0..3).filter(|&i| i != i2) {
            let i1 = 3 - i2 - i3;
            for (x1, y1) in choices(&record[i2].0) {
                for (x2, y2) in choices(&record[i3].0) {
                    let p = FayParams::from_free(x1.clone(), x2.clone(), y1.clone(), y2.clone());
                    if matches(&p, &record, [i1, i2, i3]) {
                        found.push(p);
                    }
                }
            }
        }
    }
    found.sort();
    found.dedup();
    found
}

fn matches(p: &FayParams, record: &[(Vec<Monomial>, num_rational::Rational64)], order: [usize; 3]) -> bool {
    let mut ratio = None;
    for (pred, &idx) in p.terms().iter().zip(order.iter()) {
        let Some((args, sign)) = oriented(pred) else { return false };
        if args != record[idx].0 {
            return false;
        }
        let r = record[idx].1 * num_rational::Rational64::from_integer(sign as i64);
        match ratio {
            None => ratio = Some(r),
            Some(q) if q == r => {}
            Some(_) => return false,
        }
    }
    true
}

/// The trisecant parameters of a record's identity in the given frame, or
/// `None` when the identity is not a trisecant identity.
pub fn fay_normal_form(rec: &IdentityRecord, frame: Frame) -> Option<Vec<FayParams>> {
    let terms = match frame {
        Frame::Variety => &rec.terms,
        Frame::Mirror => &rec.mirror_terms,
    };
    let sols = fay_solutions(terms);
    (!sols.is_empty()).then_some(sols)
}
