//! Per-variety cache of fixed points and `W` functions.

use rayon::prelude::*;

use crate::bowcore::{enumerate_fixed_points, euler_class, negative_part, tangent_character, BraneDiagram, Chamber, FixedPoint};
use crate::error::{Error, Result};
use crate::expr::{Flavor, FlavorClass};
use crate::stab::{restrict_class, w_function, Restricted, StabOptions, StabResult};

/// All fixed points of a variety and their `W` functions for one chamber
/// and flavor.
#[derive(Clone, Debug)]
pub struct Variety {
    /// The diagram.
    pub diagram: BraneDiagram,
    /// The chamber.
    pub chamber: Chamber,
    /// The flavor.
    pub flavor: Flavor,
    /// Options used for every `W`.
    pub options: StabOptions,
    /// Fixed points in enumeration order (ID = index + 1).
    pub points: Vec<FixedPoint>,
    /// `W(f)` for every fixed point, same order.
    pub w: Vec<StabResult>,
}

impl Variety {
    /// Enumerates the fixed points of `diagram` and computes every `W`.
    pub fn new(diagram: BraneDiagram, chamber: Chamber, flavor: Flavor, options: StabOptions) -> Result<Variety> {
        if chamber.n() != diagram.n() {
            return Err(Error::Input(format!("chamber {chamber} has the wrong size for {} D5 branes", diagram.n())));
        }
        let points = enumerate_fixed_points(diagram.r(), diagram.c());
        if points.is_empty() {
            return Err(Error::Input(format!("X(r={:?}, c={:?}) has no fixed points", diagram.r(), diagram.c())));
        }
        let w = points
            .par_iter()
            .map(|f| w_function(f, &chamber, flavor, &options))
            .collect::<Result<Vec<_>>>()?;
        Ok(Variety { diagram, chamber, flavor, options, points, w })
    }

    /// Number of fixed points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether there are no fixed points (never true for a constructed variety).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of a fixed point.
    pub fn index_of(&self, f: &FixedPoint) -> Option<usize> {
        self.points.iter().position(|p| p == f)
    }

    /// Index of a fixed point, or an input error.
    pub fn require(&self, f: &FixedPoint) -> Result<usize> {
        self.index_of(f)
            .ok_or_else(|| Error::Input(format!("{f} is not a fixed point of X(r={:?}, c={:?})", self.diagram.r(), self.diagram.c())))
    }

    /// `W(f_i)|_{f_j}`.
    pub fn restrict(&self, i: usize, j: usize, seed: u64) -> Result<Restricted> {
        restrict_class(&self.w[i].class, &self.points[j], seed)
    }

    /// The Euler class of the chamber-negative tangent directions at `f_j`.
    pub fn diagonal_class(&self, j: usize) -> Result<FlavorClass> {
        let ch = tangent_character(&self.points[j]);
        let neg = negative_part(&ch, &self.chamber, self.options.convention)?;
        euler_class(&neg, self.flavor)
    }
}
