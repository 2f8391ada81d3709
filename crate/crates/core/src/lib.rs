//! Stable envelopes on type-A Cherkis bow varieties via the framed shuffle algebra.
//!
//! The crate is organised bottom-up:
//!
//! - [`bowcore`]: brane diagrams, fixed points (binary contingency tables),
//!   tie geometry, the mirror transform, fixed-point restriction rules and
//!   tangent characters.
//! - [`expr`]: the variable alphabet, half-integer Laurent monomials, flavored
//!   (cohomological / K-theoretic / elliptic) term lists, theta evaluation and
//!   exact rational arithmetic for the cohomological flavor.
//! - [`shuffle`]: kernel functions, the shuffle product and wheel conditions.
//! - [`stab`]: one-tie generators, the ordered product `W̃`, the correction
//!   factors and the `W` function, plus limit-aware fixed-point restriction.
//! - [`verify`]: axiom suites, mirror-symmetry identities and their export.

pub mod bowcore;
pub mod error;
pub mod expr;
pub mod shuffle;
pub mod stab;
pub mod verify;

pub use error::{Error, Result};
