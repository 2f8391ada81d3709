//! End-to-end certifications: axiom suites, mirror-symmetry identities,
//! limits, the bounded sweep and identity export.

pub mod axioms;
pub mod fay;
pub mod latex;
pub mod limits;
pub mod mirror;
pub mod sample;
pub mod sweep;
pub mod variety;

pub use axioms::{check_axioms, check_variety, transitive_closure, transitive_reduction, AxiomOptions, AxiomReport, DiagonalCheck};
pub use fay::{fay_normal_form, fay_solutions, FayParams, Frame};
pub use limits::{leading_degree, limit_suite, LimitEntry, LimitOptions, LimitReport, Pinning};
pub use latex::{identity_latex, identity_text, monomial_latex};
pub use mirror::{default_nomes, mirror_identity, swap_monomial, Certification, HbarSwap, IdentityRecord, IdentityTerm, MirrorOptions, MirrorSetup, Ratio, ThetaFactor};
pub use sweep::{compositions, has_vanishing_subsum, sweep, sweep_diagrams, ShapePoint, SweepOptions, SweepReport, SweepVariety};
pub use variety::Variety;
