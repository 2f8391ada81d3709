//! Symbolic expression layer: variables, monomials, flavored classes,
//! substitution, numeric evaluation and exact cohomological arithmetic.

pub mod class;
pub mod eval;
pub mod exact;
pub mod monomial;
pub mod theta;
pub mod var;

pub use class::{AtomKind, Factor, Flavor, FlavorClass, Term};
pub use eval::{evaluate, EvalCtx, EvalPoint, Precision};
pub use exact::{class_to_rational, LinearForm, Poly, RationalFunction};
pub use monomial::{Monomial, RatMonomial, Substitution};
pub use theta::{ahat_eval, theta_eval};
pub use var::Var;
