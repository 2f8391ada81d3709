//! Stable envelopes from the shuffle algebra: one-tie functions, `W̃`, the
//! normalization factors, `W`, and limit-aware restriction to fixed points.

pub mod closed;
pub mod factors;
pub mod restrict;
pub mod slopes;
pub mod wfunc;
pub mod wtilde;

pub use closed::{projective_closed_form, projective_diagonal, projective_diagram, projective_fixed_point};
pub use factors::{epsilon_factor, eu_factor, t0_substitution, tau_factor};
pub use restrict::{restrict_class, Restricted};
pub use slopes::{is_generic, SlopeConfig, SlopeMode};
pub use wfunc::{w_function, StabOptions, StabResult};
pub use wtilde::{one_tie, tie_order, wtilde};
