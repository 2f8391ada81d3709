//! Brane diagrams, fixed points and tangent characters.

pub mod bct;
pub mod character;
pub mod diagram;
pub mod restriction;

pub use bct::{enumerate_fixed_points, margins_feasible, Chamber, FixedPoint};
pub use character::{d5_character, euler_class, negative_part, tangent_character, CharacterSum, NegativeConvention};
pub use diagram::BraneDiagram;
pub use restriction::{decorations, restriction_substitution, right_bundle};
