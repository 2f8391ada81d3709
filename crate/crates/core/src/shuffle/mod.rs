//! The shuffle algebra: graded symmetric functions, the kernel and the
//! ⋆-product, plus numerical wheel and symmetry checks.

pub mod graded;
pub mod star;
pub mod wheel;

pub use graded::{charges_of, GradedFunction};
pub use star::{kernel, kernel_with, star, subsets};
pub use wheel::{symmetry_check, wheel_check, wheel_sites, CheckReport, WheelFamily, WheelSite};
