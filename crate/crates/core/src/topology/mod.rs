//! Winding numbers, certified paths in commutant groups, multiplicative
//! cutoffs, and the sphere example with its obstruction integer.

pub mod cutoff;
pub mod path;
pub mod sphere;
pub mod winding;

pub use cutoff::{multiplicative_cutoff, Cutoff, GluedMap};
pub use path::{gcom_path, PiecewisePath};
pub use sphere::{sphere_example, splitting_obstruction, SphereExample};
pub use winding::{winding_number, SampledLoop};
