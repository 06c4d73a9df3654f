//! Periodic hyperplane arrangements on R^n / Z^n, the cell complexes they
//! induce, and cellular group actions on them.

mod complex;
mod family;
mod torus;

pub use complex::EquivariantComplex;
pub use family::{Arrangement, HyperplaneFamily};
pub use torus::{build_torus_complex, equivariant_refine, install_action, TorusComplex, MAX_GEOMETRIC_DIM};
