//! The ambient field `K = GF(q)(t1, ..., tn)`.

mod ambient;
mod linsolve;
mod pcoords;
mod ratfunc;

pub use ambient::AmbientField;
pub use linsolve::{linear_solve, LinearSolution};
pub use pcoords::{p_coordinates, pth_root, PCoordinates};
pub use ratfunc::RatFunc;
