//! Finite-dimensional convex objects and the linear-logic connectives.
//!
//! An object is a web (ordered coordinate labels) with two generating
//! sets: points and tests, pairing into `[0, 1]`. Composite objects are
//! built structurally for the additives and by exact polar vertex
//! enumeration for the multiplicatives.

mod multimap;
mod object;
mod polar;
mod sym;
mod web;

pub use multimap::{kernel_to_linear, linear_to_kernel, lolli_object, MultiMap};
pub use object::ConvexObject;
pub use polar::{polar_vertices, same_polytope, PolarError, MAX_GENS, MAX_WEB};
pub use sym::{decode_index, encode_index, permutations, pure_tensor, symmetrize_full};
pub use web::{CVec, Web};
