//! Exact, desk-scale semantics for a small call-by-name probabilistic
//! language, together with the algebraic model it is interpreted in.
//!
//! The crate is organised in four layers:
//!
//! * [`measure`]: sub-probability measures, both as exact finite weight
//!   tables and as seeded samplers, with the monad structure (unit,
//!   expectation, countable sums) and statistical comparison tools.
//! * [`convex`]: finite-dimensional convex objects: a web of coordinates
//!   plus generating sets for the point and test polytopes, the pairing,
//!   polar duals by exact vertex enumeration, and the connectives
//!   (tensor, linear maps, with, plus).
//! * [`bang`]: symmetric tensor powers in the multiset basis, the
//!   degree-indexed projection/section family, truncated exponentials,
//!   the comonoid structure, analytic maps as power series, and least
//!   fixed points by Kleene iteration.
//! * [`lang`]: the language front end (parser, typechecker) and its two
//!   back ends: an exact denotational interpreter for the discrete
//!   fragment and a seeded operational sampler for the full language.
//!
//! Everything algebraic is computed in arbitrary-precision rationals;
//! doubles only appear in Monte-Carlo summaries. All samplers are driven
//! by explicit seed streams, so every result is reproducible and
//! independent of the parallel schedule.

pub mod bang;
pub mod convex;
pub mod lang;
pub mod laws;
pub mod measure;
pub mod rat;
pub mod report;
pub mod seed;

pub use rat::Rat;
