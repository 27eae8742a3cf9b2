//! Sub-probability measures.
//!
//! Two representations of the same monad: [`FiniteMeasure`] is an exact
//! weight table over finitely many atoms (weights are rationals summing
//! to at most one, missing mass models non-termination), and
//! [`SamplerMeasure`] is a seeded partial sampler: a total function from
//! a seed stream to either a value or the undefined point. The finite
//! form makes the monad laws exactly testable; the sampler form covers
//! continuous primitives and is compared against the finite form
//! statistically.

mod finite;
mod sampler;

pub use finite::{FiniteMeasure, MeasureError};
pub use sampler::{stat_distance, DistanceReport, DistanceVerdict, IntegralEstimate, SamplerMeasure};
