//! The toy probabilistic language: parser, typechecker, exact
//! denotational interpreter for the discrete fragment, and the seeded
//! operational sampler for the full language.

pub mod adequacy;
pub mod ast;
pub mod denote;
pub mod opsem;
pub mod parser;
pub mod prims;
pub mod types;
pub mod value;

pub use adequacy::{compare_adequacy, compare_measures, AdequacyReport};
pub use ast::{Span, Term, TermKind, Type};
pub use denote::{copy_data, denote, denote_program, Denot, DenoteCtx, DenoteError};
pub use opsem::{estimate_dist, estimate_dist_seq, op_eval, DistEstimate};
pub use parser::{parse, parse_program, parse_type, SyntaxError};
pub use prims::{PrimInfo, PrimKind};
pub use types::{typecheck, TypeError, TypedTerm};
pub use value::CanonValue;
