//! The exponential modality over finite-dimensional objects: symmetric
//! powers in the multiset basis, the projection/section map family, the
//! free commutative comonoid, analytic maps, and least fixed points.

pub mod analytic;
pub mod basis;
pub mod checks;
pub mod comonoid;
pub mod element;
pub mod maps;

pub use analytic::{agg_power, fix, star_free_part, AnalyticMap, FixError, FixOutcome};
pub use basis::{MsetBasis, SymComponent};
pub use comonoid::{
    ambient_matrix, cont_pair, cont_pair_oracle, der_after_dig, kleisli_apply, kleisli_compose,
    push_dig, unstore_pair, BangCoords, DigMachine, PairComponent, StoreMachine,
};
pub use element::{nabla, BangError, PromotedSum, TruncatedBang};
pub use maps::{extract_d, proj_j, proj_j_step, proj_m, rho, sec_k, sec_n, theta_components};
