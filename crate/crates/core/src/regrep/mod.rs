//! The regular representation `ℂ[S_N]` for small `N`: partial-assignment subspaces, the
//! high/low subspaces for a challenge, `M`, isotypic projectors and the brute-force checks
//! built on them.

mod assignment;
mod checks;
mod group;
mod operator;
mod permutation;
mod rep;
mod vector;

pub use assignment::PartialAssignment;
pub use checks::*;
pub use group::{capacity_cap, check_capacity, SymmetricGroup, DEFAULT_MAX_N, HARD_MAX_N, MAX_N_ENV};
pub use operator::{OperatorKind, ProjectionOperator};
pub use permutation::Permutation;
pub use rep::RegularRep;
pub use vector::{Amplitudes, GroupAlgebraVector};
