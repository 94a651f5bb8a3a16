//! Verification laboratory for quantum time–space tradeoffs of permutation inversion.
//!
//! * [`young`]: exact Young-diagram combinatorics and the closed-form spectrum of `M`.
//! * [`regrep`]: the regular representation of `S_N` materialized for small `N`, with the
//!   partial-assignment subspaces, high/low projectors, `M` and isotypic projectors.
//! * [`querysim`]: purified-oracle statevector simulation of the bit-fixing game, Grover
//!   search and the alternating-measurement game.
//! * [`attacks`]: the classical Hellman-style cycle-walking attack and its tradeoff sweep.

pub mod attacks;
pub mod linalg;
pub mod querysim;
pub mod regrep;
pub mod report;
pub mod young;

mod error;

pub use error::{Error, Result};
pub use regrep::{Permutation, RegularRep, SymmetricGroup};
pub use young::{BigCount, ExactRatio, Partition};
