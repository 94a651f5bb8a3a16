//! Classical Hellman-style inversion with cycle checkpoints, and `(S, T)` tradeoff sweeps.

mod hellman;
mod sweep;

pub use hellman::{build_table, invert, HellmanTable, OracleCounter};
pub use sweep::{
    sweep_permutation, tradeoff_sweep, verify_sweep, write_csv, AttackStats, SweepVerdict, FULL_SWEEP_N,
    MAX_SWEEP_N, SAMPLED_CHALLENGES,
};
