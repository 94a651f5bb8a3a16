//! Statevector simulation of the purified-oracle bit-fixing game, the per-step bound
//! checks, Grover baselines and the alternating game.

mod altgame;
mod game;
mod grover;
mod layout;
mod program;
mod suite;

pub use altgame::{alternating_game, MAX_N as ALTGAME_MAX_N, Adversary, AltGameReport, AltGameRow, QueryAdversary, SwapAdversary};
pub use game::{
    final_state, monte_carlo_check, run_bit_fixing, ChallengeOutcome, GameTranscript, LemmaCheck, MonteCarloReport,
    NORM_TOLERANCE, SLACK_TOLERANCE, SUBSPACE_TOLERANCE,
};
pub use grover::{grover_fit, grover_invert, GroverFit, GroverPoint};
pub use layout::{JointState, Register, RegisterLayout, DEFAULT_BUDGET};
pub use program::{
    dft, diffusion, empty_program, grover_program, phase_flip, query_and_store_program, random_program, swap,
    AlgorithmProgram, LocalUnitary, Step,
};
pub use suite::{lemma_suite, LemmaSuiteConfig, LemmaSuiteReport, ProgramSummary};
