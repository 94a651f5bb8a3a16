use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("box ({row},{col}) is not in the diagram {partition:?}")]
    BoxOutsideDiagram {
        partition: Vec<usize>,
        row: usize,
        col: usize,
    },

    #[error("bar of {theta:?} is not a valid diagram for N = {n}")]
    InvalidBar { theta: Vec<usize>, n: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("N = {n} exceeds the capacity cap {cap} (raise it with PERMINV_MAX_N, at most 7)")]
    Capacity { n: usize, cap: usize },

    #[error("invalid partial assignment {pairs:?} for N = {n}")]
    InvalidAssignment { pairs: Vec<(usize, usize)>, n: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("register layout of dimension {dim} exceeds the memory budget of {budget} amplitudes")]
    Budget { dim: usize, budget: usize },

    #[error("program {program:?}: {reason}")]
    InvalidProgram { program: String, reason: String },

    #[error("program {program:?} postselects b = 0 with probability {mass:e}; the bit-fixing game requires P[b = 0] > 0")]
    ZeroPostselection { program: String, mass: f64 },

    #[error("inversion of y = {y} exceeded the {cap}-query walk cap; table does not match the oracle")]
    WalkExceeded { y: u32, cap: u64 },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
