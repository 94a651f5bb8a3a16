use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "perminv",
    version,
    about = "Verification suites for permutation-inversion query bounds",
    propagate_version = true
)]
pub struct Cli {
    /// Seed for every pseudo-random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format; `hellman` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Exact Young-diagram tables.
    Young {
        #[command(subcommand)]
        table: YoungCommand,
    },
    /// Eigendecompose M and compare against the closed form.
    Spectrum(NArgs),
    /// Average high-subspace bound on A_k.
    Avgbound(AvgboundArgs),
    /// Dimensions and ranks of the partial-assignment and high/low subspaces.
    DecompCheck(DecompArgs),
    /// Subspace-containment and per-step bounds on seeded random programs.
    LemmaCheck(LemmaArgs),
    /// Run one program in the bit-fixing game.
    Game(GameArgs),
    /// Alternating-measurement game against seeded adversaries.
    Altgame(AltgameArgs),
    /// Grover baseline against the closed form.
    Grover(GroverArgs),
    /// Classical checkpoint-table inversion sweep.
    Hellman(HellmanArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "table", rename_all = "kebab-case")]
pub enum YoungCommand {
    /// Irrep dimensions by hook length.
    Dims(NArgs),
    /// Branching rule d_λ = Σ d_μ over removable boxes.
    Branching(NArgs),
    /// Character table.
    Characters(NArgs),
    /// Eigenvalues of M on each isotypic block.
    Eigenvalues(NArgs),
    /// Exact identity sweep.
    Identities(IdentityArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct NArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 30)]
    pub max_n: usize,
    /// Character orthogonality is checked up to this size.
    #[arg(long, default_value_t = 8)]
    pub orth_max_n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct AvgboundArgs {
    #[arg(long)]
    pub n: usize,
    /// Single level; default is every k ≤ min(3, n).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct DecompArgs {
    #[arg(long)]
    pub n: usize,
    /// Force exact ranks, chain and level checks on or off.
    #[arg(long)]
    pub exact: Option<bool>,
    /// Force the refined projector identities on or off.
    #[arg(long)]
    pub refined: Option<bool>,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub programs: usize,
    /// Largest offline query count.
    #[arg(long, default_value_t = 1)]
    pub max_p: usize,
    /// Largest online query count.
    #[arg(long, default_value_t = 2)]
    pub max_t: usize,
    /// Cap on P + T.
    #[arg(long, default_value_t = 3)]
    pub max_queries: usize,
    /// Workspace register dimension.
    #[arg(long, default_value_t = 1)]
    pub w: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProgramKind {
    Empty,
    Store,
    Grover,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct GameArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ProgramKind::Random)]
    pub program: ProgramKind,
    /// Grover iterations (each costs N queries).
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub w: usize,
    /// Also evaluate the subspace and per-step bounds.
    #[arg(long)]
    pub check: bool,
    /// Sample terminal measurements for this many shots per challenge.
    #[arg(long)]
    pub shots: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    Query,
    Uniform,
    Swap,
}

#[derive(Debug, Args, Serialize)]
pub struct AltgameArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub g: usize,
    #[arg(long, default_value_t = 10)]
    pub adversaries: usize,
    #[arg(long, value_enum, default_value_t = AdversaryKind::Query)]
    pub adversary: AdversaryKind,
    /// Advice register dimension.
    #[arg(long, default_value_t = 2)]
    pub advice_dim: usize,
    /// Workspace register dimension.
    #[arg(long, default_value_t = 1)]
    pub workspace: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct GroverArgs {
    #[arg(long)]
    pub n: usize,
    /// Iteration counts (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10])]
    pub t: Vec<usize>,
    /// Also report goodness of fit against (2T+1)²/N.
    #[arg(long)]
    pub fit: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct HellmanArgs {
    /// N = 2^log_n.
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub log_n: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Checkpoint spacings (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Young { table } => format!(
                "young-{}",
                match table {
                    YoungCommand::Dims(_) => "dims",
                    YoungCommand::Branching(_) => "branching",
                    YoungCommand::Characters(_) => "characters",
                    YoungCommand::Eigenvalues(_) => "eigenvalues",
                    YoungCommand::Identities(_) => "identities",
                }
            ),
            Command::Spectrum(_) => "spectrum".into(),
            Command::Avgbound(_) => "avgbound".into(),
            Command::DecompCheck(_) => "decomp-check".into(),
            Command::LemmaCheck(_) => "lemma-check".into(),
            Command::Game(_) => "game".into(),
            Command::Altgame(_) => "altgame".into(),
            Command::Grover(_) => "grover".into(),
            Command::Hellman(_) => "hellman".into(),
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Hellman(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}
