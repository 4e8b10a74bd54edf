use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonlocal_cast::verify::linear_grid;
use nonlocal_cast::ClonerFamily;

const SAMPLER_NOTE: &str = "Random states come from the purification sampler: a pure state on \
2⊗2⊗k with independent standard-normal real and imaginary components, normalized, with the \
k-dimensional ancilla traced out (k = --ancilla-dim, default 4).";

#[derive(Debug, Parser)]
#[command(name = "nonlocal-cast", version, about = "Bell nonlocality, steering and Buzek–Hillery cloning of two-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate CHSH, steering, LHS and entanglement criteria for a state file.
    Eval(EvalArgs),
    /// Clone a state and report whether the property is broadcast.
    Clone(CloneArgs),
    /// Run the numerical no-broadcasting theorem suites.
    #[command(after_long_help = SAMPLER_NOTE)]
    VerifyTheorems(VerifyArgs),
    /// Sweep a state family, optionally through a cloner.
    #[command(after_long_help = SAMPLER_NOTE)]
    Scan(ScanArgs),
    /// Compare closed-form cloner maps with the full isometry simulation.
    #[command(after_long_help = SAMPLER_NOTE)]
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Chsh,
    F3,
    Lhs,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateFamily {
    Werner,
    BellDiagonal,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    BhStandard,
    PaperLiteral,
    Both,
}

/// `start:stop:step`, inclusive of `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.step).expect("validated when parsed")
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got `{s}`"));
    };
    let num = |name: &str, v: &str| v.trim().parse::<f64>().map_err(|_| format!("grid {name} `{v}` is not a number"));
    let grid = Grid { start: num("start", start)?, stop: num("stop", stop)?, step: num("step", step)? };
    linear_grid(grid.start, grid.stop, grid.step).map_err(|e| e.to_string())?;
    Ok(grid)
}

fn parse_family(s: &str) -> Result<ClonerFamily, String> {
    s.parse().map_err(|e: nonlocal_cast::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClonerArgs {
    /// local_sd, nonlocal_sd, local_si or nonlocal_si.
    #[arg(long, value_parser = parse_family)]
    pub family: ClonerFamily,
    /// Machine parameter; required for state-dependent families.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Upper limit on μ; defaults to 1/√2 (local) or 1/√6 (nonlocal).
    #[arg(long)]
    pub mu_cap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON state file (`{"bloch": …}` or `{"density": …}`).
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = CriterionArg::All)]
    pub criterion: CriterionArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[command(flatten)]
    pub cloner: ClonerArgs,
    /// chsh, f3, or all (which adds entanglement); lhs is not a broadcast target.
    #[arg(long, value_enum, default_value_t = CriterionArg::All)]
    pub criterion: CriterionArg,
    /// Also simulate the isometry to obtain the within-lab pairs.
    #[arg(long)]
    pub oracle: bool,
    /// Write the cloned cross-lab pair as a state file.
    #[arg(long)]
    pub save_state: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem numbers to run (repeatable); all six by default.
    #[arg(long = "theorem", value_parser = clap::value_parser!(u8).range(1..=6))]
    pub theorems: Vec<u8>,
    /// Accepted random states per sampled theorem (1–4).
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// μ grid; defaults to {0.1, 0.2, …} below the cap plus the cap itself.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Overrides the per-theorem cap (1/√2, or 1/√6 for theorem 4).
    #[arg(long)]
    pub mu_cap: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub werner_step: f64,
    #[arg(long, default_value_t = 0.05)]
    pub bell_step: f64,
    #[arg(long, default_value_t = nonlocal_cast::sampling::DEFAULT_ANCILLA_DIM)]
    pub ancilla_dim: usize,
    /// Format of the summary on stdout.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// CSV of the cases closest to each theorem's boundary.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub family: StateFamily,
    /// Parameter grid: p for werner (default 0:1:0.01), each of c₁, c₂, c₃ for
    /// bell_diagonal (default -1:1:0.1). Ignored for random.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Number of random states.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = nonlocal_cast::sampling::DEFAULT_ANCILLA_DIM)]
    pub ancilla_dim: usize,
    /// Cloner applied to every grid point.
    #[arg(long, value_parser = parse_family)]
    pub cloner: Option<ClonerFamily>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu_cap: Option<f64>,
    #[arg(long, value_enum, default_value_t = CriterionArg::All)]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: ClonerFamily,
    #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
    pub convention: ConventionArg,
    /// λ grid for state-dependent families; defaults to 0:0.5:0.05 (local)
    /// or 0:0.25:0.025 (nonlocal).
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// μ cap for the grid points; defaults to 1 so the whole λ range is checked.
    #[arg(long, default_value_t = 1.0)]
    pub mu_cap: f64,
    /// Random input states per grid point.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = nonlocal_cast::sampling::DEFAULT_ANCILLA_DIM)]
    pub ancilla_dim: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
