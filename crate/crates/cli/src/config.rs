//! Command-line configuration and validation.

use clap::{Args, Parser, Subcommand, ValueEnum};

use qjump_core::algorithms::AlgorithmKind;
use qjump_core::montecarlo::{Angle, ErrorKind, ErrorSpec, Placement};

#[derive(Debug, Parser)]
#[command(
    name = "qjump",
    about = "Fault-injection resilience benchmark for quantum algorithms",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convergence table: trajectory ensembles vs the master-equation oracle.
    Equivalence(EquivalenceArgs),
    /// Run a single experiment cell.
    Case(CaseArgs),
    /// Run a grid of experiment cells.
    Sweep(SweepArgs),
    /// Print an algorithm circuit in the line-oriented text format.
    DumpCircuit(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Write to this path instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    /// Comma-separated step sizes.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001")]
    pub dts: Vec<f64>,
    /// Comma-separated trajectory counts.
    #[arg(long, value_delimiter = ',', default_value = "1,100,2500,10000")]
    pub ms: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ErrorKindArg {
    Pauli,
    X,
    Y,
    Z,
    Rz,
}

impl From<ErrorKindArg> for ErrorKind {
    fn from(value: ErrorKindArg) -> ErrorKind {
        match value {
            ErrorKindArg::Pauli => ErrorKind::Pauli,
            ErrorKindArg::X => ErrorKind::X,
            ErrorKindArg::Y => ErrorKind::Y,
            ErrorKindArg::Z => ErrorKind::Z,
            ErrorKindArg::Rz => ErrorKind::Rz,
        }
    }
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    /// Algorithm name: bernstein-vazirani (bv), deutsch-jozsa (dj), grover,
    /// simon, qpe, eoh.
    #[arg(long)]
    pub algorithm: String,
    /// Grid size in total qubits.
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, value_enum)]
    pub error: ErrorKindArg,
    /// Rotation angle for rz errors: pi/2, pi/4, pi/8, pi/16, pi/32, or a
    /// float with --free-angle.
    #[arg(long)]
    pub angle: Option<String>,
    /// Accept angles outside the benchmark set.
    #[arg(long, default_value_t = false)]
    pub free_angle: bool,
    /// Errors per run (0 = noiseless control).
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Fixed fault sites (comma-separated node indices) instead of uniform
    /// random placement.
    #[arg(long, value_delimiter = ',')]
    pub sites: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    #[arg(long, default_value_t = 8)]
    pub capacity_n: u64,
    /// Override the run count that sigma/capacity-n would give.
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated algorithm names, or "all".
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub algorithms: Vec<String>,
    /// Comma-separated grid sizes; defaults to each algorithm's benchmark
    /// sizes.
    #[arg(long, value_delimiter = ',')]
    pub qubits: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub error: ErrorKindArg,
    /// Angles for rz sweeps: "all" for the benchmark set, or a
    /// comma-separated list.
    #[arg(long, value_delimiter = ',')]
    pub angles: Option<Vec<String>>,
    #[arg(long, default_value_t = false)]
    pub free_angle: bool,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    #[arg(long, default_value_t = 8)]
    pub capacity_n: u64,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(long)]
    pub algorithm: String,
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

pub fn parse_algorithm(name: &str) -> Result<AlgorithmKind, String> {
    AlgorithmKind::parse(name).ok_or_else(|| {
        format!(
            "unknown algorithm '{name}' (expected one of: bernstein-vazirani, \
             deutsch-jozsa, grover, simon, qpe, eoh)"
        )
    })
}

pub fn parse_algorithms(names: &[String]) -> Result<Vec<AlgorithmKind>, String> {
    if names.len() == 1 && names[0].eq_ignore_ascii_case("all") {
        return Ok(AlgorithmKind::ALL.to_vec());
    }
    names.iter().map(|n| parse_algorithm(n)).collect()
}

/// Parse and validate one rotation angle. Angles outside the benchmark set
/// {pi/2, pi/4, pi/8, pi/16, pi/32} need `--free-angle`.
pub fn parse_angle(text: &str, free_angle: bool) -> Result<Angle, String> {
    let angle = Angle::parse(text).ok_or_else(|| format!("cannot parse angle '{text}'"))?;
    if !free_angle && !Angle::BENCHMARK.contains(&angle) {
        return Err(format!(
            "angle '{text}' is not in {{pi/2, pi/4, pi/8, pi/16, pi/32}}; \
             pass --free-angle to allow it"
        ));
    }
    Ok(angle)
}

/// Build the validated error spec for a case.
pub fn build_error_spec(
    kind: ErrorKindArg,
    angle: &Option<String>,
    free_angle: bool,
    count: usize,
    sites: Option<Vec<usize>>,
) -> Result<ErrorSpec, String> {
    let kind: ErrorKind = kind.into();
    let angle = match (kind, angle) {
        (ErrorKind::Rz, Some(text)) => Some(parse_angle(text, free_angle)?),
        (ErrorKind::Rz, None) => {
            return Err("rz errors require --angle".into());
        }
        (_, Some(_)) => {
            return Err("--angle is only valid with --error rz".into());
        }
        (_, None) => None,
    };
    if count > 2 {
        return Err("--count must be 0, 1, or 2".into());
    }
    let placement = match sites {
        Some(indices) => Placement::Fixed(indices),
        None => Placement::UniformRandom,
    };
    Ok(ErrorSpec {
        kind,
        angle,
        count,
        placement,
    })
}

/// Angle list for a sweep: rz sweeps default to the five benchmark angles.
pub fn build_sweep_angles(
    kind: ErrorKindArg,
    angles: &Option<Vec<String>>,
    free_angle: bool,
) -> Result<Vec<Option<Angle>>, String> {
    if ErrorKind::from(kind) != ErrorKind::Rz {
        if angles.is_some() {
            return Err("--angles is only valid with --error rz".into());
        }
        return Ok(vec![None]);
    }
    match angles {
        None => Ok(Angle::BENCHMARK.iter().map(|&a| Some(a)).collect()),
        Some(list) if list.len() == 1 && list[0].eq_ignore_ascii_case("all") => {
            Ok(Angle::BENCHMARK.iter().map(|&a| Some(a)).collect())
        }
        Some(list) => list
            .iter()
            .map(|t| parse_angle(t, free_angle).map(Some))
            .collect(),
    }
}
