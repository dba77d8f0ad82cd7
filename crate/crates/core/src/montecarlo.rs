//! The experiment harness: run-count formula, uniform error placement,
//! paired ideal/faulty execution, and success-ratio statistics.
//!
//! Runs within a case are independent; each gets its own ChaCha stream
//! derived from (master seed, case id, run index), and the aggregate is an
//! order-independent success count, so parallel and serial execution produce
//! identical reports.

use rand::Rng;

use crate::algorithms::{instance_for, AlgorithmKind};
use crate::circuit::CircuitDag;
use crate::error::{Error, Result};
use crate::exec;
use crate::gates::{self, PauliKind};
use crate::seeding;

/// Error rotation angle, kept in exact pi-fraction form where possible so
/// reports can round-trip it losslessly.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Angle {
    /// pi / denominator
    PiOver(u32),
    Radians(f64),
}

impl Angle {
    /// The five benchmark angles pi/2 .. pi/32.
    pub const BENCHMARK: [Angle; 5] = [
        Angle::PiOver(2),
        Angle::PiOver(4),
        Angle::PiOver(8),
        Angle::PiOver(16),
        Angle::PiOver(32),
    ];

    pub fn radians(&self) -> f64 {
        match self {
            Angle::PiOver(d) => std::f64::consts::PI / *d as f64,
            Angle::Radians(r) => *r,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Angle::PiOver(d) => format!("pi/{d}"),
            Angle::Radians(r) => format!("{r}"),
        }
    }

    pub fn parse(text: &str) -> Option<Angle> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("pi/") {
            return rest.parse::<u32>().ok().map(Angle::PiOver);
        }
        t.parse::<f64>().ok().map(Angle::Radians)
    }
}

/// Which gate gets injected at a fault site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ErrorKind {
    /// Uniform mixture over {X, Y, Z}, drawn per error per run.
    Pauli,
    X,
    Y,
    Z,
    Rz,
}

impl ErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorKind::Pauli => "pauli",
            ErrorKind::X => "x",
            ErrorKind::Y => "y",
            ErrorKind::Z => "z",
            ErrorKind::Rz => "rz",
        }
    }

    pub fn parse(name: &str) -> Option<ErrorKind> {
        match name.to_ascii_lowercase().as_str() {
            "pauli" => Some(ErrorKind::Pauli),
            "x" => Some(ErrorKind::X),
            "y" => Some(ErrorKind::Y),
            "z" => Some(ErrorKind::Z),
            "rz" => Some(ErrorKind::Rz),
            _ => None,
        }
    }
}

/// Where the faults land.
#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    UniformRandom,
    Fixed(Vec<usize>),
}

/// A fault model for one experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpec {
    pub kind: ErrorKind,
    pub angle: Option<Angle>,
    /// 0 (noiseless control), 1, or 2 errors per run.
    pub count: usize,
    pub placement: Placement,
}

impl ErrorSpec {
    pub fn pauli(count: usize) -> Self {
        Self {
            kind: ErrorKind::Pauli,
            angle: None,
            count,
            placement: Placement::UniformRandom,
        }
    }

    pub fn rotation(angle: Angle, count: usize) -> Self {
        Self {
            kind: ErrorKind::Rz,
            angle: Some(angle),
            count,
            placement: Placement::UniformRandom,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count > 2 {
            return Err(Error::InvalidArgument(
                "error count must be 0, 1, or 2".into(),
            ));
        }
        match (self.kind, self.angle.is_some()) {
            (ErrorKind::Rz, false) => Err(Error::InvalidArgument(
                "rz errors need an angle".into(),
            )),
            (ErrorKind::Rz, true) => Ok(()),
            (_, true) => Err(Error::InvalidArgument(
                "angle is only valid for rz errors".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// One cell of the experiment grid.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub algorithm: AlgorithmKind,
    pub num_qubits: usize,
    pub error: ErrorSpec,
    pub sigma_target: f64,
    pub capacity_n: u64,
    pub master_seed: u64,
    pub runs_override: Option<usize>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_target > 0.0 && self.sigma_target <= 1.0) {
            return Err(Error::InvalidArgument(
                "sigma must be in (0, 1]".into(),
            ));
        }
        if self.capacity_n == 0 {
            return Err(Error::InvalidArgument("capacity N must be >= 1".into()));
        }
        self.error.validate()
    }

    pub fn runs(&self) -> usize {
        self.runs_override
            .unwrap_or_else(|| num_runs(self.sigma_target, self.capacity_n))
    }
}

/// Monte Carlo run count for a desired standard error: ceil(1 / (sigma^2 N)).
pub fn num_runs(sigma: f64, n_capacity: u64) -> usize {
    (1.0 / (sigma * sigma * n_capacity as f64)).ceil() as usize
}

/// Binomial standard error of the success percentage:
/// 100 * sqrt(p (1 - p) / runs).
pub fn binomial_stderr(successes: usize, runs: usize) -> f64 {
    assert!(runs >= 1, "stderr needs at least one run");
    let p = successes as f64 / runs as f64;
    100.0 * (p * (1.0 - p) / runs as f64).sqrt()
}

/// Draw fault-site indices uniformly over the op nodes, independently (with
/// replacement) for multi-error runs.
pub fn place_errors<R: Rng + ?Sized>(
    dag: &CircuitDag,
    error: &ErrorSpec,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let nodes = dag.num_nodes();
    if nodes == 0 && error.count > 0 {
        return Err(Error::EmptyCircuit);
    }
    match &error.placement {
        Placement::Fixed(indices) => {
            for &i in indices {
                if i >= nodes {
                    return Err(Error::NodeIndexOutOfRange {
                        index: i,
                        num_nodes: nodes,
                    });
                }
            }
            Ok(indices.clone())
        }
        Placement::UniformRandom => {
            Ok((0..error.count).map(|_| rng.gen_range(0..nodes)).collect())
        }
    }
}

pub(crate) fn draw_pauli_kind<R: Rng + ?Sized>(rng: &mut R) -> PauliKind {
    PauliKind::ALL[rng.gen_range(0..3)]
}

/// Success-ratio row in the shape of the benchmark tables.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SuccessReport {
    pub algorithm: String,
    pub qubits: usize,
    pub depth: usize,
    pub error_kind: String,
    pub angle: Option<String>,
    pub error_count: usize,
    pub runs: usize,
    pub successes: usize,
    pub success_pct: f64,
    pub stderr_pct: f64,
    pub seed: u64,
}

impl SuccessReport {
    fn from_counts(
        spec: &ExperimentSpec,
        qubits: usize,
        depth: usize,
        kind_name: &str,
        successes: usize,
        runs: usize,
    ) -> Self {
        SuccessReport {
            algorithm: spec.algorithm.csv_name().to_string(),
            qubits,
            depth,
            error_kind: kind_name.to_string(),
            angle: spec.error.angle.map(|a| a.label()),
            error_count: spec.error.count,
            runs,
            successes,
            success_pct: 100.0 * successes as f64 / runs as f64,
            stderr_pct: binomial_stderr(successes, runs),
            seed: spec.master_seed,
        }
    }
}

/// Aggregate result of a case plus, for mixed-Pauli single-error cells, the
/// per-kind breakdown computed from the same runs.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub aggregate: SuccessReport,
    pub breakdown: Vec<SuccessReport>,
}

fn case_seed(spec: &ExperimentSpec) -> u64 {
    let angle_bits = spec
        .error
        .angle
        .map(|a| a.radians().to_bits())
        .unwrap_or(0);
    seeding::derive_seed(
        "case",
        &[
            spec.master_seed,
            spec.algorithm as u64,
            spec.num_qubits as u64,
            spec.error.kind as u64,
            angle_bits,
            spec.error.count as u64,
        ],
    )
}

/// Run one experiment cell: build the instance once, execute the ideal
/// circuit once, then run `runs` faulty executions and compare each against
/// the ideal through the algorithm's success predicate.
pub fn run_case(spec: &ExperimentSpec) -> Result<CaseOutcome> {
    spec.validate()?;
    let instance = instance_for(spec.algorithm, spec.num_qubits, spec.master_seed)?;
    let ideal = instance.dag.execute_from_zero()?;
    let runs = spec.runs();
    let seed = case_seed(spec);

    struct RunVerdict {
        success: bool,
        // Kind of the single injected Pauli, for breakdown rows.
        single_kind: Option<PauliKind>,
    }

    let verdicts: Vec<Result<RunVerdict>> = exec::map_indexed(runs, |run_index| {
        let mut rng = seeding::stream_rng(seed, run_index as u64);
        let placements = place_errors(&instance.dag, &spec.error, &mut rng)?;
        let gates_to_inject: Vec<(usize, gates::GateDef)> = placements
            .iter()
            .map(|&site| {
                let gate = match spec.error.kind {
                    ErrorKind::Pauli => gates::pauli_error(draw_pauli_kind(&mut rng)),
                    ErrorKind::X => gates::x(),
                    ErrorKind::Y => gates::y(),
                    ErrorKind::Z => gates::z(),
                    ErrorKind::Rz => gates::rz(spec.error.angle.unwrap().radians()),
                };
                (site, gate)
            })
            .collect();

        // Inject at the highest index first so earlier indices stay valid.
        let mut ordered: Vec<&(usize, gates::GateDef)> = gates_to_inject.iter().collect();
        ordered.sort_by(|a, b| b.0.cmp(&a.0));
        let mut dag = instance.dag.clone();
        for (site, gate) in ordered {
            dag = dag.inject_error(gate, *site)?;
        }

        let faulty = dag.execute_from_zero()?;
        let success = instance.predicate.evaluate(&faulty, &ideal)?;
        let single_kind = match (spec.error.kind, gates_to_inject.len()) {
            (ErrorKind::Pauli, 1) => {
                Some(match gates_to_inject[0].1.label() {
                    "x" => PauliKind::X,
                    "y" => PauliKind::Y,
                    _ => PauliKind::Z,
                })
            }
            _ => None,
        };
        Ok(RunVerdict {
            success,
            single_kind,
        })
    });

    let mut successes = 0usize;
    let mut kind_runs = [0usize; 3];
    let mut kind_successes = [0usize; 3];
    for verdict in verdicts {
        let verdict = verdict?;
        if verdict.success {
            successes += 1;
        }
        if let Some(kind) = verdict.single_kind {
            let slot = kind as usize;
            kind_runs[slot] += 1;
            if verdict.success {
                kind_successes[slot] += 1;
            }
        }
    }

    let aggregate = SuccessReport::from_counts(
        spec,
        instance.num_qubits,
        instance.dag.depth(),
        spec.error.kind.name(),
        successes,
        runs,
    );
    let mut breakdown = Vec::new();
    if spec.error.kind == ErrorKind::Pauli && spec.error.count == 1 {
        for kind in PauliKind::ALL {
            let slot = kind as usize;
            if kind_runs[slot] > 0 {
                breakdown.push(SuccessReport::from_counts(
                    spec,
                    instance.num_qubits,
                    instance.dag.depth(),
                    kind.name(),
                    kind_successes[slot],
                    kind_runs[slot],
                ));
            }
        }
    }
    Ok(CaseOutcome {
        aggregate,
        breakdown,
    })
}

/// A full experiment grid: algorithms x sizes x error specs.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub algorithms: Vec<AlgorithmKind>,
    /// None means each algorithm's default benchmark sizes.
    pub sizes: Option<Vec<usize>>,
    pub errors: Vec<ErrorSpec>,
    pub sigma_target: f64,
    pub capacity_n: u64,
    pub runs_override: Option<usize>,
}

impl SweepGrid {
    pub fn benchmark(errors: Vec<ErrorSpec>) -> Self {
        SweepGrid {
            algorithms: AlgorithmKind::ALL.to_vec(),
            sizes: None,
            errors,
            sigma_target: 0.01,
            capacity_n: 8,
            runs_override: None,
        }
    }
}

/// Run every cell of the grid. Cells are independent and deterministic under
/// a fixed master seed; per-kind breakdown rows follow each mixed-Pauli
/// aggregate row.
pub fn sweep(grid: &SweepGrid, master_seed: u64) -> Result<Vec<SuccessReport>> {
    let mut rows = Vec::new();
    for &algorithm in &grid.algorithms {
        let sizes: Vec<usize> = grid
            .sizes
            .clone()
            .unwrap_or_else(|| algorithm.default_sizes().to_vec());
        for &size in &sizes {
            for error in &grid.errors {
                let spec = ExperimentSpec {
                    algorithm,
                    num_qubits: size,
                    error: error.clone(),
                    sigma_target: grid.sigma_target,
                    capacity_n: grid.capacity_n,
                    master_seed,
                    runs_override: grid.runs_override,
                };
                let outcome = run_case(&spec)?;
                rows.push(outcome.aggregate);
                rows.extend(outcome.breakdown);
            }
        }
    }
    Ok(rows)
}
