//! Report emission: CSV, JSON, and rendered tables, plus the
//! equivalence-convergence report.

use qjump_core::lindblad::{
    evolve, lowering_operator, trace_distance, DensityMatrix, JumpChannel, OpenSystem,
};
use qjump_core::linalg::ComplexMatrix;
use qjump_core::montecarlo::SuccessReport;
use qjump_core::seeding;
use qjump_core::state::StateVector;
use qjump_core::trajectory::{
    ensemble_density, estimate_observable, run_ensemble, TrajectoryConfig,
};

pub const CSV_HEADER: &str =
    "algorithm,qubits,depth,error_kind,angle,error_count,runs,successes,success_pct,stderr_pct,seed";

/// Depth caveat carried at the top of CSV output: circuit depths depend on
/// this crate's oracle constructions.
pub const CSV_COMMENT: &str =
    "# depth column reflects this implementation's circuit constructions; oracle choices change it";

/// Success rows as CSV, bit-stable for a fixed input. Floats use the
/// shortest round-trip representation.
pub fn to_csv(rows: &[SuccessReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_COMMENT);
    out.push('\n');
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.qubits,
            r.depth,
            r.error_kind,
            r.angle.as_deref().unwrap_or(""),
            r.error_count,
            r.runs,
            r.successes,
            r.success_pct,
            r.stderr_pct,
            r.seed
        ));
    }
    out
}

/// Parse CSV produced by [`to_csv`] back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<SuccessReport>, String> {
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.is_empty() || line == CSV_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(format!("expected 11 fields, got {}: {line}", fields.len()));
        }
        let parse_usize = |s: &str| s.parse::<usize>().map_err(|e| format!("{e}: {s}"));
        let parse_f64 = |s: &str| s.parse::<f64>().map_err(|e| format!("{e}: {s}"));
        rows.push(SuccessReport {
            algorithm: fields[0].to_string(),
            qubits: parse_usize(fields[1])?,
            depth: parse_usize(fields[2])?,
            error_kind: fields[3].to_string(),
            angle: if fields[4].is_empty() {
                None
            } else {
                Some(fields[4].to_string())
            },
            error_count: parse_usize(fields[5])?,
            runs: parse_usize(fields[6])?,
            successes: parse_usize(fields[7])?,
            success_pct: parse_f64(fields[8])?,
            stderr_pct: parse_f64(fields[9])?,
            seed: fields[10].parse::<u64>().map_err(|e| format!("{e}: {}", fields[10]))?,
        });
    }
    Ok(rows)
}

pub fn to_json(rows: &[SuccessReport]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("success reports serialize");
    s.push('\n');
    s
}

/// One table cell in the benchmark style: "(21.0, 4.07)".
pub fn format_cell(success_pct: f64, stderr_pct: f64) -> String {
    format!("({:.1}, {:.2})", success_pct, stderr_pct)
}

fn display_name(csv_name: &str) -> String {
    qjump_core::algorithms::AlgorithmKind::parse(csv_name)
        .map(|k| k.display_name().to_string())
        .unwrap_or_else(|| csv_name.to_string())
}

/// Render rows as a text table: one line per row,
/// `Name (qubits, depth) [kind angle xN] (success, stderr)`.
pub fn to_table(rows: &[SuccessReport]) -> String {
    let mut out = String::new();
    for r in rows {
        let mut error = r.error_kind.clone();
        if let Some(angle) = &r.angle {
            error.push(' ');
            error.push_str(angle);
        }
        out.push_str(&format!(
            "{} ({}, {})  {} x{}  {}\n",
            display_name(&r.algorithm),
            r.qubits,
            r.depth,
            error,
            r.error_count,
            format_cell(r.success_pct, r.stderr_pct)
        ));
    }
    out
}

/// One cell of the equivalence-convergence table.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EquivalenceRow {
    pub dt: f64,
    pub trajectories: usize,
    pub trace_distance: f64,
    pub excited_population: f64,
    pub population_stderr: f64,
    pub lindblad_population: f64,
}

/// Canonical single-qubit amplitude damping system (gamma = 1).
pub fn damping_system() -> OpenSystem {
    OpenSystem::new(
        ComplexMatrix::zeros(2, 2),
        vec![JumpChannel::new(lowering_operator(), 1.0)],
    )
    .expect("damping system is well formed")
}

/// Trace distance between the trajectory ensemble and the RK4 master-equation
/// solution at gamma*t = 1, per (dt, M) cell. Ensembles for different M share
/// per-trajectory streams (the larger ensemble extends the smaller one).
pub fn equivalence_report(
    dts: &[f64],
    ms: &[usize],
    seed: u64,
) -> Result<Vec<EquivalenceRow>, qjump_core::Error> {
    let sys = damping_system();
    let excited = StateVector::basis_state(1, 1)?;
    let rho0 = DensityMatrix::pure(&excited);
    let projector = {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(1, 1)] = qjump_core::linalg::C64::new(1.0, 0.0);
        m
    };
    let t_final = 1.0;

    let mut rows = Vec::new();
    for &dt in dts {
        let reference = evolve(&sys, &rho0, t_final, dt)?;
        let ensemble_seed = seeding::derive_seed("equivalence", &[seed, dt.to_bits()]);
        for &m in ms {
            let cfg = TrajectoryConfig {
                dt,
                t_final,
                seed: ensemble_seed,
                num_trajectories: m,
            };
            let finals = run_ensemble(&sys, &excited, &cfg)?;
            let rho = ensemble_density(&finals)?;
            let distance = trace_distance(&rho, &reference)?;
            let (population, population_stderr) = if m >= 2 {
                estimate_observable(&finals, &projector)?
            } else {
                (rho.population(1), 0.0)
            };
            rows.push(EquivalenceRow {
                dt,
                trajectories: m,
                trace_distance: distance,
                excited_population: population,
                population_stderr,
                lindblad_population: reference.population(1),
            });
        }
    }
    Ok(rows)
}

pub const EQUIVALENCE_CSV_HEADER: &str =
    "dt,trajectories,trace_distance,excited_population,population_stderr,lindblad_population";

pub fn equivalence_to_csv(rows: &[EquivalenceRow]) -> String {
    let mut out = String::new();
    out.push_str(EQUIVALENCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.dt,
            r.trajectories,
            r.trace_distance,
            r.excited_population,
            r.population_stderr,
            r.lindblad_population
        ));
    }
    out
}

pub fn equivalence_to_json(rows: &[EquivalenceRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("equivalence rows serialize");
    s.push('\n');
    s
}

pub fn equivalence_to_table(rows: &[EquivalenceRow]) -> String {
    let mut out = String::new();
    out.push_str("dt        M        trace_dist   pop(1)    exact\n");
    for r in rows {
        out.push_str(&format!(
            "{:<9} {:<8} {:<12.6} {:<9.5} {:.5}\n",
            r.dt, r.trajectories, r.trace_distance, r.excited_population, r.lindblad_population
        ));
    }
    out
}
