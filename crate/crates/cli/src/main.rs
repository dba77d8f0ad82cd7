use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use qjump_cli::{config, report};

use config::{Cli, Command, OutputFormat};
use qjump_core::algorithms::instance_for;
use qjump_core::montecarlo::{run_case, sweep, ErrorSpec, ExperimentSpec, SweepGrid};

fn main() -> ExitCode {
    // QJUMP_THREADS caps worker parallelism; unset leaves the rayon default.
    let threads = std::env::var("QJUMP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    qjump_core::exec::configure_threads(threads);

    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Equivalence(args) => {
            if args.dts.is_empty() || args.ms.is_empty() {
                return Err("equivalence needs at least one dt and one M".into());
            }
            if args.dts.iter().any(|&dt| dt <= 0.0) {
                return Err("dt values must be positive".into());
            }
            let rows = report::equivalence_report(&args.dts, &args.ms, args.seed)
                .map_err(|e| e.to_string())?;
            let text = match args.output.format {
                OutputFormat::Csv => report::equivalence_to_csv(&rows),
                OutputFormat::Json => report::equivalence_to_json(&rows),
                OutputFormat::Table => report::equivalence_to_table(&rows),
            };
            write_output(&args.output.out, &text)
        }
        Command::Case(args) => {
            let algorithm = config::parse_algorithm(&args.algorithm)?;
            let error = config::build_error_spec(
                args.error,
                &args.angle,
                args.free_angle,
                args.count,
                args.sites.clone(),
            )?;
            let spec = ExperimentSpec {
                algorithm,
                num_qubits: args.qubits,
                error,
                sigma_target: args.sigma,
                capacity_n: args.capacity_n,
                master_seed: args.seed,
                runs_override: args.runs,
            };
            let outcome = run_case(&spec).map_err(|e| e.to_string())?;
            let mut rows = vec![outcome.aggregate];
            rows.extend(outcome.breakdown);
            emit_success_rows(&rows, &args.output)
        }
        Command::Sweep(args) => {
            let algorithms = config::parse_algorithms(&args.algorithms)?;
            let angles = config::build_sweep_angles(args.error, &args.angles, args.free_angle)?;
            if args.count > 2 {
                return Err("--count must be 0, 1, or 2".into());
            }
            let errors: Vec<ErrorSpec> = angles
                .into_iter()
                .map(|angle| ErrorSpec {
                    kind: args.error.into(),
                    angle,
                    count: args.count,
                    placement: qjump_core::montecarlo::Placement::UniformRandom,
                })
                .collect();
            let grid = SweepGrid {
                algorithms,
                sizes: args.qubits.clone(),
                errors,
                sigma_target: args.sigma,
                capacity_n: args.capacity_n,
                runs_override: args.runs,
            };
            let rows = sweep(&grid, args.seed).map_err(|e| e.to_string())?;
            emit_success_rows(&rows, &args.output)
        }
        Command::DumpCircuit(args) => {
            let algorithm = config::parse_algorithm(&args.algorithm)?;
            let instance =
                instance_for(algorithm, args.qubits, args.seed).map_err(|e| e.to_string())?;
            write_output(&args.out, &instance.dag.dump())
        }
    }
}

fn emit_success_rows(
    rows: &[qjump_core::montecarlo::SuccessReport],
    output: &config::OutputArgs,
) -> Result<(), String> {
    let text = match output.format {
        OutputFormat::Csv => report::to_csv(rows),
        OutputFormat::Json => report::to_json(rows),
        OutputFormat::Table => report::to_table(rows),
    };
    write_output(&output.out, &text)
}

fn write_output(path: &Option<std::path::PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}
