// Scratch measurement harness (deleted before release).
use qjump_core::montecarlo::{sweep, Angle, ErrorSpec, SweepGrid};

fn main() {
    let seed: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let runs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1250usize);

    let print = |title: &str, rows: &[qjump_core::montecarlo::SuccessReport]| {
        println!("== {title} (runs={runs}, seed={seed}) ==");
        for row in rows {
            println!(
                "{:>20} q={:<3} d={:<5} {:>5} c={} -> {:6.2}% +- {:.2}",
                row.algorithm,
                row.qubits,
                row.depth,
                row.error_kind,
                row.error_count,
                row.success_pct,
                row.stderr_pct
            );
        }
    };

    let t0 = std::time::Instant::now();
    let grid = SweepGrid {
        runs_override: Some(runs),
        ..SweepGrid::benchmark(vec![ErrorSpec::pauli(1)])
    };
    let rows = sweep(&grid, seed).unwrap();
    print("single pauli", &rows);
    println!("single pauli took {:?}", t0.elapsed());

    let t0 = std::time::Instant::now();
    let grid = SweepGrid {
        runs_override: Some(runs),
        ..SweepGrid::benchmark(vec![ErrorSpec::pauli(2)])
    };
    let rows = sweep(&grid, seed).unwrap();
    print("double pauli", &rows);
    println!("double pauli took {:?}", t0.elapsed());

    let t0 = std::time::Instant::now();
    let errors: Vec<ErrorSpec> = Angle::BENCHMARK
        .iter()
        .map(|&a| ErrorSpec::rotation(a, 1))
        .collect();
    let grid = SweepGrid {
        runs_override: Some(runs),
        ..SweepGrid::benchmark(errors)
    };
    let rows = sweep(&grid, seed).unwrap();
    print("single rz", &rows);
    println!("single rz took {:?}", t0.elapsed());
}
