//! Pulsed multi-target CNOT error on the three-level model for the n = 3 rows
//! of the benchmark table (the n = 4 rows take about a minute each).

use ses_forge::simulator::{ordering_flags, run_bench, DriveCoupling, ErrorMode, BENCH_ROWS};

fn main() -> ses_forge::Result<()> {
    let rows: Vec<_> = BENCH_ROWS.iter().filter(|r| r.n == 3).cloned().collect();
    let reports = run_bench(&rows, 5.5e9, DriveCoupling::QubitTransition, &ErrorMode::SubspaceAverage)?;
    println!("  n  eta/MHz  t/ns  Omega/MHz  g/MHz  E_gate  reference");
    for (row, r) in rows.iter().zip(&reports) {
        println!(
            "{:3}  {:7.0}  {:4.0}  {:9.2}  {:5.2}  {:.4}  {:.3}",
            r.n,
            r.eta_hz / 1e6,
            r.t_gate_s * 1e9,
            r.omega_hz / 1e6,
            r.g_hz / 1e6,
            r.e_gate,
            row.reference_e_gate
        );
    }
    let f = ordering_flags(&reports);
    println!("decreases with eta: {}, with t_gate: {}", f.decreases_with_eta, f.decreases_with_t_gate);
    Ok(())
}
