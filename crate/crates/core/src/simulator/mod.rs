//! State-vector, device-level and pulse-level simulation.

mod evolve;
mod gates;
mod lanczos;
mod metrics;
mod propagate;
mod protocol;
mod qutrit;
mod register;
mod state;

pub use evolve::{evolve_two_level, EvolveOptions};
pub use gates::{apply_gate, apply_matrix, apply_z_phases};
pub use lanczos::expmv_lanczos;
pub use metrics::{gate_error, ErrorMode, GateError};
pub use protocol::{run_protocol_check, Level};
pub use qutrit::{
    computational_block, entangler_gate_error, evolve_qutrit, ordering_flags, run_bench, BenchRow, DriveCoupling,
    GateErrorReport, OrderingFlags, QutritModel, BENCH_ROWS, MAX_PULSE_QUBITS,
};
pub use register::RegisterState;
pub use state::{partial_trace, postselect, FullState, NORM_TOL};
