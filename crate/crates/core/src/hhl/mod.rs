//! Low-precision HHL linear-system solver on a single-excitation data register.

mod angles;
mod circuit;
mod instance;
mod run;
mod sweep;

pub use angles::{gamma_angles, gray, sign_entry, ucr_angles, ucr_circuit, ucr_cnot_control, RotationAngles};
pub use circuit::{build_hhl_circuit, inverse_qft, qft, HhlOp};
pub use instance::{in_zero_bin, random_hhl_instance, HhlInstance, MAX_PHASE_QUBITS};
pub use run::{
    algorithm_error, build_hhl_schedule, hhl_final_state, hhl_graph, run_hhl, state_fidelity, DeviceConfig,
    HhlFinalState, HhlLevel, HhlResult, MAX_DEVICE_QUBITS,
};
pub use sweep::{
    mean_stderr, paired_m2_m3, rows_csv, summarize, sweep_fig7, sweep_trials, trial_seed, trials_csv,
    PairedComparison, SweepOptions, SweepRow, TrialRecord,
};
