//! Complete-graph device model: every pair of qubits shares a tunable
//! `σˣσˣ` coupler and every qubit frequency is tunable. Energies are stored
//! as frequencies (E/h, Hz) and durations in seconds.

mod basis;
mod graph;
mod hamiltonian;
mod schedule;
mod segment;
pub(crate) mod serde_cmat;

pub use basis::{BasisConvention, BIT_ORDERING};
pub use graph::DeviceGraph;
pub use hamiltonian::{build_hamiltonian, hamiltonian_real, project_dual, project_ses};
pub use schedule::{total_duration, LedgerEntry, Schedule};
pub use segment::{Coherent, Drive, Gate, IdealGate, Segment, ZCorrection};
