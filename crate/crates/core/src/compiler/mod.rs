//! Turns generators, unitaries and protocols into device schedules.

mod cnot;
mod protocol;
mod standard;

pub use cnot::{
    entangler_segment, ideal_entangler, schedule_multitarget_cnot, CnotMode, EntanglerParams,
};
pub use protocol::{controlled_pair, schedule_controlled_unitary, ControlledUnitarySpec};
pub use standard::{
    schedule_diagonal_half, schedule_sym_unitary, standard_form, Sign, StandardFormResult,
};
