use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::device::Gate;
use crate::error::Result;

use super::angles::{ucr_circuit, RotationAngles};
use super::instance::HhlInstance;

/// One step of the inversion circuit on the abstract register. Register
/// qubits `0..m` hold the phase estimate (qubit `j` has weight `2^j`);
/// qubit `m` is the rotation ancilla.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum HhlOp {
    Gate { gate: Gate, targets: Vec<usize> },
    /// `e^{i·time·A}` on the data register when `control` reads `|1⟩`.
    ControlledEvolution { control: usize, time: f64 },
}

/// Forward QFT `|x⟩ → 2^{-m/2} Σ_y e^{2πixy/2^m} |y⟩` on `qubits`
/// (`qubits[0]` least significant).
pub fn qft(qubits: &[usize]) -> Vec<(Gate, Vec<usize>)> {
    let m = qubits.len();
    let mut out = Vec::new();
    for i in (0..m).rev() {
        out.push((Gate::Hadamard, vec![qubits[i]]));
        for d in 1..=i {
            out.push((
                Gate::ControlledPhase { phi: PI / (1u64 << d) as f64 },
                vec![qubits[i - d], qubits[i]],
            ));
        }
    }
    for i in 0..m / 2 {
        out.push((Gate::Swap, vec![qubits[i], qubits[m - 1 - i]]));
    }
    out
}

pub fn inverse_qft(qubits: &[usize]) -> Vec<(Gate, Vec<usize>)> {
    qft(qubits)
        .into_iter()
        .rev()
        .map(|(g, t)| match g {
            Gate::ControlledPhase { phi } => (Gate::ControlledPhase { phi: -phi }, t),
            g => (g, t),
        })
        .collect()
}

fn gates(ops: &mut Vec<HhlOp>, list: Vec<(Gate, Vec<usize>)>) {
    ops.extend(list.into_iter().map(|(gate, targets)| HhlOp::Gate { gate, targets }));
}

/// Phase estimation, controlled rotation, and its uncomputation.
pub fn build_hhl_circuit(inst: &HhlInstance) -> Result<Vec<HhlOp>> {
    let m = inst.m();
    let phase: Vec<usize> = (0..m).collect();
    let angles = RotationAngles::for_register(m)?;
    let mut ops = Vec::new();
    let hadamards = || phase.iter().map(|&q| (Gate::Hadamard, vec![q])).collect::<Vec<_>>();
    let evolutions = |sign: f64| {
        (0..m).map(move |j| HhlOp::ControlledEvolution {
            control: j,
            time: sign * inst.t0() * (1u64 << j) as f64,
        })
    };

    gates(&mut ops, hadamards());
    ops.extend(evolutions(1.0));
    gates(&mut ops, inverse_qft(&phase));
    gates(&mut ops, ucr_circuit(&angles.theta, &phase, m)?);
    gates(&mut ops, qft(&phase));
    ops.extend(evolutions(-1.0).collect::<Vec<_>>().into_iter().rev());
    gates(&mut ops, hadamards());
    Ok(ops)
}
