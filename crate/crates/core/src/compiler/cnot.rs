use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::device::{Coherent, DeviceGraph, Drive, Gate, Schedule, Segment};
use crate::error::{Error, Result};
use crate::numerics::{expm_hermitian, CMat, C64};

/// Timing of the collective entangler `e^{-i(π/4) S_x ⊗ σˣ_a}`.
///
/// `t_gate` must hold an integer number `l_a` of `ε₀` periods so the qubit
/// frame returns to the identity; the drive `Ω = 2 l_b / t_gate` makes the
/// driven-ancilla frame return to `±I`; `g = 1/(4 t_gate)` sets the
/// entangling angle to π/4.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglerParams {
    pub n_targets: usize,
    pub eps0_hz: f64,
    pub t_gate_s: f64,
    pub l_a: u64,
    pub l_b: u64,
    pub omega_hz: f64,
    pub g_hz: f64,
    pub eta_hz: f64,
}

impl EntanglerParams {
    pub fn new(n_targets: usize, eps0_hz: f64, t_gate_s: f64, l_b: u64, eta_hz: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if n_targets == 0 {
            return bad("at least one target is required".into());
        }
        if !(eps0_hz > 0.0 && t_gate_s > 0.0 && eta_hz > 0.0)
            || !(eps0_hz.is_finite() && t_gate_s.is_finite() && eta_hz.is_finite())
        {
            return bad("eps0, t_gate and eta must be positive and finite".into());
        }
        if l_b == 0 {
            return bad("l_b must be a positive integer".into());
        }
        let periods = t_gate_s * eps0_hz;
        let l_a = periods.round();
        if l_a < 1.0 || (periods - l_a).abs() > 1e-9 * periods.max(1.0) {
            return bad(format!(
                "t_gate·eps0 = {periods} is not an integer number of qubit periods"
            ));
        }
        Ok(Self {
            n_targets,
            eps0_hz,
            t_gate_s,
            l_a: l_a as u64,
            l_b,
            omega_hz: 2.0 * l_b as f64 / t_gate_s,
            g_hz: 1.0 / (4.0 * t_gate_s),
            eta_hz,
        })
    }

    /// Re-checks the quantization invariants (for hand-built or parsed params).
    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.n_targets, self.eps0_hz, self.t_gate_s, self.l_b, self.eta_hz)?;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
        if fresh.l_a != self.l_a || !close(self.omega_hz, fresh.omega_hz) || !close(self.g_hz, fresh.g_hz) {
            return Err(Error::InvalidParams(
                "l_a, Omega or g inconsistent with t_gate".into(),
            ));
        }
        Ok(())
    }
}

/// How the multi-target CNOTs inside a controlled-unitary are realized.
#[derive(Clone, Debug, PartialEq)]
pub enum CnotMode {
    Ideal,
    Pulsed(EntanglerParams),
}

/// Driven coherent segment: all qubits at `ε₀`, coupling `g` between the
/// ancilla and every data qubit, resonant drive on the ancilla.
pub fn entangler_segment(graph: &DeviceGraph, ancilla: usize, p: &EntanglerParams) -> Result<Coherent> {
    p.validate()?;
    check_ancilla(graph, ancilla)?;
    if p.n_targets != graph.n_data() {
        return Err(Error::InvalidParams(format!(
            "params target {} qubits, data partition has {}",
            p.n_targets,
            graph.n_data()
        )));
    }
    if (p.eps0_hz - graph.eps0_hz()).abs() > 1e-9 * p.eps0_hz {
        return Err(Error::InvalidParams("params eps0 differs from the device".into()));
    }
    if p.g_hz > graph.gmax_hz() {
        return Err(Error::InvalidParams(format!(
            "entangler coupling {} Hz exceeds g_max",
            p.g_hz
        )));
    }
    let n = graph.n_total();
    let mut cpl = vec![vec![0.0; n]; n];
    for &q in graph.data_ids() {
        cpl[q][ancilla] = p.g_hz;
        cpl[ancilla][q] = p.g_hz;
    }
    let drive = Drive {
        qubit: ancilla,
        amplitude_hz: p.omega_hz,
        carrier_hz: p.eps0_hz,
    };
    Coherent::new(
        graph,
        p.t_gate_s,
        vec![graph.eps0_hz(); n],
        cpl,
        vec![drive],
        "entangler",
    )
}

pub(crate) fn check_ancilla(graph: &DeviceGraph, ancilla: usize) -> Result<()> {
    if !graph.ancilla_ids().contains(&ancilla) {
        return Err(Error::InvalidInput(format!("qubit {ancilla} is not an ancilla")));
    }
    Ok(())
}

/// Multi-target CNOT controlled by `ancilla` on every data qubit:
/// Hadamard, driven entangler, Hadamard, then the ideal single-qubit
/// rotations `e^{iπ/4 σˣ}` on targets and `diag(1, (-i)^n)` on the ancilla.
pub fn schedule_multitarget_cnot(
    graph: &DeviceGraph,
    ancilla: usize,
    params: &EntanglerParams,
) -> Result<Schedule> {
    let seg = entangler_segment(graph, ancilla, params)?;
    let mut s = Schedule::new(graph.clone());
    s.push(Segment::gate(Gate::Hadamard, vec![ancilla], "H"));
    s.push_coherent(seg);
    s.push(Segment::gate(Gate::Hadamard, vec![ancilla], "H"));
    for &q in graph.data_ids() {
        s.push(Segment::gate(Gate::Rx { theta: -PI / 2.0 }, vec![q], "exp(i pi/4 X)"));
    }
    let n = params.n_targets as f64;
    s.push(Segment::gate(Gate::Phase { phi: -n * PI / 2.0 }, vec![ancilla], "ancilla phase"));
    Ok(s)
}

/// `e^{-i(π/4) S_x ⊗ σˣ_a}` on `n + 1` qubits: targets are bits `0..n`, the
/// ancilla is bit `n`.
pub fn ideal_entangler(n_targets: usize) -> CMat {
    let dim = 1usize << (n_targets + 1);
    let a = 1usize << n_targets;
    let mut h = CMat::zeros(dim, dim);
    for s in 0..dim {
        for q in 0..n_targets {
            h[(s ^ (1 << q) ^ a, s)] += C64::new(1.0, 0.0);
        }
    }
    expm_hermitian(&h, PI / 4.0)
}
