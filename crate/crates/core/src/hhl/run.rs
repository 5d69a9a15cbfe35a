use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::compiler::{schedule_controlled_unitary, CnotMode, ControlledUnitarySpec};
use crate::device::{total_duration, DeviceGraph, Gate, Schedule, Segment};
use crate::error::{Error, Result};
use crate::numerics::{eigh_herm, CMat, ComplexUnitary, C64};
use crate::simulator::{evolve_two_level, postselect, EvolveOptions, FullState, RegisterState};
use crate::units::{DEFAULT_EPS0_HZ, DEFAULT_GMAX_HZ};

use super::circuit::{build_hhl_circuit, HhlOp};
use super::instance::HhlInstance;

/// Device-level limit on `n + m + 1`.
pub const MAX_DEVICE_QUBITS: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct DeviceConfig {
    pub eps0_hz: f64,
    pub gmax_hz: f64,
    pub evolve: EvolveOptions,
    pub cnot: CnotMode,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            eps0_hz: DEFAULT_EPS0_HZ,
            gmax_hz: DEFAULT_GMAX_HZ,
            evolve: EvolveOptions::default(),
            cnot: CnotMode::Ideal,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HhlLevel {
    Abstract,
    Device(DeviceConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhlResult {
    pub e_algorithm: f64,
    pub p_postselect: f64,
    #[serde(with = "crate::device::serde_cmat")]
    pub rho_data: CMat,
    /// Dominant eigenvector of `rho_data`.
    pub x_estimate: Vec<C64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub schedule_time_s: Option<f64>,
}

/// Postselected register amplitudes in the abstract layout
/// (`data + n · bits`, rotation ancilla = 1), the Born probability, and
/// the coherent schedule time at device level. Leakage out of the
/// single-excitation data space is dropped from the returned vector.
#[derive(Clone, Debug, PartialEq)]
pub struct HhlFinalState {
    pub amplitudes: Vec<C64>,
    pub p_postselect: f64,
    pub schedule_time_s: Option<f64>,
}

pub fn run_hhl(inst: &HhlInstance, level: &HhlLevel) -> Result<HhlResult> {
    let fin = hhl_final_state(inst, level)?;
    Ok(result_from_state(inst, fin))
}

/// `E = 1 - ⟨x|ρ|x⟩`.
pub fn algorithm_error(rho: &CMat, x: &DVector<C64>) -> f64 {
    1.0 - (x.adjoint() * rho * x)[(0, 0)].re
}

fn result_from_state(inst: &HhlInstance, fin: HhlFinalState) -> HhlResult {
    let n = inst.n();
    let mut rho = CMat::zeros(n, n);
    for block in fin.amplitudes.chunks(n) {
        let v = DVector::from_column_slice(block);
        rho += &v * v.adjoint();
    }
    let (_, vecs) = eigh_herm(&rho);
    let x_estimate = vecs.column(n - 1).iter().copied().collect();
    HhlResult {
        e_algorithm: algorithm_error(&rho, &inst.x_ideal()),
        p_postselect: fin.p_postselect,
        rho_data: rho,
        x_estimate,
        schedule_time_s: fin.schedule_time_s,
    }
}

pub fn hhl_final_state(inst: &HhlInstance, level: &HhlLevel) -> Result<HhlFinalState> {
    match level {
        HhlLevel::Abstract => abstract_final(inst),
        HhlLevel::Device(cfg) => device_final(inst, cfg),
    }
}

fn abstract_final(inst: &HhlInstance) -> Result<HhlFinalState> {
    let m = inst.m();
    let mut reg = RegisterState::new(inst.b(), m + 1);
    for op in build_hhl_circuit(inst)? {
        match op {
            HhlOp::Gate { gate, targets } => reg.apply_gate(&gate, &targets)?,
            HhlOp::ControlledEvolution { control, time } => {
                let u = inst.a().scaled(time).exp_i(1.0);
                reg.apply_data_when(control, 1, &u)?;
            }
        }
    }
    let p = reg.postselect(m, 1)?;
    Ok(HhlFinalState {
        amplitudes: reg.amplitudes().to_vec(),
        p_postselect: p,
        schedule_time_s: None,
    })
}

/// Device graph for an instance: data qubits `0..n`, phase qubit `j` at
/// `n + j`, rotation ancilla at `n + m`.
pub fn hhl_graph(inst: &HhlInstance, cfg: &DeviceConfig) -> Result<DeviceGraph> {
    let total = inst.n() + inst.m() + 1;
    if total > MAX_DEVICE_QUBITS {
        return Err(Error::InvalidDimension(format!(
            "device run needs {total} qubits, limit is {MAX_DEVICE_QUBITS}"
        )));
    }
    DeviceGraph::with_ancillas(inst.n(), inst.m() + 1, cfg.eps0_hz, cfg.gmax_hz)
}

/// Compiles the circuit for the device: register gates become ideal gates
/// on the ancillas and each controlled evolution becomes `X · CU · X`
/// around the controlled-unitary protocol.
pub fn build_hhl_schedule(inst: &HhlInstance, cfg: &DeviceConfig) -> Result<Schedule> {
    let graph = hhl_graph(inst, cfg)?;
    let n = inst.n();
    let mut out = Schedule::new(graph.clone());
    for op in build_hhl_circuit(inst)? {
        match op {
            HhlOp::Gate { gate, targets } => {
                let label = format!("{gate:?}");
                out.push(Segment::gate(gate, targets.iter().map(|q| n + q).collect(), &label));
            }
            HhlOp::ControlledEvolution { control, time } => {
                let anc = n + control;
                let u = ComplexUnitary::new(inst.a().scaled(time).exp_i(1.0))?;
                let spec = ControlledUnitarySpec::new(u, anc)?;
                out.push(Segment::gate(Gate::PauliX, vec![anc], "X"));
                out.append(schedule_controlled_unitary(&spec, &graph, &cfg.cnot)?);
                out.push(Segment::gate(Gate::PauliX, vec![anc], "X"));
            }
        }
    }
    Ok(out)
}

fn device_final(inst: &HhlInstance, cfg: &DeviceConfig) -> Result<HhlFinalState> {
    let schedule = build_hhl_schedule(inst, cfg)?;
    let graph = &schedule.graph;
    let (n, m) = (inst.n(), inst.m());
    let start = FullState::ses_with_ancilla(graph, inst.b(), n, C64::new(1.0, 0.0), C64::new(0.0, 0.0))?;
    let out = evolve_two_level(&start, &schedule, &cfg.evolve)?;
    let (post, p) = postselect(&out, n + m, 1)?;
    let amps = post.amplitudes();
    let amplitudes = (0..n << (m + 1))
        .map(|idx| {
            let (d, bits) = (idx % n, idx / n);
            amps[(1 << d) | (bits << n)]
        })
        .collect();
    Ok(HhlFinalState {
        amplitudes,
        p_postselect: p,
        schedule_time_s: Some(total_duration(&schedule)),
    })
}

/// `|⟨a|b⟩|²` between two postselected register states.
pub fn state_fidelity(a: &HhlFinalState, b: &HhlFinalState) -> f64 {
    a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .norm_sqr()
}
