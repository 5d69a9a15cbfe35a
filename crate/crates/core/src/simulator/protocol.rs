use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::compiler::{schedule_controlled_unitary, CnotMode, ControlledUnitarySpec};
use crate::device::{BasisConvention, DeviceGraph};
use crate::error::{Error, Result};
use crate::numerics::{CMat, ComplexUnitary, C64};

use super::evolve::{evolve_two_level, EvolveOptions};
use super::FullState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Factor-by-factor application of the compiled decomposition.
    Abstract,
    /// Full two-level device simulation of the compiled schedule.
    TwoLevel,
}

/// Runs the controlled-unitary protocol on `ψ ⊗ (α|0⟩ + β|1⟩)` and returns
/// `|⟨target|out⟩|²` with target `α Uψ ⊗ |0⟩ + β ψ ⊗ |1⟩`. The ancilla is the
/// first ancilla of `graph`.
pub fn run_protocol_check(
    u: &ComplexUnitary,
    psi: &DVector<C64>,
    alpha: C64,
    beta: C64,
    graph: &DeviceGraph,
    level: Level,
    opts: &EvolveOptions,
) -> Result<f64> {
    let n = graph.n_data();
    if u.dim() != n || psi.len() != n {
        return Err(Error::InvalidDimension(format!(
            "unitary {} and state {} must match the {n} data qubits",
            u.dim(),
            psi.len()
        )));
    }
    if ((psi.norm() - 1.0).abs() > 1e-10) || ((alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() > 1e-10) {
        return Err(Error::InvalidInput("ψ and (α, β) must be normalized".into()));
    }
    let &anc = graph
        .ancilla_ids()
        .first()
        .ok_or_else(|| Error::InvalidParams("graph has no ancilla".into()))?;
    let spec = ControlledUnitarySpec::new(u.clone(), anc)?;
    let u_psi = u.matrix() * psi;
    match level {
        Level::Abstract => {
            let (b0, b1) = abstract_branches(&spec);
            let out0 = b0 * psi * alpha;
            let out1 = b1 * psi * beta;
            let ov = (u_psi * alpha).dotc(&out0) + (psi * beta).dotc(&out1);
            Ok(ov.norm_sqr())
        }
        Level::TwoLevel => {
            let schedule = schedule_controlled_unitary(&spec, graph, &CnotMode::Ideal)?;
            let start = FullState::ses_with_ancilla(graph, psi, anc, alpha, beta)?;
            let out = evolve_two_level(&start, &schedule, opts)?;
            let target = branch_state(graph, anc, &(u_psi * alpha), &(psi * beta))?;
            Ok(target.fidelity(&out))
        }
    }
}

/// Data-register maps of the two ancilla branches assembled from the
/// compiled factors: `V e^{-iD/2} e^{∓iD/2} V†` with `V = e^{-iA} e^{-iB} e^{iA}`.
fn abstract_branches(spec: &ControlledUnitarySpec) -> (CMat, CMat) {
    let (a, b) = (&spec.aba.a, &spec.aba.b);
    let v = a.exp_i(-1.0) * b.exp_i(-1.0) * a.exp_i(1.0);
    let v_dag = a.exp_i(-1.0) * b.exp_i(1.0) * a.exp_i(1.0);
    let half = |s: f64| {
        CMat::from_diagonal(&DVector::from_iterator(
            spec.spectral.d.len(),
            spec.spectral.d.iter().map(|&x| C64::from_polar(1.0, s * x / 2.0)),
        ))
    };
    let b0 = &v * half(-1.0) * half(-1.0) * &v_dag;
    let b1 = &v * half(-1.0) * half(1.0) * &v_dag;
    (b0, b1)
}

/// `Σ_i x0_i |i)|0⟩_a + x1_i |i)|1⟩_a` without normalization checks.
fn branch_state(graph: &DeviceGraph, anc: usize, x0: &DVector<C64>, x1: &DVector<C64>) -> Result<FullState> {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << graph.n_total()];
    for i in 0..x0.len() {
        let s = BasisConvention::ses_index(graph, i);
        amps[s] += x0[i];
        amps[s | 1 << anc] += x1[i];
    }
    FullState::new(graph.n_total(), 2, amps)
}
