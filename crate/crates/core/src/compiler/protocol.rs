use super::cnot::{check_ancilla, schedule_multitarget_cnot, CnotMode};
use super::standard::{schedule_diagonal_half, schedule_sym_unitary, standard_form, Sign};
use crate::device::{total_duration, DeviceGraph, Gate, Schedule, Segment, ZCorrection};
use crate::error::{Error, Result};
use crate::numerics::{
    aba_decompose, principal_angle, spectral_unitary, AbaDecomposition, ComplexUnitary,
    RealSymMatrix, SpectralForm,
};
use crate::units::phase;

/// A data-register unitary applied when `ancilla` reads `|0⟩`, together with
/// its spectral form `U = V e^{-iD} V†` and the ABA factors of `V`.
#[derive(Clone, Debug)]
pub struct ControlledUnitarySpec {
    pub u: ComplexUnitary,
    pub ancilla: usize,
    pub spectral: SpectralForm,
    pub aba: AbaDecomposition,
}

impl ControlledUnitarySpec {
    pub fn new(u: ComplexUnitary, ancilla: usize) -> Result<Self> {
        let spectral = spectral_unitary(&u)?;
        let aba = aba_decompose(&spectral.v)?;
        Ok(Self {
            u,
            ancilla,
            spectral,
            aba,
        })
    }
}

/// Z correction undoing the stage's frame phases: idle ancillas lose
/// `2π ε₀ t`; the controlling ancilla gets `extra` instead when given.
fn stage_correction(graph: &DeviceGraph, stage: &Schedule, ancilla: usize, extra: Option<f64>, label: &str) -> Segment {
    let eps0_phase: f64 = stage.ledger.iter().map(|e| e.eps0_phase_rad).sum();
    let mut phases = vec![0.0; graph.n_total()];
    for &q in graph.ancilla_ids() {
        phases[q] = principal_angle(eps0_phase);
    }
    if let Some(x) = extra {
        phases[ancilla] = principal_angle(x);
    }
    Segment::ZCorrection(ZCorrection {
        phases_rad: phases,
        label: label.into(),
    })
}

fn push_stage(out: &mut Schedule, stage: Schedule, ancilla: usize, label: &str) {
    if stage.is_empty() {
        return;
    }
    let z = stage_correction(&out.graph.clone(), &stage, ancilla, None, label);
    out.append(stage);
    out.push(z);
}

fn push_cnot(out: &mut Schedule, graph: &DeviceGraph, ancilla: usize, mode: &CnotMode) -> Result<()> {
    match mode {
        CnotMode::Ideal => {
            let mut targets = vec![ancilla];
            targets.extend_from_slice(graph.data_ids());
            out.push(Segment::gate(Gate::MultiCnot, targets, "multi-target CNOT"));
        }
        CnotMode::Pulsed(p) => {
            let stage = schedule_multitarget_cnot(graph, ancilla, p)?;
            push_stage(out, stage, ancilla, "frame: cnot");
        }
    }
    Ok(())
}

/// Applies `U` to the data register when `ancilla` is `|0⟩` and the identity
/// when it is `|1⟩`: `V†`, CNOT, `e^{∓iD/2}`, CNOT, `e^{-iD/2}`, `V`, with a
/// frame correction after every coherent stage. The conditional stage flips
/// the sign of `D` because the `|1⟩` branch sits in the single-hole states.
pub fn schedule_controlled_unitary(
    spec: &ControlledUnitarySpec,
    graph: &DeviceGraph,
    mode: &CnotMode,
) -> Result<Schedule> {
    let n = graph.n_data();
    if spec.u.dim() != n {
        return Err(Error::InvalidDimension(format!(
            "unitary is {}x{} but the data partition has {n} qubits",
            spec.u.dim(),
            spec.u.dim()
        )));
    }
    check_ancilla(graph, spec.ancilla)?;
    let anc = spec.ancilla;
    let (a, b) = (&spec.aba.a, &spec.aba.b);
    let mut out = Schedule::new(graph.clone());

    // V† = e^{-iA} e^{iB} e^{iA}
    push_stage(&mut out, schedule_sym_unitary(a, Sign::Plus, graph)?, anc, "frame: exp(+iA)");
    push_stage(&mut out, schedule_sym_unitary(b, Sign::Plus, graph)?, anc, "frame: exp(+iB)");
    push_stage(&mut out, schedule_sym_unitary(a, Sign::Minus, graph)?, anc, "frame: exp(-iA)");

    push_cnot(&mut out, graph, anc, mode)?;

    // Conditional half step: the |1⟩ branch is in dual states with energy
    // E_n - ε_i + ε₀, so relative to the |0⟩ branch it picks up
    // 2π(E_n - ε₀)t + c on top of the reversed D/2.
    let d = &spec.spectral.d;
    let half = schedule_diagonal_half(d, graph)?;
    let c = standard_form(&RealSymMatrix::from_diagonal(d)?, graph.gmax_hz()).c;
    let t = total_duration(&half);
    let en: f64 = half
        .coherent_segments()
        .map(|s| s.filled_band_hz(graph))
        .next()
        .unwrap_or(graph.eps0_hz() * n as f64);
    let extra = phase(en - graph.eps0_hz(), t) + c;
    let z = stage_correction(graph, &half, anc, Some(extra), "frame: conditional exp(-+iD/2)");
    out.append(half);
    out.push(z);

    push_cnot(&mut out, graph, anc, mode)?;

    push_stage(&mut out, schedule_diagonal_half(d, graph)?, anc, "frame: exp(-iD/2)");

    // V = e^{-iA} e^{-iB} e^{iA}
    push_stage(&mut out, schedule_sym_unitary(a, Sign::Plus, graph)?, anc, "frame: exp(+iA)");
    push_stage(&mut out, schedule_sym_unitary(b, Sign::Minus, graph)?, anc, "frame: exp(-iB)");
    push_stage(&mut out, schedule_sym_unitary(a, Sign::Minus, graph)?, anc, "frame: exp(-iA)");
    Ok(out)
}

/// `U₀` on the `|0⟩` branch of `ancilla` and `U₁` on the `|1⟩` branch: the
/// controlled `U₀` followed by an ancilla-flipped controlled `U₁`.
pub fn controlled_pair(
    u0: &ComplexUnitary,
    u1: &ComplexUnitary,
    graph: &DeviceGraph,
    ancilla: usize,
    mode: &CnotMode,
) -> Result<Schedule> {
    let mut out = schedule_controlled_unitary(&ControlledUnitarySpec::new(u0.clone(), ancilla)?, graph, mode)?;
    let n = u1.dim();
    let is_identity = crate::numerics::max_abs_distance(u1.matrix(), &crate::numerics::CMat::identity(n, n)) < 1e-12;
    if !is_identity {
        out.push(Segment::gate(Gate::PauliX, vec![ancilla], "X"));
        out.append(schedule_controlled_unitary(
            &ControlledUnitarySpec::new(u1.clone(), ancilla)?,
            graph,
            mode,
        )?);
        out.push(Segment::gate(Gate::PauliX, vec![ancilla], "X"));
    }
    Ok(out)
}
