use serde::{Deserialize, Serialize};

use crate::device::{Coherent, Schedule, Segment};
use crate::error::{Error, Result};
use crate::numerics::CMat;

use super::gates::{apply_gate, apply_matrix, apply_z_phases};
use super::propagate::{apply_static, components, too_large, PulseSystem};
use super::FullState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Keep the full `σˣσˣ` coupling; when off only the flip-flop half
    /// `σ⁺σ⁻ + σ⁻σ⁺` acts on drive-free segments.
    pub counter_rotating: bool,
    /// Largest conserved sector exponentiated densely.
    pub dense_sector_limit: usize,
    pub krylov_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            counter_rotating: true,
            dense_sector_limit: 1024,
            krylov_tol: 1e-10,
        }
    }
}

impl EvolveOptions {
    pub fn rotating_wave() -> Self {
        Self {
            counter_rotating: false,
            ..Self::default()
        }
    }
}

const NORM_DRIFT: f64 = 1e-8;
const MAX_DRIVEN_DIM: usize = 1 << 10;

/// Runs a schedule on the two-level register: exact propagation of every
/// coherent segment, ideal gates, and frame corrections.
pub fn evolve_two_level(state: &FullState, schedule: &Schedule, opts: &EvolveOptions) -> Result<FullState> {
    let n = schedule.graph.n_total();
    if state.levels() != 2 || state.n_qubits() != n {
        return Err(Error::InvalidDimension(format!(
            "state has {} qubits with {} levels, schedule needs {n} qubits",
            state.n_qubits(),
            state.levels()
        )));
    }
    let mut s = state.clone();
    let n0 = s.norm();
    for seg in &schedule.segments {
        seg.validate(&schedule.graph)?;
        match seg {
            Segment::Coherent(c) => {
                if c.drives.is_empty() {
                    apply_static(&mut s, c, opts.counter_rotating, opts.dense_sector_limit, opts.krylov_tol)?;
                } else {
                    apply_driven(&mut s, c)?;
                }
                let drift = (s.norm() - n0).abs();
                if drift > NORM_DRIFT {
                    return Err(Error::IntegrationFailure(format!(
                        "norm drift {drift:.3e} in segment {:?}",
                        c.label
                    )));
                }
            }
            Segment::IdealGate(g) => apply_gate(&mut s, &g.gate, &g.targets)?,
            Segment::ZCorrection(z) => apply_z_phases(&mut s, &z.phases_rad)?,
        }
    }
    Ok(s)
}

/// Driven segment: the components touched by drives are integrated with the
/// pulse integrator; the rest propagates exactly.
fn apply_driven(state: &mut FullState, c: &Coherent) -> Result<()> {
    let driven: Vec<usize> = c.drives.iter().map(|d| d.qubit).collect();
    let comp: Vec<usize> = components(&c.couplings_hz, &driven)
        .into_iter()
        .filter(|g| g.iter().any(|q| driven.contains(q)))
        .flatten()
        .collect();
    let dim = 1usize << comp.len();
    if dim > MAX_DRIVEN_DIM {
        return Err(too_large("driven component", dim));
    }
    let mut rest = c.clone();
    rest.drives.clear();
    for &q in &comp {
        rest.epsilons_hz[q] = 0.0;
        for j in 0..rest.couplings_hz.len() {
            rest.couplings_hz[q][j] = 0.0;
            rest.couplings_hz[j][q] = 0.0;
        }
    }
    apply_static(state, &rest, true, usize::MAX, 1e-10)?;

    let local = |q: usize| comp.iter().position(|x| *x == q).unwrap_or(0);
    let mut couplings = Vec::new();
    for (a, &qa) in comp.iter().enumerate() {
        for (b, &qb) in comp.iter().enumerate().skip(a + 1) {
            if c.couplings_hz[qa][qb] != 0.0 {
                couplings.push((a, b, c.couplings_hz[qa][qb]));
            }
        }
    }
    let sys = PulseSystem {
        levels: 2,
        level_energies: comp.iter().map(|&q| vec![0.0, c.epsilons_hz[q]]).collect(),
        couplings,
        drives: c
            .drives
            .iter()
            .map(|d| (local(d.qubit), d.amplitude_hz, d.carrier_hz))
            .collect(),
        drive_qubit_only: false,
    };
    let u = converged_pulse(&sys, c.duration_s)?;
    apply_matrix(state, &comp, &u)
}

fn converged_pulse(sys: &PulseSystem, duration: f64) -> Result<CMat> {
    let mut spp = 16;
    let mut prev = sys.propagate(duration, spp)?;
    for _ in 0..12 {
        spp *= 2;
        let next = sys.propagate(duration, spp)?;
        let diff = (&next - &prev).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if diff < 1e-7 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::IntegrationFailure(
        "driven segment did not converge after 12 step halvings".into(),
    ))
}
