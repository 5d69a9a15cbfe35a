use serde::{Deserialize, Serialize};

use crate::compiler::{ideal_entangler, schedule_multitarget_cnot, EntanglerParams};
use crate::device::{DeviceGraph, Schedule, Segment};
use crate::error::{Error, Result};
use crate::numerics::CMat;
use crate::units::DEFAULT_GMAX_HZ;

use super::metrics::{gate_error, ErrorMode};
use super::propagate::{too_large, PulseSystem};

/// Which matrix elements the ancilla drive couples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveCoupling {
    /// Same ladder operator as the couplers: `⟨0|X|1⟩ = 1`, `⟨1|X|2⟩ = √2`.
    Transmon,
    /// Drive acts on the `0↔1` transition only.
    QubitTransition,
}

/// Duffing-truncated transmons with level energies `(0, ε, 2ε - η)`,
/// coupled through `g X_i X_a` with the transmon ladder operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QutritModel {
    pub levels: usize,
    pub eta_hz: f64,
    pub drive_coupling: DriveCoupling,
    /// Initial integrator resolution; refined by halving the step.
    pub steps_per_period: usize,
}

pub const MAX_PULSE_QUBITS: usize = 6;
const MAX_HALVINGS: usize = 12;
const CONVERGENCE_TOL: f64 = 1e-4;

impl QutritModel {
    pub fn new(eta_hz: f64, drive_coupling: DriveCoupling) -> Result<Self> {
        if !(eta_hz > 0.0 && eta_hz.is_finite()) {
            return Err(Error::InvalidParams("anharmonicity must be positive".into()));
        }
        Ok(Self {
            levels: 3,
            eta_hz,
            drive_coupling,
            steps_per_period: 10,
        })
    }

    /// Two-level truncation: the `|2⟩` level is removed.
    pub fn two_level() -> Self {
        Self {
            levels: 2,
            eta_hz: f64::INFINITY,
            drive_coupling: DriveCoupling::QubitTransition,
            steps_per_period: 10,
        }
    }

    fn level_energies(&self, eps: f64) -> Vec<f64> {
        let all = [0.0, eps, 2.0 * eps - self.eta_hz];
        all[..self.levels].to_vec()
    }
}

/// Lab-frame propagator (dimension `levels^N`) of the coherent segments of
/// `schedule`, in order. Ideal-gate and z-correction segments are treated
/// as error-free and skipped.
pub fn evolve_qutrit(schedule: &Schedule, model: &QutritModel) -> Result<CMat> {
    let n = schedule.graph.n_total();
    if n > MAX_PULSE_QUBITS {
        return Err(too_large("pulse register", model.levels.pow(n as u32)));
    }
    if !(2..=3).contains(&model.levels) {
        return Err(Error::InvalidParams("levels must be 2 or 3".into()));
    }
    let dim = model.levels.pow(n as u32);
    let mut u = CMat::identity(dim, dim);
    for seg in &schedule.segments {
        let Segment::Coherent(c) = seg else { continue };
        c.validate(&schedule.graph)?;
        let mut couplings = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if c.couplings_hz[i][j] != 0.0 {
                    couplings.push((i, j, c.couplings_hz[i][j]));
                }
            }
        }
        let sys = PulseSystem {
            levels: model.levels,
            level_energies: c.epsilons_hz.iter().map(|&e| model.level_energies(e)).collect(),
            couplings,
            drives: c.drives.iter().map(|d| (d.qubit, d.amplitude_hz, d.carrier_hz)).collect(),
            drive_qubit_only: model.drive_coupling == DriveCoupling::QubitTransition,
        };
        u = sys.propagate(c.duration_s, model.steps_per_period)? * u;
    }
    Ok(u)
}

/// Rows and columns of the states with every qubit in `|0⟩` or `|1⟩`,
/// ordered by the two-level index.
pub fn computational_block(u: &CMat, n_qubits: usize, levels: usize) -> CMat {
    let idx: Vec<usize> = (0..1usize << n_qubits)
        .map(|s| {
            (0..n_qubits)
                .filter(|q| s >> q & 1 == 1)
                .map(|q| levels.pow(q as u32))
                .sum()
        })
        .collect();
    let d = idx.len();
    CMat::from_fn(d, d, |i, j| u[(idx[i], idx[j])])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateErrorReport {
    pub n: usize,
    pub eta_hz: f64,
    pub t_gate_s: f64,
    pub omega_hz: f64,
    pub g_hz: f64,
    pub e_gate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub levels: usize,
    pub drive_coupling: DriveCoupling,
    pub steps_per_period: usize,
    pub dt_s: f64,
    /// |ΔE_gate| between the last two step sizes.
    pub convergence_delta: f64,
}

/// Simulates the multi-target CNOT entangler and scores it against
/// `e^{-i(π/4) S_x ⊗ σˣ_a}`, halving the step until `E_gate` moves by less
/// than 1e-4.
pub fn entangler_gate_error(
    params: &EntanglerParams,
    model: &QutritModel,
    mode: &ErrorMode,
) -> Result<GateErrorReport> {
    params.validate()?;
    let n = params.n_targets;
    let graph = DeviceGraph::with_ancillas(n, 1, params.eps0_hz, DEFAULT_GMAX_HZ.max(params.g_hz))?;
    let schedule = schedule_multitarget_cnot(&graph, n, params)?;
    let ideal = ideal_entangler(n);
    let mut m = model.clone();
    let mut prev: Option<f64> = None;
    for _ in 0..=MAX_HALVINGS {
        let u = evolve_qutrit(&schedule, &m)?;
        let block = computational_block(&u, n + 1, m.levels);
        let err = gate_error(&block, &ideal, mode)?;
        if let Some(p) = prev {
            let delta = (err.e_gate - p).abs();
            if delta < CONVERGENCE_TOL {
                return Ok(GateErrorReport {
                    n,
                    eta_hz: params.eta_hz,
                    t_gate_s: params.t_gate_s,
                    omega_hz: params.omega_hz,
                    g_hz: params.g_hz,
                    e_gate: err.e_gate,
                    stderr: err.stderr,
                    samples: err.samples,
                    levels: m.levels,
                    drive_coupling: m.drive_coupling,
                    steps_per_period: m.steps_per_period,
                    dt_s: 1.0 / (params.eps0_hz * m.steps_per_period as f64),
                    convergence_delta: delta,
                });
            }
        }
        prev = Some(err.e_gate);
        m.steps_per_period *= 2;
    }
    Err(Error::IntegrationFailure(format!(
        "E_gate not stable to {CONVERGENCE_TOL} after {MAX_HALVINGS} step halvings"
    )))
}

/// One benchmark configuration with its published gate error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub eta_hz: f64,
    pub t_gate_s: f64,
    pub l_b: u64,
    pub reference_e_gate: f64,
}

const fn row(n: usize, eta_mhz: f64, t_ns: f64, reference_e_gate: f64) -> BenchRow {
    BenchRow {
        n,
        eta_hz: eta_mhz * 1e6,
        t_gate_s: t_ns * 1e-9,
        l_b: 2,
        reference_e_gate,
    }
}

/// Multi-target CNOT benchmark set at `ε₀/h = 5.5 GHz`.
pub const BENCH_ROWS: [BenchRow; 8] = [
    row(3, 300.0, 30.0, 0.017),
    row(3, 300.0, 40.0, 0.011),
    row(3, 400.0, 30.0, 0.011),
    row(3, 400.0, 40.0, 0.009),
    row(4, 300.0, 30.0, 0.028),
    row(4, 300.0, 40.0, 0.021),
    row(4, 400.0, 30.0, 0.022),
    row(4, 400.0, 40.0, 0.019),
];

/// Simulates every row (in parallel) with the given drive coupling.
pub fn run_bench(
    rows: &[BenchRow],
    eps0_hz: f64,
    drive: DriveCoupling,
    mode: &ErrorMode,
) -> Result<Vec<GateErrorReport>> {
    use rayon::prelude::*;
    rows.par_iter()
        .map(|r| {
            let p = EntanglerParams::new(r.n, eps0_hz, r.t_gate_s, r.l_b, r.eta_hz)?;
            entangler_gate_error(&p, &QutritModel::new(r.eta_hz, drive)?, mode)
        })
        .collect()
}

/// Pairwise orderings over reports that differ in exactly one of
/// `(η, t_gate, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingFlags {
    pub decreases_with_eta: bool,
    pub decreases_with_t_gate: bool,
    pub increases_with_n: bool,
    pub comparisons: usize,
}

pub fn ordering_flags(reports: &[GateErrorReport]) -> OrderingFlags {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
    let mut f = OrderingFlags {
        decreases_with_eta: true,
        decreases_with_t_gate: true,
        increases_with_n: true,
        comparisons: 0,
    };
    for a in reports {
        for b in reports {
            let same_n = a.n == b.n;
            let same_eta = close(a.eta_hz, b.eta_hz);
            let same_t = close(a.t_gate_s, b.t_gate_s);
            if same_n && same_t && a.eta_hz < b.eta_hz && !same_eta {
                f.comparisons += 1;
                f.decreases_with_eta &= b.e_gate < a.e_gate;
            }
            if same_n && same_eta && a.t_gate_s < b.t_gate_s && !same_t {
                f.comparisons += 1;
                f.decreases_with_t_gate &= b.e_gate < a.e_gate;
            }
            if same_eta && same_t && a.n < b.n {
                f.comparisons += 1;
                f.increases_with_n &= b.e_gate > a.e_gate;
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::Coherent;
    use crate::numerics::C64;
    use std::f64::consts::PI;

    #[test]
    fn free_evolution_is_diagonal() {
        let g = DeviceGraph::with_ancillas(1, 1, 5.5e9, 50e6).unwrap();
        let mut s = Schedule::new(g.clone());
        s.push_coherent(Coherent::idle(&g, 1.1e-9, "").unwrap());
        let m = QutritModel::new(300e6, DriveCoupling::Transmon).unwrap();
        let u = evolve_qutrit(&s, &m).unwrap();
        assert_eq!(u.nrows(), 9);
        for i in 0..9 {
            for j in 0..9 {
                if i != j {
                    assert!(u[(i, j)].norm() < 1e-12);
                }
            }
        }
        // |2⟩ on qubit 0: energy 2ε₀ - η
        let want = C64::from_polar(1.0, -2.0 * PI * (11e9 - 300e6) * 1.1e-9);
        assert!((u[(2, 2)] - want).norm() < 1e-9);
    }

    #[test]
    fn computational_block_indices() {
        let u = CMat::from_fn(9, 9, |i, j| C64::new((10 * i + j) as f64, 0.0));
        let b = computational_block(&u, 2, 3);
        assert_eq!(b[(3, 1)].re, 41.0);
        assert_eq!(b[(2, 0)].re, 30.0);
    }

    #[test]
    fn invalid_anharmonicity() {
        assert!(QutritModel::new(0.0, DriveCoupling::Transmon).is_err());
    }
}
