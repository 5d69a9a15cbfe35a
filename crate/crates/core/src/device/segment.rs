use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use super::DeviceGraph;
use crate::error::{Error, Result};
use crate::numerics::{CMat, C64};

/// Resonant microwave drive `Ω cos(2π f t) X_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub qubit: usize,
    pub amplitude_hz: f64,
    pub carrier_hz: f64,
}

/// Ideal gates. For multi-qubit gates `targets[0]` is the least significant
/// qubit of the gate matrix; for controlled gates it is the control.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Gate {
    Hadamard,
    PauliX,
    /// `e^{-iθX/2}`.
    Rx { theta: f64 },
    /// `e^{-iθY/2}`.
    Ry { theta: f64 },
    /// `diag(1, e^{iφ})`.
    Phase { phi: f64 },
    /// Control `targets[0]`, target `targets[1]`.
    Cnot,
    /// `diag(1, 1, 1, e^{iφ})`.
    ControlledPhase { phi: f64 },
    Swap,
    /// Control `targets[0]`, NOT on every other listed qubit.
    MultiCnot,
    Unitary {
        #[serde(with = "super::serde_cmat")]
        matrix: CMat,
    },
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Gate {
    /// Number of qubits the gate acts on, `None` for gates of any width.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Gate::Hadamard | Gate::PauliX | Gate::Rx { .. } | Gate::Ry { .. } | Gate::Phase { .. } => {
                Some(1)
            }
            Gate::Cnot | Gate::ControlledPhase { .. } | Gate::Swap => Some(2),
            Gate::MultiCnot => None,
            Gate::Unitary { matrix } => Some(matrix.nrows().trailing_zeros() as usize),
        }
    }

    /// Dense matrix on `k` qubits (little-endian over the target list).
    pub fn matrix(&self, k: usize) -> CMat {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        match self {
            Gate::Hadamard => {
                let h = FRAC_1_SQRT_2;
                CMat::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
            }
            Gate::PauliX => CMat::from_row_slice(2, 2, &[z, o, o, z]),
            Gate::Rx { theta } => {
                let (s, co) = (theta / 2.0).sin_cos();
                CMat::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
            }
            Gate::Ry { theta } => {
                let (s, co) = (theta / 2.0).sin_cos();
                CMat::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
            }
            Gate::Phase { phi } => CMat::from_row_slice(2, 2, &[o, z, z, C64::from_polar(1.0, *phi)]),
            Gate::Cnot => {
                // index = control + 2·target
                let mut m = CMat::zeros(4, 4);
                m[(0, 0)] = o;
                m[(2, 2)] = o;
                m[(3, 1)] = o;
                m[(1, 3)] = o;
                m
            }
            Gate::ControlledPhase { phi } => {
                let mut m = CMat::identity(4, 4);
                m[(3, 3)] = C64::from_polar(1.0, *phi);
                m
            }
            Gate::Swap => {
                let mut m = CMat::zeros(4, 4);
                m[(0, 0)] = o;
                m[(1, 2)] = o;
                m[(2, 1)] = o;
                m[(3, 3)] = o;
                m
            }
            Gate::MultiCnot => {
                let dim = 1 << k;
                let flip = (dim - 1) & !1;
                CMat::from_fn(dim, dim, |i, j| {
                    let image = if j & 1 == 1 { j ^ flip } else { j };
                    if i == image {
                        o
                    } else {
                        z
                    }
                })
            }
            Gate::Unitary { matrix } => matrix.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coherent {
    pub duration_s: f64,
    pub epsilons_hz: Vec<f64>,
    pub couplings_hz: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drives: Vec<Drive>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealGate {
    pub gate: Gate,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

/// Adds phase `φ_q` to `|1⟩` of each qubit `q`: `diag(1, e^{iφ_q})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZCorrection {
    pub phases_rad: Vec<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Coherent(Coherent),
    IdealGate(IdealGate),
    ZCorrection(ZCorrection),
}

impl Coherent {
    /// Validated coherent segment. Couplings must be symmetric with zero
    /// diagonal and bounded by `g_max`.
    pub fn new(
        graph: &DeviceGraph,
        duration_s: f64,
        epsilons_hz: Vec<f64>,
        couplings_hz: Vec<Vec<f64>>,
        drives: Vec<Drive>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let seg = Self {
            duration_s,
            epsilons_hz,
            couplings_hz,
            drives,
            label: label.into(),
        };
        seg.validate(graph)?;
        Ok(seg)
    }

    /// All qubits parked at `ε₀`, no couplings.
    pub fn idle(graph: &DeviceGraph, duration_s: f64, label: impl Into<String>) -> Result<Self> {
        let n = graph.n_total();
        Self::new(
            graph,
            duration_s,
            vec![graph.eps0_hz(); n],
            vec![vec![0.0; n]; n],
            Vec::new(),
            label,
        )
    }

    pub fn validate(&self, graph: &DeviceGraph) -> Result<()> {
        let n = graph.n_total();
        let bad = |msg: String| Err(Error::InvalidSegment(msg));
        if !(self.duration_s >= 0.0 && self.duration_s.is_finite()) {
            return bad(format!("duration {} must be finite and non-negative", self.duration_s));
        }
        if self.epsilons_hz.len() != n {
            return bad(format!("{} epsilons for {n} qubits", self.epsilons_hz.len()));
        }
        if self.epsilons_hz.iter().any(|e| !e.is_finite()) {
            return bad("non-finite qubit energy".into());
        }
        if self.couplings_hz.len() != n || self.couplings_hz.iter().any(|r| r.len() != n) {
            return bad(format!("coupling matrix must be {n}x{n}"));
        }
        let bound = graph.gmax_hz() * (1.0 + 1e-12);
        for i in 0..n {
            if self.couplings_hz[i][i] != 0.0 {
                return bad(format!("coupling diagonal entry {i} must be zero"));
            }
            for j in 0..n {
                let g = self.couplings_hz[i][j];
                if !g.is_finite() || g.abs() > bound {
                    return bad(format!("coupling ({i},{j}) = {g} Hz exceeds g_max"));
                }
                if g != self.couplings_hz[j][i] {
                    return bad(format!("coupling matrix not symmetric at ({i},{j})"));
                }
            }
        }
        for d in &self.drives {
            if d.qubit >= n || !d.amplitude_hz.is_finite() || !d.carrier_hz.is_finite() {
                return bad(format!("invalid drive on qubit {}", d.qubit));
            }
        }
        Ok(())
    }

    /// Filled-band energy `E_n = Σ ε_i` over the data partition.
    pub fn filled_band_hz(&self, graph: &DeviceGraph) -> f64 {
        graph.data_ids().iter().map(|&q| self.epsilons_hz[q]).sum()
    }
}

impl Segment {
    pub fn duration_s(&self) -> f64 {
        match self {
            Segment::Coherent(c) => c.duration_s,
            _ => 0.0,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Segment::Coherent(c) => &c.label,
            Segment::IdealGate(g) => &g.label,
            Segment::ZCorrection(z) => &z.label,
        }
    }

    pub fn gate(gate: Gate, targets: Vec<usize>, label: impl Into<String>) -> Self {
        Segment::IdealGate(IdealGate {
            gate,
            targets,
            label: label.into(),
        })
    }

    pub fn validate(&self, graph: &DeviceGraph) -> Result<()> {
        let n = graph.n_total();
        match self {
            Segment::Coherent(c) => c.validate(graph),
            Segment::IdealGate(g) => {
                let mut seen = vec![false; n];
                for &t in &g.targets {
                    if t >= n || std::mem::replace(&mut seen[t], true) {
                        return Err(Error::InvalidSegment(format!("bad gate target {t}")));
                    }
                }
                match g.gate.arity() {
                    Some(k) if k != g.targets.len() => Err(Error::InvalidSegment(format!(
                        "gate acts on {k} qubits but {} targets given",
                        g.targets.len()
                    ))),
                    None if g.targets.len() < 2 => {
                        Err(Error::InvalidSegment("multi-target CNOT needs a target".into()))
                    }
                    _ => Ok(()),
                }
            }
            Segment::ZCorrection(z) => {
                if z.phases_rad.len() != n || z.phases_rad.iter().any(|p| !p.is_finite()) {
                    return Err(Error::InvalidSegment(format!(
                        "z correction needs {n} finite phases"
                    )));
                }
                Ok(())
            }
        }
    }
}
