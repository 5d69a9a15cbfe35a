use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct DeviceGraph {
    n_total: usize,
    data_ids: Vec<usize>,
    ancilla_ids: Vec<usize>,
    eps0_hz: f64,
    gmax_hz: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n_total: usize,
    data_ids: Vec<usize>,
    ancilla_ids: Vec<usize>,
    eps0_hz: f64,
    gmax_hz: f64,
}

impl TryFrom<RawGraph> for DeviceGraph {
    type Error = Error;
    fn try_from(r: RawGraph) -> Result<Self> {
        let g = DeviceGraph::new(r.data_ids, r.ancilla_ids, r.eps0_hz, r.gmax_hz)?;
        if g.n_total != r.n_total {
            return Err(Error::InvalidInput(format!(
                "n_total {} does not match {} listed qubits",
                r.n_total, g.n_total
            )));
        }
        Ok(g)
    }
}

impl From<DeviceGraph> for RawGraph {
    fn from(g: DeviceGraph) -> Self {
        RawGraph {
            n_total: g.n_total,
            data_ids: g.data_ids,
            ancilla_ids: g.ancilla_ids,
            eps0_hz: g.eps0_hz,
            gmax_hz: g.gmax_hz,
        }
    }
}

impl DeviceGraph {
    /// Data and ancilla ids must partition `0..n_total`.
    pub fn new(
        data_ids: Vec<usize>,
        ancilla_ids: Vec<usize>,
        eps0_hz: f64,
        gmax_hz: f64,
    ) -> Result<Self> {
        let n_total = data_ids.len() + ancilla_ids.len();
        let mut seen = vec![false; n_total];
        for &q in data_ids.iter().chain(&ancilla_ids) {
            if q >= n_total || std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidInput(format!(
                    "qubit ids must partition 0..{n_total}; offending id {q}"
                )));
            }
        }
        if !(eps0_hz > 0.0 && eps0_hz.is_finite()) {
            return Err(Error::InvalidInput("eps0 must be positive".into()));
        }
        if !(gmax_hz > 0.0 && gmax_hz.is_finite()) {
            return Err(Error::InvalidInput("g_max must be positive".into()));
        }
        Ok(Self {
            n_total,
            data_ids,
            ancilla_ids,
            eps0_hz,
            gmax_hz,
        })
    }

    /// Data qubits `0..n_data`, ancillas `n_data..n_data + n_ancilla`.
    pub fn with_ancillas(n_data: usize, n_ancilla: usize, eps0_hz: f64, gmax_hz: f64) -> Result<Self> {
        Self::new(
            (0..n_data).collect(),
            (n_data..n_data + n_ancilla).collect(),
            eps0_hz,
            gmax_hz,
        )
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_data(&self) -> usize {
        self.data_ids.len()
    }

    pub fn data_ids(&self) -> &[usize] {
        &self.data_ids
    }

    pub fn ancilla_ids(&self) -> &[usize] {
        &self.ancilla_ids
    }

    pub fn eps0_hz(&self) -> f64 {
        self.eps0_hz
    }

    pub fn gmax_hz(&self) -> f64 {
        self.gmax_hz
    }

    pub fn is_data(&self, q: usize) -> bool {
        self.data_ids.contains(&q)
    }
}
