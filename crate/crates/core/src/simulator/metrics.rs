use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{haar_state, rng_from_seed, CMat, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ErrorMode {
    MonteCarlo { samples: usize, seed: u64 },
    SubspaceAverage,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateError {
    pub e_gate: f64,
    /// Standard error of the Monte Carlo mean; zero for the closed form.
    pub stderr: f64,
    pub samples: usize,
}

/// State-averaged infidelity `1 - |⟨Ψ|U_ideal† U|Ψ⟩|²` over the computational
/// subspace. `realized` is the computational block of the propagator, so
/// leaked amplitude simply reduces the overlap.
pub fn gate_error(realized: &CMat, ideal: &CMat, mode: &ErrorMode) -> Result<GateError> {
    if realized.shape() != ideal.shape() || !ideal.is_square() {
        return Err(Error::InvalidDimension(format!(
            "realized {:?} vs ideal {:?}",
            realized.shape(),
            ideal.shape()
        )));
    }
    let m = ideal.adjoint() * realized;
    let d = m.nrows();
    match mode {
        ErrorMode::SubspaceAverage => {
            let tr = m.trace().norm_sqr();
            let hs: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            let f = (tr + hs) / (d as f64 * (d as f64 + 1.0));
            Ok(GateError {
                e_gate: (1.0 - f).max(0.0),
                stderr: 0.0,
                samples: 0,
            })
        }
        ErrorMode::MonteCarlo { samples, seed } => {
            if *samples < 2 {
                return Err(Error::InvalidInput("Monte Carlo needs at least 2 samples".into()));
            }
            let mut rng = rng_from_seed(*seed);
            let mut sum = 0.0;
            let mut sq = 0.0;
            for _ in 0..*samples {
                let psi = haar_state(d, &mut rng);
                let amp: C64 = psi.dotc(&(&m * &psi));
                let e = 1.0 - amp.norm_sqr();
                sum += e;
                sq += e * e;
            }
            let k = *samples as f64;
            let mean = sum / k;
            let var = (sq / k - mean * mean).max(0.0) * k / (k - 1.0);
            Ok(GateError {
                e_gate: mean,
                stderr: (var / k).sqrt(),
                samples: *samples,
            })
        }
    }
}
