use nalgebra::DVector;

use crate::device::{BasisConvention, DeviceGraph};
use crate::error::{Error, Result};
use crate::numerics::{CMat, C64};

/// State of `n_qubits` qubits, each with `levels` levels; qubit `q` is digit
/// `q` of the index in base `levels` (least significant first).
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    amps: Vec<C64>,
    n_qubits: usize,
    levels: usize,
}

pub const NORM_TOL: f64 = 1e-10;

impl FullState {
    pub fn new(n_qubits: usize, levels: usize, amps: Vec<C64>) -> Result<Self> {
        if levels < 2 || amps.len() != levels.pow(n_qubits as u32) {
            return Err(Error::InvalidDimension(format!(
                "{} amplitudes do not fit {n_qubits} qubits with {levels} levels",
                amps.len()
            )));
        }
        let s = Self { amps, n_qubits, levels };
        if (s.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub(crate) fn from_raw(n_qubits: usize, levels: usize, amps: Vec<C64>) -> Self {
        Self { amps, n_qubits, levels }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Self::from_raw(n_qubits, 2, amps)
    }

    /// `Σ_i ψ_i |i) ⊗ (α|0⟩ + β|1⟩)_ancilla` with every other ancilla in `|0⟩`.
    pub fn ses_with_ancilla(
        graph: &DeviceGraph,
        psi: &DVector<C64>,
        ancilla: usize,
        alpha: C64,
        beta: C64,
    ) -> Result<Self> {
        if psi.len() != graph.n_data() {
            return Err(Error::InvalidDimension("psi length differs from data size".into()));
        }
        let n = graph.n_total();
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for i in 0..psi.len() {
            let s = BasisConvention::ses_index(graph, i);
            amps[s] += psi[i] * alpha;
            amps[s | 1 << ancilla] += psi[i] * beta;
        }
        Self::new(n, 2, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut Vec<C64> {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &FullState) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`; global phase does not matter.
    pub fn fidelity(&self, other: &FullState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn renormalized(mut self) -> Self {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
        self
    }

    /// Born probability of `qubit` reading `outcome` (a level index).
    pub fn probability(&self, qubit: usize, outcome: usize) -> f64 {
        let stride = self.levels.pow(qubit as u32);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / stride) % self.levels == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Projects `qubit` onto `outcome` and renormalizes; returns the Born
/// probability alongside.
pub fn postselect(state: &FullState, qubit: usize, outcome: usize) -> Result<(FullState, f64)> {
    if qubit >= state.n_qubits || outcome >= state.levels {
        return Err(Error::InvalidInput(format!("no outcome {outcome} on qubit {qubit}")));
    }
    let p = state.probability(qubit, outcome);
    if p <= 1e-300 {
        return Err(Error::ImpossibleOutcome(format!(
            "qubit {qubit} never reads {outcome}"
        )));
    }
    let stride = state.levels.pow(qubit as u32);
    let scale = 1.0 / p.sqrt();
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if (i / stride) % state.levels == outcome {
                a * scale
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((FullState::from_raw(state.n_qubits, state.levels, amps), p))
}

/// Reduced density matrix on `keep` (listed order is least significant
/// first in the returned matrix).
pub fn partial_trace(state: &FullState, keep: &[usize]) -> Result<CMat> {
    let d = state.levels;
    for (k, &q) in keep.iter().enumerate() {
        if q >= state.n_qubits || keep[..k].contains(&q) {
            return Err(Error::InvalidInput(format!("bad kept qubit {q}")));
        }
    }
    let traced: Vec<usize> = (0..state.n_qubits).filter(|q| !keep.contains(q)).collect();
    let kd = d.pow(keep.len() as u32);
    let td = d.pow(traced.len() as u32);
    let digits = |mut x: usize, qs: &[usize]| -> usize {
        let mut idx = 0;
        for &q in qs {
            idx += (x % d) * d.pow(q as u32);
            x /= d;
        }
        idx
    };
    let keep_off: Vec<usize> = (0..kd).map(|k| digits(k, keep)).collect();
    let mut rho = CMat::zeros(kd, kd);
    for t in 0..td {
        let base = digits(t, &traced);
        for i in 0..kd {
            let ai = state.amps[base + keep_off[i]];
            if ai == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..kd {
                rho[(i, j)] += ai * state.amps[base + keep_off[j]].conj();
            }
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigh_herm, haar_state, rng_from_seed};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn product_state_probability() {
        // (0.6|0⟩ + 0.8|1⟩) ⊗ |0⟩ on qubits (0, 1)
        let s = FullState::new(2, 2, vec![c(0.6), c(0.8), c(0.0), c(0.0)]).unwrap();
        let (post, p) = postselect(&s, 0, 1).unwrap();
        assert!((p - 0.64).abs() < 1e-15);
        assert!((post.amplitudes()[1].re - 1.0).abs() < 1e-15);
        assert!(matches!(postselect(&s, 1, 1), Err(Error::ImpossibleOutcome(_))));
    }

    #[test]
    fn bell_state_reduces_to_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = FullState::new(2, 2, vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let rho = partial_trace(&s, &[1]).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn random_reduced_state_is_density_matrix() {
        let mut rng = rng_from_seed(30);
        let psi = haar_state(16, &mut rng);
        let s = FullState::new(4, 2, psi.iter().copied().collect()).unwrap();
        let rho = partial_trace(&s, &[3, 1]).unwrap();
        let tr: C64 = rho.trace();
        assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
        let (vals, _) = eigh_herm(&rho);
        assert!(vals.iter().all(|v| *v > -1e-12));
        assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // oracle: element (i, j) summed from explicit outer products
        let mut want = CMat::zeros(4, 4);
        for a in 0..16usize {
            for b in 0..16usize {
                let (a3, a1, b3, b1) = (a >> 3 & 1, a >> 1 & 1, b >> 3 & 1, b >> 1 & 1);
                if (a & 0b0101) == (b & 0b0101) {
                    want[(a3 + 2 * a1, b3 + 2 * b1)] += psi[a] * psi[b].conj();
                }
            }
        }
        assert!((rho - want).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn ses_embedding() {
        let g = DeviceGraph::with_ancillas(2, 1, 5.5e9, 50e6).unwrap();
        let psi = DVector::from_vec(vec![c(0.6), c(0.8)]);
        let s = FullState::ses_with_ancilla(&g, &psi, 2, c(0.0), c(1.0)).unwrap();
        assert!((s.amplitudes()[0b101].re - 0.6).abs() < 1e-15);
        assert!((s.amplitudes()[0b110].re - 0.8).abs() < 1e-15);
    }
}
