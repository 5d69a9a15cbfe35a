use nalgebra::DVector;

use crate::device::Gate;
use crate::error::{Error, Result};
use crate::numerics::{CMat, C64};

use super::gates::apply_strided;

/// Abstract register: an `d`-dimensional data system (the single-excitation
/// amplitudes) tensored with `k` qubits. Amplitude index is
/// `data + d · bits`, qubit 0 least significant.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterState {
    data_dim: usize,
    n_qubits: usize,
    amps: Vec<C64>,
}

impl RegisterState {
    /// `ψ ⊗ |0…0⟩`.
    pub fn new(psi: &DVector<C64>, n_qubits: usize) -> Self {
        let d = psi.len();
        let mut amps = vec![C64::new(0.0, 0.0); d << n_qubits];
        amps[..d].copy_from_slice(psi.as_slice());
        Self {
            data_dim: d,
            n_qubits,
            amps,
        }
    }

    pub fn data_dim(&self) -> usize {
        self.data_dim
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check(&self, targets: &[usize]) -> Result<()> {
        for (k, &q) in targets.iter().enumerate() {
            if q >= self.n_qubits || targets[..k].contains(&q) {
                return Err(Error::InvalidInput(format!("bad register qubit {q}")));
            }
        }
        Ok(())
    }

    pub fn apply_matrix(&mut self, targets: &[usize], u: &CMat) -> Result<()> {
        self.check(targets)?;
        if u.nrows() != 1 << targets.len() {
            return Err(Error::InvalidDimension("gate size does not match targets".into()));
        }
        let strides: Vec<usize> = targets.iter().map(|q| self.data_dim << q).collect();
        apply_strided(&mut self.amps, &strides, u);
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        self.apply_matrix(targets, &gate.matrix(targets.len()))
    }

    /// Applies `u` to the data block of every basis state whose `control`
    /// qubit equals `value`.
    pub fn apply_data_when(&mut self, control: usize, value: usize, u: &CMat) -> Result<()> {
        self.check(&[control])?;
        let d = self.data_dim;
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::InvalidDimension("data operator size mismatch".into()));
        }
        for block in 0..(1usize << self.n_qubits) {
            if block >> control & 1 != value {
                continue;
            }
            let slice = &mut self.amps[block * d..(block + 1) * d];
            let v = u * DVector::from_column_slice(slice);
            slice.copy_from_slice(v.as_slice());
        }
        Ok(())
    }

    pub fn probability(&self, qubit: usize, outcome: usize) -> f64 {
        let d = self.data_dim;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / d) >> qubit & 1 == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `qubit` on `outcome`, renormalizes, returns the probability.
    pub fn postselect(&mut self, qubit: usize, outcome: usize) -> Result<f64> {
        self.check(&[qubit])?;
        let p = self.probability(qubit, outcome);
        if p <= 1e-300 {
            return Err(Error::ImpossibleOutcome(format!("qubit {qubit} never reads {outcome}")));
        }
        let d = self.data_dim;
        let s = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if (i / d) >> qubit & 1 == outcome { *a * s } else { C64::new(0.0, 0.0) };
        }
        Ok(p)
    }

    /// Data density matrix with every qubit traced out.
    pub fn data_density(&self) -> CMat {
        let d = self.data_dim;
        let mut rho = CMat::zeros(d, d);
        for block in self.amps.chunks(d) {
            let v = DVector::from_column_slice(block);
            rho += &v * v.adjoint();
        }
        rho
    }
}
