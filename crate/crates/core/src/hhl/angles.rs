use serde::{Deserialize, Serialize};

use crate::device::Gate;
use crate::error::{Error, Result};

/// Target angles `γ_k` of the controlled rotation `Σ_k |k⟩⟨k| ⊗ R_y(γ_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationAngles {
    pub gamma: Vec<f64>,
    pub theta: Vec<f64>,
}

impl RotationAngles {
    pub fn for_register(m: usize) -> Result<Self> {
        let gamma = gamma_angles(m)?;
        let theta = ucr_angles(&gamma)?;
        Ok(Self { gamma, theta })
    }
}

/// `γ_0 = 0`, `γ_k = 2 arcsin(1/k)`, so the `|1⟩` amplitude is `1/k`.
pub fn gamma_angles(m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > 16 {
        return Err(Error::InvalidParams(format!("phase register size {m} out of range")));
    }
    Ok((0..1usize << m)
        .map(|k| if k == 0 { 0.0 } else { 2.0 * (1.0 / k as f64).asin() })
        .collect())
}

pub fn gray(j: usize) -> usize {
    j ^ (j >> 1)
}

/// Sign matrix entry `(-1)^{popcount(k & gray(j))}`.
pub fn sign_entry(k: usize, j: usize) -> f64 {
    if (k & gray(j)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Solves `M θ = γ`; `MᵀM = 2^m I`, so `θ = Mᵀγ / 2^m`.
pub fn ucr_angles(gamma: &[f64]) -> Result<Vec<f64>> {
    let n = gamma.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!("angle count {n} is not a power of two")));
    }
    Ok((0..n)
        .map(|j| (0..n).map(|k| sign_entry(k, j) * gamma[k]).sum::<f64>() / n as f64)
        .collect())
}

/// Control qubit of the CNOT after rotation `j` (the bit where consecutive
/// Gray codes differ, cyclically).
pub fn ucr_cnot_control(j: usize, m: usize) -> usize {
    let n = 1usize << m;
    (gray(j) ^ gray((j + 1) % n)).trailing_zeros() as usize
}

/// Uniformly controlled `R_y`: `2^m` rotations on `target` interleaved with
/// `2^m` CNOTs from `controls[bit]`.
pub fn ucr_circuit(theta: &[f64], controls: &[usize], target: usize) -> Result<Vec<(Gate, Vec<usize>)>> {
    let m = controls.len();
    if theta.len() != 1 << m {
        return Err(Error::InvalidInput(format!(
            "{} angles for {m} controls",
            theta.len()
        )));
    }
    let mut out = Vec::with_capacity(2 * theta.len());
    for (j, &t) in theta.iter().enumerate() {
        out.push((Gate::Ry { theta: t }, vec![target]));
        if m > 0 {
            out.push((Gate::Cnot, vec![controls[ucr_cnot_control(j, m)], target]));
        }
    }
    Ok(out)
}
