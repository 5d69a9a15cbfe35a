use crate::device::Gate;
use crate::error::{Error, Result};
use crate::numerics::{CMat, C64};

use super::FullState;

/// Applies a `2^k × 2^k` matrix to the listed qubits of a two-level state
/// (`targets[0]` is the least significant bit of the matrix index).
pub fn apply_matrix(state: &mut FullState, targets: &[usize], u: &CMat) -> Result<()> {
    check(state, targets)?;
    let k = targets.len();
    if u.nrows() != 1 << k || u.ncols() != 1 << k {
        return Err(Error::InvalidDimension(format!(
            "{}x{} matrix on {k} qubits",
            u.nrows(),
            u.ncols()
        )));
    }
    let strides: Vec<usize> = targets.iter().map(|q| 1 << q).collect();
    apply_strided(state.amplitudes_mut(), &strides, u);
    Ok(())
}

/// Applies `u` to the qubits whose index digits have the given strides
/// (each digit binary); `strides[0]` is the least significant bit of `u`.
pub(crate) fn apply_strided(amps: &mut [C64], strides: &[usize], u: &CMat) {
    let k = strides.len();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|local| {
            strides
                .iter()
                .enumerate()
                .filter(|(b, _)| local >> b & 1 == 1)
                .map(|(_, s)| s)
                .sum()
        })
        .collect();
    let mut buf = vec![C64::new(0.0, 0.0); 1 << k];
    for base in 0..amps.len() {
        if strides.iter().any(|s| (base / s) % 2 == 1) {
            continue;
        }
        for (b, off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base + off];
        }
        for (i, off) in offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, b) in buf.iter().enumerate() {
                acc += u[(i, j)] * b;
            }
            amps[base + off] = acc;
        }
    }
}

fn check(state: &FullState, targets: &[usize]) -> Result<()> {
    if state.levels() != 2 {
        return Err(Error::InvalidDimension("ideal gates act on two-level states".into()));
    }
    for (k, &q) in targets.iter().enumerate() {
        if q >= state.n_qubits() || targets[..k].contains(&q) {
            return Err(Error::InvalidSegment(format!("bad gate target {q}")));
        }
    }
    Ok(())
}

pub fn apply_gate(state: &mut FullState, gate: &Gate, targets: &[usize]) -> Result<()> {
    match gate {
        Gate::MultiCnot => {
            check(state, targets)?;
            let Some((&control, rest)) = targets.split_first() else {
                return Err(Error::InvalidSegment("empty target list".into()));
            };
            let flip: usize = rest.iter().map(|q| 1 << q).sum();
            let amps = state.amplitudes_mut();
            for s in 0..amps.len() {
                if s >> control & 1 == 1 && s < s ^ flip {
                    amps.swap(s, s ^ flip);
                }
            }
            Ok(())
        }
        g => apply_matrix(state, targets, &g.matrix(targets.len())),
    }
}

/// Multiplies each basis amplitude by `Π_q e^{iφ_q}` over its excited qubits.
pub fn apply_z_phases(state: &mut FullState, phases: &[f64]) -> Result<()> {
    if phases.len() != state.n_qubits() || state.levels() != 2 {
        return Err(Error::InvalidSegment("z correction size mismatch".into()));
    }
    let factors: Vec<(usize, C64)> = phases
        .iter()
        .enumerate()
        .filter(|(_, p)| **p != 0.0)
        .map(|(q, p)| (q, C64::from_polar(1.0, *p)))
        .collect();
    for (s, a) in state.amplitudes_mut().iter_mut().enumerate() {
        for (q, f) in &factors {
            if s >> q & 1 == 1 {
                *a *= f;
            }
        }
    }
    Ok(())
}
