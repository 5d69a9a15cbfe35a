use super::{BasisConvention, Coherent, DeviceGraph, Segment};
use crate::error::{Error, Result};
use crate::numerics::{CMat, RMat, C64};

/// `H = Σ ε_i |1⟩⟨1|_i + ½ Σ_{i≠i'} g_{ii'} σˣ_i σˣ_{i'}` on the full register,
/// in Hz.
pub fn build_hamiltonian(seg: &Segment, graph: &DeviceGraph) -> Result<CMat> {
    let Segment::Coherent(c) = seg else {
        return Err(Error::InvalidSegment(
            "Hamiltonian requires a coherent segment".into(),
        ));
    };
    Ok(hamiltonian_real(c, graph)?.map(|x| C64::new(x, 0.0)))
}

pub fn hamiltonian_real(c: &Coherent, graph: &DeviceGraph) -> Result<RMat> {
    c.validate(graph)?;
    if !c.drives.is_empty() {
        return Err(Error::InvalidSegment(
            "driven segments have no static Hamiltonian".into(),
        ));
    }
    let n = graph.n_total();
    if n > 14 {
        return Err(Error::InvalidSegment(format!(
            "dense Hamiltonian limited to 14 qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut h = RMat::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = (0..n)
            .filter(|&q| BasisConvention::bit(s, q))
            .map(|q| c.epsilons_hz[q])
            .sum();
        for i in 0..n {
            for j in (i + 1)..n {
                let g = c.couplings_hz[i][j];
                if g != 0.0 {
                    h[(s ^ (1 << i) ^ (1 << j), s)] += g;
                }
            }
        }
    }
    Ok(h)
}

fn check_dim(h: &CMat, graph: &DeviceGraph) -> Result<()> {
    let dim = 1usize << graph.n_total();
    if h.nrows() != dim || h.ncols() != dim {
        return Err(Error::InvalidDimension(format!(
            "Hamiltonian is {}x{}, register needs {dim}",
            h.nrows(),
            h.ncols()
        )));
    }
    Ok(())
}

/// Matrix elements `(i|H|i')` between SES states of the data partition.
pub fn project_ses(h: &CMat, graph: &DeviceGraph) -> Result<CMat> {
    check_dim(h, graph)?;
    let n = graph.n_data();
    let idx: Vec<usize> = (0..n).map(|i| BasisConvention::ses_index(graph, i)).collect();
    Ok(CMat::from_fn(n, n, |i, j| h[(idx[i], idx[j])]))
}

/// Matrix elements between single-hole dual states, ancillas in `ancilla_bit`.
pub fn project_dual(h: &CMat, graph: &DeviceGraph, ancilla_bit: bool) -> Result<CMat> {
    check_dim(h, graph)?;
    let n = graph.n_data();
    let idx: Vec<usize> = (0..n)
        .map(|i| BasisConvention::dual_index(graph, i, ancilla_bit))
        .collect();
    Ok(CMat::from_fn(n, n, |i, j| h[(idx[i], idx[j])]))
}
