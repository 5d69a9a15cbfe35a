use super::linalg::{frobenius_distance, spectral_unitary};
use super::takagi::{generator_from_phases, takagi_symmetric_unitary};
use super::{CMat, ComplexUnitary, RMat, RealSymMatrix, C64};
use crate::error::{Error, Result};

/// `V = e^{-iA} e^{-iB} e^{iA}` with `A`, `B` real symmetric.
#[derive(Clone, Debug)]
pub struct AbaDecomposition {
    pub a: RealSymMatrix,
    pub b: RealSymMatrix,
    pub residual: f64,
}

impl AbaDecomposition {
    pub fn reconstruct(&self) -> CMat {
        let ea_minus = self.a.exp_i(-1.0);
        let ea_plus = self.a.exp_i(1.0);
        let eb = self.b.exp_i(-1.0);
        ea_minus * eb * ea_plus
    }
}

/// Writes `V = P e^{-iΛ} P†` and Takagi-factors the symmetric unitary
/// `M = P Pᵀ = Q e^{iΦ} Qᵀ`. With `A = -Q(Φ/2)Qᵀ` one has `e^{-2iA} = M`,
/// so `O = e^{iA} P` is real orthogonal and `B = O Λ Oᵀ`.
pub fn aba_decompose(v: &ComplexUnitary) -> Result<AbaDecomposition> {
    let n = v.dim();
    let spec = spectral_unitary(v)?;
    let p = spec.v.matrix();
    let mut m = p * p.transpose();
    let mt = m.transpose();
    m = (m + mt) * C64::new(0.5, 0.0);
    let tak = takagi_symmetric_unitary(&ComplexUnitary::trusted(m))?;
    let a = generator_from_phases(&tak.q, &tak.phi, -0.5);
    let o = a.exp_i(1.0) * p;
    let imag = o.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    if imag > 1e-8 {
        return Err(Error::NumericalFailure(format!(
            "ABA rotation is not real (max imaginary part {imag:.3e})"
        )));
    }
    let o = RMat::from_fn(n, n, |i, j| o[(i, j)].re);
    let mut scaled = o.clone();
    for (j, d) in spec.d.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*d);
    }
    let b = RealSymMatrix::symmetrized(scaled * o.transpose());
    let mut out = AbaDecomposition {
        a,
        b,
        residual: 0.0,
    };
    out.residual = frobenius_distance(&out.reconstruct(), v.matrix());
    if out.residual > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "ABA residual {:.3e} exceeds 1e-9",
            out.residual
        )));
    }
    Ok(out)
}
