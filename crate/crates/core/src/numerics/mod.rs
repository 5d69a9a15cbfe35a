//! Dense matrix primitives and the unitary decompositions every other module
//! consumes: symmetric eigensolvers, the spectral form of a unitary, the
//! real-orthogonal (Takagi) factorization of symmetric unitaries, the
//! principal logarithm of a symmetric unitary and the ABA factorization
//! `V = e^{-iA} e^{-iB} e^{iA}`.

mod aba;
mod linalg;
mod random;
mod takagi;

pub use aba::{aba_decompose, AbaDecomposition};
pub use linalg::{
    eigh_sym, expm_hermitian, frobenius_distance, max_abs_distance, principal_angle,
    spectral_unitary, SpectralForm, SymEigen,
};
pub use linalg::{eigh_herm, eigh_real};
pub use random::{
    derive_seed, haar_orthogonal, haar_state, haar_unitary, random_instance, random_symmetric,
    rng_from_seed, spd_spectrum, RandomKind, RandomMatrix,
};
pub use takagi::{sym_unitary_log, takagi_symmetric_unitary, TakagiFactorization};
pub(crate) use random::spectrum_matrix;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;

/// Tolerance on `max |UU† - I|` accepted when wrapping a matrix as a unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on `max |M - Mᵀ|` accepted for symmetric inputs.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A real symmetric matrix. Entries are stored exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSymMatrix {
    m: RMat,
}

impl RealSymMatrix {
    /// Wraps `m`, rejecting non-square, non-finite or non-symmetric input.
    /// Deviations from symmetry below `SYMMETRY_TOL` (relative to the largest
    /// entry) are averaged away.
    pub fn new(m: RMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("matrix has non-finite entries".into()));
        }
        let scale = m.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
        let deviation = max_abs_distance_real(&m, &m.transpose());
        if deviation > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { deviation });
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(mut m: RMat) -> Self {
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Self { m }
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: RMat::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: RMat::identity(n, n) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(RMat::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 }))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must all have length n".into()));
        }
        Self::new(RMat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &RMat {
        &self.m
    }

    pub fn into_matrix(self) -> RMat {
        self.m
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.m.diagonal().iter().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn to_complex(&self) -> CMat {
        self.m.map(|x| C64::new(x, 0.0))
    }

    /// `e^{i·sign·A}` through the eigendecomposition of `A`.
    pub fn exp_i(&self, sign: f64) -> CMat {
        let eig = eigh_sym(self);
        eig.exp_i(sign)
    }
}

/// A square complex matrix certified unitary to `UNITARY_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexUnitary {
    u: CMat,
}

impl ComplexUnitary {
    pub fn new(u: CMat) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "expected a square matrix, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("matrix has non-finite entries".into()));
        }
        let deviation = unitarity_deviation(&u);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { u })
    }

    /// Wraps a matrix that is unitary by construction (products and
    /// exponentials of already-validated operators).
    pub(crate) fn trusted(u: CMat) -> Self {
        debug_assert!(unitarity_deviation(&u) < 1e-8);
        Self { u }
    }

    pub fn identity(n: usize) -> Self {
        Self { u: CMat::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.u
    }

    pub fn into_matrix(self) -> CMat {
        self.u
    }

    pub fn adjoint(&self) -> Self {
        Self { u: self.u.adjoint() }
    }

    pub fn compose(&self, rhs: &ComplexUnitary) -> Self {
        Self::trusted(&self.u * &rhs.u)
    }

    /// `max |U - Uᵀ|`.
    pub fn symmetry_deviation(&self) -> f64 {
        max_abs_distance(&self.u, &self.u.transpose())
    }
}

/// `max |M M† - I|`.
pub fn unitarity_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    max_abs_distance(&(m * m.adjoint()), &CMat::identity(n, n))
}

pub(crate) fn max_abs_distance_real(a: &RMat, b: &RMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

pub(crate) fn scale_column(m: &mut CMat, j: usize, z: C64) {
    for x in m.column_mut(j).iter_mut() {
        *x *= z;
    }
}
