use nalgebra::{ComplexField, DMatrix, SymmetricEigen};
use std::f64::consts::PI;

use super::{scale_column, CMat, ComplexUnitary, RMat, RealSymMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: RMat,
}

impl SymEigen {
    pub fn reconstruct(&self) -> RMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            scaled.column_mut(j).scale_mut(self.values[j]);
        }
        scaled * self.vectors.transpose()
    }

    /// `Q e^{i·sign·Λ} Qᵀ`.
    pub fn exp_i(&self, sign: f64) -> CMat {
        let n = self.values.len();
        let q = self.vectors.map(|x| C64::new(x, 0.0));
        let mut left = q.clone();
        for j in 0..n {
            let phase = C64::from_polar(1.0, sign * self.values[j]);
            scale_column(&mut left, j, phase);
        }
        left * q.transpose()
    }
}

/// Symmetric eigendecomposition `M = Q Λ Qᵀ`, eigenvalues ascending.
pub fn eigh_sym(m: &RealSymMatrix) -> SymEigen {
    let (values, vectors) = eigh_real(m.matrix());
    SymEigen { values, vectors }
}

pub fn eigh_real(m: &RMat) -> (Vec<f64>, RMat) {
    eigh_generic(m.clone())
}

pub fn eigh_herm(m: &CMat) -> (Vec<f64>, CMat) {
    eigh_generic(m.clone())
}

/// Hermitian eigensolver shared by the real and complex paths; sorts the
/// spectrum ascending and permutes the eigenvectors to match.
fn eigh_generic<T>(m: DMatrix<T>) -> (Vec<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), m);
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])].clone());
    (values, vectors)
}

/// Orthonormal basis that simultaneously diagonalizes two commuting Hermitian
/// matrices. `x` is diagonalized first; inside each cluster of equal
/// eigenvalues (within `tol`) `y` is diagonalized, and inside each cluster
/// of that `x` is diagonalized once more.
pub(crate) fn joint_eigenbasis<T>(x: &DMatrix<T>, y: &DMatrix<T>, tol: f64) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let (xv, mut q) = eigh_generic(hermitize(x.clone()));
    for (start, len) in clusters(&xv, tol) {
        if len < 2 {
            continue;
        }
        let qc = q.columns(start, len).into_owned();
        let yc = hermitize(qc.adjoint() * y * &qc);
        let (yv, w) = eigh_generic(yc);
        let mut qcw = qc * w;
        for (s, l) in clusters(&yv, tol) {
            if l < 2 {
                continue;
            }
            let sub = qcw.columns(s, l).into_owned();
            let xs = hermitize(sub.adjoint() * x * &sub);
            let (_, w2) = eigh_generic(xs);
            qcw.columns_mut(s, l).copy_from(&(sub * w2));
        }
        q.columns_mut(start, len).copy_from(&qcw);
    }
    q
}

fn hermitize<T>(m: DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let adj = m.adjoint();
    (m + adj) * T::from_real(0.5)
}

/// Runs of consecutive (sorted) values whose neighbouring gaps are within `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push((start, k - start));
            start = k;
        }
    }
    out
}

/// Maps an angle onto the principal branch (-π, π]; -π itself maps to +π.
pub fn principal_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x - two_pi * ((x + PI) / two_pi).floor();
    if y <= -PI {
        y += two_pi;
    }
    if y > PI {
        y -= two_pi;
    }
    y
}

/// `U = V e^{-iD} V†` with `D` real diagonal, phases on the principal branch.
#[derive(Clone, Debug)]
pub struct SpectralForm {
    pub v: ComplexUnitary,
    pub d: Vec<f64>,
}

impl SpectralForm {
    pub fn reconstruct(&self) -> CMat {
        let v = self.v.matrix();
        let mut left = v.clone();
        for (j, dj) in self.d.iter().enumerate() {
            scale_column(&mut left, j, C64::from_polar(1.0, -dj));
        }
        left * v.adjoint()
    }
}

/// Spectral form of a unitary. The Hermitian parts `(U + U†)/2` and
/// `(U - U†)/2i` commute and are diagonalized jointly, which handles
/// degenerate spectra without a general non-symmetric eigensolver.
pub fn spectral_unitary(u: &ComplexUnitary) -> Result<SpectralForm> {
    let m = u.matrix();
    let n = m.nrows();
    let adj = m.adjoint();
    let re = (m + &adj) * C64::new(0.5, 0.0);
    let im = (m - &adj) * C64::new(0.0, -0.5);
    let v = joint_eigenbasis(&re, &im, 1e-8);
    let d: Vec<f64> = (0..n)
        .map(|k| {
            let col = v.column(k);
            let lambda = (col.adjoint() * m * col)[(0, 0)];
            principal_angle(-lambda.arg())
        })
        .collect();
    let form = SpectralForm {
        v: ComplexUnitary::trusted(v),
        d,
    };
    let residual = max_abs_distance(&form.reconstruct(), m);
    if residual > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "spectral decomposition residual {residual:.3e} exceeds 1e-9"
        )));
    }
    Ok(form)
}

/// `e^{-iHt}` for Hermitian `H` (dimensionless product `t`).
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    let (vals, vecs) = eigh_herm(h);
    let mut left = vecs.clone();
    for (j, lam) in vals.iter().enumerate() {
        scale_column(&mut left, j, C64::from_polar(1.0, -lam * t));
    }
    left * vecs.adjoint()
}

pub fn max_abs_distance(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
