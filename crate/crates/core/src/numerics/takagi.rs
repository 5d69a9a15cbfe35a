use std::f64::consts::PI;

use super::linalg::{joint_eigenbasis, max_abs_distance, principal_angle};
use super::{scale_column, CMat, ComplexUnitary, RMat, RealSymMatrix, C64, SYMMETRY_TOL};
use crate::error::{Error, Result};

/// `M = Q e^{iΦ} Qᵀ` with `Q` real orthogonal and phases in (-π, π].
#[derive(Clone, Debug)]
pub struct TakagiFactorization {
    pub q: RMat,
    pub phi: Vec<f64>,
}

impl TakagiFactorization {
    pub fn reconstruct(&self) -> CMat {
        let q = self.q.map(|x| C64::new(x, 0.0));
        let mut left = q.clone();
        for (j, p) in self.phi.iter().enumerate() {
            scale_column(&mut left, j, C64::from_polar(1.0, *p));
        }
        left * q.transpose()
    }
}

/// Real-orthogonal factorization of a symmetric unitary. `X = Re M` and
/// `Y = Im M` are real symmetric and commute, so one real orthogonal basis
/// diagonalizes both; the phases are `atan2(y_k, x_k)`.
pub fn takagi_symmetric_unitary(m: &ComplexUnitary) -> Result<TakagiFactorization> {
    let deviation = m.symmetry_deviation();
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    let mat = m.matrix();
    let n = mat.nrows();
    let x = RMat::from_fn(n, n, |i, j| 0.5 * (mat[(i, j)].re + mat[(j, i)].re));
    let y = RMat::from_fn(n, n, |i, j| 0.5 * (mat[(i, j)].im + mat[(j, i)].im));
    let q = refine_joint(joint_eigenbasis(&x, &y, 1e-8), &x, &y);
    let phi = (0..n)
        .map(|k| {
            let col = q.column(k);
            let xk = (col.transpose() * &x * col)[(0, 0)];
            let yk = (col.transpose() * &y * col)[(0, 0)];
            let p = yk.atan2(xk);
            if p <= -PI {
                PI
            } else {
                p
            }
        })
        .collect();
    let fact = TakagiFactorization { q, phi };
    let residual = max_abs_distance(&fact.reconstruct(), mat);
    if residual > 1e-8 {
        return Err(Error::NumericalFailure(format!(
            "Takagi residual {residual:.3e} exceeds 1e-8"
        )));
    }
    Ok(fact)
}

/// Jacobi sweeps on `(QᵀXQ, QᵀYQ)` that drive both off-diagonals to
/// rounding level, resolving splittings below the clustering tolerance.
fn refine_joint(q: RMat, x: &RMat, y: &RMat) -> RMat {
    let n = q.nrows();
    let mut q = q;
    let mut mats = [q.transpose() * x * &q, q.transpose() * y * &q];
    let scale = x.norm().max(y.norm()).max(f64::MIN_POSITIVE);
    for _ in 0..30 {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let off = mats[0][(p, r)].abs().max(mats[1][(p, r)].abs());
                if off <= 1e-17 * scale {
                    continue;
                }
                let (mut g00, mut g01, mut g11) = (0.0, 0.0, 0.0);
                for m in &mats {
                    let (h0, h1) = (m[(p, p)] - m[(r, r)], 2.0 * m[(p, r)]);
                    g00 += h0 * h0;
                    g01 += h0 * h1;
                    g11 += h1 * h1;
                }
                // dominant eigenvector (u, v) of [[g00, g01], [g01, g11]], u >= 0
                let tr = 0.5 * (g00 + g11);
                let det = g00 * g11 - g01 * g01;
                let lam = tr + (tr * tr - det).max(0.0).sqrt();
                let (mut u, mut v) = if (lam - g11).abs() > (lam - g00).abs() {
                    (lam - g11, g01)
                } else {
                    (g01, lam - g00)
                };
                if u < 0.0 {
                    u = -u;
                    v = -v;
                }
                let rr = u.hypot(v);
                if rr == 0.0 {
                    continue;
                }
                let c = ((u + rr) / (2.0 * rr)).sqrt();
                let s = v / (2.0 * rr * (u + rr)).sqrt();
                if s.abs() < 1e-18 {
                    continue;
                }
                rotated = true;
                for m in mats.iter_mut() {
                    rotate(m, p, r, c, s);
                }
                for i in 0..n {
                    let (a, b) = (q[(i, p)], q[(i, r)]);
                    q[(i, p)] = c * a + s * b;
                    q[(i, r)] = -s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    q
}

/// `M ← Gᵀ M G` for the plane rotation with columns `p' = c p + s r`,
/// `r' = -s p + c r`.
fn rotate(m: &mut RMat, p: usize, r: usize, c: f64, s: f64) {
    let n = m.nrows();
    for i in 0..n {
        let (a, b) = (m[(i, p)], m[(i, r)]);
        m[(i, p)] = c * a + s * b;
        m[(i, r)] = -s * a + c * b;
    }
    for j in 0..n {
        let (a, b) = (m[(p, j)], m[(r, j)]);
        m[(p, j)] = c * a + s * b;
        m[(r, j)] = -s * a + c * b;
    }
}

/// Principal real symmetric logarithm: returns `A` with `e^{-iA} = S`.
pub fn sym_unitary_log(s: &ComplexUnitary) -> Result<RealSymMatrix> {
    let t = takagi_symmetric_unitary(s)?;
    Ok(generator_from_phases(&t.q, &t.phi, -1.0))
}

/// `scale · Q diag(φ) Qᵀ`.
pub(crate) fn generator_from_phases(q: &RMat, phi: &[f64], scale: f64) -> RealSymMatrix {
    let mut left = q.clone();
    for (j, p) in phi.iter().enumerate() {
        left.column_mut(j).scale_mut(scale * principal_angle(*p));
    }
    RealSymMatrix::symmetrized(left * q.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigh_sym, haar_orthogonal, random_symmetric, rng_from_seed};
    use nalgebra::DVector;

    fn diag_unitary(phases: &[C64]) -> ComplexUnitary {
        ComplexUnitary::new(CMat::from_diagonal(&DVector::from_vec(phases.to_vec()))).unwrap()
    }

    #[test]
    fn identity_has_zero_phases() {
        let t = takagi_symmetric_unitary(&ComplexUnitary::identity(3)).unwrap();
        assert!(t.phi.iter().all(|p| p.abs() < 1e-15));
    }

    #[test]
    fn diagonal_phases() {
        let m = diag_unitary(&[C64::new(0.0, 1.0), C64::new(1.0, 0.0)]);
        let t = takagi_symmetric_unitary(&m).unwrap();
        let mut phi = t.phi.clone();
        phi.sort_by(f64::total_cmp);
        assert!((phi[0]).abs() < 1e-15);
        assert!((phi[1] - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn forward_generated_round_trip() {
        let mut rng = rng_from_seed(5);
        for n in [2, 5, 9] {
            let q0 = haar_orthogonal(n, &mut rng);
            // Conjugate pairs and a repeated phase stress the degeneracy path.
            let mut phi0: Vec<f64> = (0..n).map(|k| 0.7 * k as f64 - 1.3).collect();
            phi0[0] = 0.4;
            phi0[1] = -0.4;
            if n > 2 {
                phi0[2] = 0.4;
            }
            let t0 = TakagiFactorization { q: q0, phi: phi0 };
            let m = ComplexUnitary::new(t0.reconstruct()).unwrap();
            let t = takagi_symmetric_unitary(&m).unwrap();
            assert!(max_abs_distance(&t.reconstruct(), m.matrix()) < 1e-10);
            let qqt = &t.q * t.q.transpose();
            assert!((qqt - RMat::identity(n, n)).amax() < 1e-10);
        }
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        );
        let u = ComplexUnitary::new(m).unwrap();
        assert!(matches!(
            takagi_symmetric_unitary(&u),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn log_of_identity_and_diagonal() {
        let a = sym_unitary_log(&ComplexUnitary::identity(2)).unwrap();
        assert!(a.max_abs() < 1e-15);
        let s = diag_unitary(&[C64::new(0.0, -1.0), C64::new(0.0, 1.0)]);
        let a = sym_unitary_log(&s).unwrap();
        assert!((a.matrix()[(0, 0)] - PI / 2.0).abs() < 1e-14);
        assert!((a.matrix()[(1, 1)] + PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn log_recovers_spectrum() {
        let mut rng = rng_from_seed(9);
        let a0 = random_symmetric(6, &mut rng);
        let norm = eigh_sym(&a0).values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let a0 = a0.scaled(2.5 / norm);
        let s = ComplexUnitary::new(a0.exp_i(-1.0)).unwrap();
        let a = sym_unitary_log(&s).unwrap();
        let l0 = eigh_sym(&a0).values;
        let l = eigh_sym(&a).values;
        for (x, y) in l0.iter().zip(&l) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(max_abs_distance(&a.exp_i(-1.0), s.matrix()) < 1e-9);
    }

    #[test]
    fn refinement_resolves_tiny_splittings() {
        let mut rng = rng_from_seed(77);
        let q0 = haar_orthogonal(6, &mut rng);
        let mk = |d: &[f64]| {
            let mut l = q0.clone();
            for (j, v) in d.iter().enumerate() {
                l.column_mut(j).scale_mut(*v);
            }
            l * q0.transpose()
        };
        let x = mk(&[1.0; 6]);
        let y = mk(&[0.0, 3e-11, -2e-11, 5e-11, 1e-11, -4e-11]);
        let q = refine_joint(RMat::identity(6, 6), &x, &y);
        let yd = q.transpose() * &y * &q;
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert!(yd[(i, j)].abs() < 1e-17, "{}", yd[(i, j)]);
                }
            }
        }
        assert!((q.transpose() * &q - RMat::identity(6, 6)).norm() < 1e-14);
    }
}
