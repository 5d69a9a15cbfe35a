use crate::error::{Error, Result};
use crate::numerics::{eigh_real, RMat, C64};

const KRYLOV_DIM: usize = 40;

/// `e^{-iτH} v` for Hermitian `H` given as a matrix-vector product, by
/// Lanczos with adaptive sub-stepping. The local error estimate
/// `β_m |(e^{-iδT})_{m,1}|` is kept below `tol·δ/τ` on every sub-step.
pub fn expmv_lanczos<F>(matvec: F, v: &[C64], tau: f64, tol: f64) -> Result<Vec<C64>>
where
    F: Fn(&[C64], &mut [C64]),
{
    let dim = v.len();
    let mut cur = v.to_vec();
    let mut done = 0.0;
    let mut guard = 0usize;
    while done < tau.abs() * (1.0 - 1e-15) {
        guard += 1;
        if guard > 100_000 {
            return Err(Error::IntegrationFailure("Krylov stepping did not finish".into()));
        }
        let beta0 = norm(&cur);
        if beta0 == 0.0 {
            return Ok(cur);
        }
        let m_max = KRYLOV_DIM.min(dim);
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m_max + 1);
        basis.push(cur.iter().map(|z| z / beta0).collect());
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        let mut w = vec![C64::new(0.0, 0.0); dim];
        let mut invariant = false;
        for j in 0..m_max {
            matvec(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            axpy(&mut w, -a, &basis[j]);
            if j > 0 {
                axpy(&mut w, -beta[j - 1], &basis[j - 1]);
            }
            // full reorthogonalization keeps the basis clean for stiff spectra
            for b in &basis {
                let p = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= p * bi;
                }
            }
            alpha.push(a);
            let bn = norm(&w);
            beta.push(bn);
            if bn < 1e-13 * beta0.max(1.0) {
                invariant = true;
                break;
            }
            basis.push(w.iter().map(|z| z / bn).collect());
        }
        let m = alpha.len();
        let t = RMat::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let (vals, vecs) = eigh_real(&t);
        let phi = |delta: f64| -> Vec<C64> {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|k| {
                            C64::from_polar(vecs[(i, k)] * vecs[(0, k)], -delta * vals[k])
                        })
                        .sum()
                })
                .collect()
        };
        let remaining = tau.abs() - done;
        let mut delta = remaining;
        let mut y = phi(delta * tau.signum());
        if !invariant {
            loop {
                let err = beta[m - 1] * beta0 * y[m - 1].norm();
                if err <= tol * delta / tau.abs() {
                    break;
                }
                delta *= 0.5;
                if delta < tau.abs() * 1e-12 {
                    return Err(Error::IntegrationFailure(
                        "Krylov step size underflow".into(),
                    ));
                }
                y = phi(delta * tau.signum());
            }
        }
        let mut next = vec![C64::new(0.0, 0.0); dim];
        for (k, yk) in y.iter().enumerate() {
            axpy_c(&mut next, yk * beta0, &basis[k]);
        }
        cur = next;
        done += delta;
    }
    Ok(cur)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], a: f64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

fn axpy_c(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{expm_hermitian, haar_state, random_symmetric, rng_from_seed, CMat};

    #[test]
    fn matches_dense_exponential() {
        let mut rng = rng_from_seed(40);
        let n = 120;
        let a = random_symmetric(n, &mut rng);
        let h = a.to_complex();
        let v = haar_state(n, &mut rng);
        let tau = 7.5;
        let want = expm_hermitian(&h, tau) * &v;
        let got = expmv_lanczos(
            |x, out| {
                let xv = nalgebra::DVector::from_column_slice(x);
                let r = &h * xv;
                out.copy_from_slice(r.as_slice());
            },
            v.as_slice(),
            tau,
            1e-10,
        )
        .unwrap();
        let err = got
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        assert!(err < 1e-9, "err {err}");
    }

    #[test]
    fn invariant_subspace_is_exact() {
        let h = CMat::identity(4, 4) * C64::new(2.0, 0.0);
        let v = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let got = expmv_lanczos(
            |x, out| {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = xi * h[(0, 0)];
                }
            },
            &v,
            1.0,
            1e-12,
        )
        .unwrap();
        assert!((got[0] - C64::from_polar(1.0, -2.0)).norm() < 1e-14);
    }
}
