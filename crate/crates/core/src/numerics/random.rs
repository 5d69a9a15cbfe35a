use nalgebra::{DVector, QR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{scale_column, CMat, ComplexUnitary, RMat, RealSymMatrix, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    HaarUnitary,
    SymGenerator,
    SpdSpectrum,
}

#[derive(Clone, Debug)]
pub enum RandomMatrix {
    Unitary(ComplexUnitary),
    Symmetric(RealSymMatrix),
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream seed for `(master, stream)`: splitmix64 finalizer over the pair.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_instance(kind: RandomKind, n: usize, seed: u64) -> Result<RandomMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        RandomKind::HaarUnitary => RandomMatrix::Unitary(haar_unitary(n, &mut rng)),
        RandomKind::SymGenerator => RandomMatrix::Symmetric(random_symmetric(n, &mut rng)),
        RandomKind::SpdSpectrum => RandomMatrix::Symmetric(spd_spectrum(n, &mut rng).0),
    })
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar orthogonal matrix: QR of a Gaussian matrix with `diag(R) > 0`.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    let g = RMat::from_fn(n, n, |_, _| gaussian(rng));
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar unitary: QR of a complex Ginibre matrix with phase-fixed `diag(R)`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexUnitary {
    let g = CMat::from_fn(n, n, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            scale_column(&mut q, j, phase);
        }
    }
    ComplexUnitary::trusted(q)
}

/// Gaussian orthogonal ensemble member `(G + Gᵀ)/2`.
pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealSymMatrix {
    let g = RMat::from_fn(n, n, |_, _| gaussian(rng));
    RealSymMatrix::symmetrized((&g + g.transpose()) * 0.5)
}

/// `A = Q Λ Qᵀ` with `Q` Haar orthogonal and `Λ` i.i.d. uniform on (0, 1).
/// Returns the matrix together with its eigenvalues and eigenvectors.
pub fn spd_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (RealSymMatrix, Vec<f64>, RMat) {
    let q = haar_orthogonal(n, rng);
    let lambda: Vec<f64> = (0..n)
        .map(|_| loop {
            let x: f64 = rng.random();
            if x > 0.0 {
                break x;
            }
        })
        .collect();
    (spectrum_matrix(&q, &lambda), lambda, q)
}

pub(crate) fn spectrum_matrix(q: &RMat, lambda: &[f64]) -> RealSymMatrix {
    let mut left = q.clone();
    for (j, l) in lambda.iter().enumerate() {
        left.column_mut(j).scale_mut(*l);
    }
    RealSymMatrix::symmetrized(left * q.transpose())
}

/// Haar-random unit vector in `C^dim`.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigh_sym, unitarity_deviation};

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            random_instance(RandomKind::HaarUnitary, 0, 1),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn spd_eigenvalues_in_unit_interval() {
        let RandomMatrix::Symmetric(a) = random_instance(RandomKind::SpdSpectrum, 4, 7).unwrap()
        else {
            panic!("expected symmetric");
        };
        for l in eigh_sym(&a).values {
            assert!(l > 0.0 && l < 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let a = random_instance(RandomKind::SymGenerator, 5, 42).unwrap();
        let b = random_instance(RandomKind::SymGenerator, 5, 42).unwrap();
        match (a, b) {
            (RandomMatrix::Symmetric(a), RandomMatrix::Symmetric(b)) => assert_eq!(a, b),
            _ => panic!("expected symmetric"),
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(8);
        let u = haar_unitary(8, &mut rng);
        assert!(unitarity_deviation(u.matrix()) < 1e-12);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(3, 4), derive_seed(3, 4));
    }
}
