use std::f64::consts::PI;
use std::path::Path;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigh_sym, haar_orthogonal, haar_state, rng_from_seed, spectrum_matrix, RealSymMatrix, C64};

/// Linear system `A x = b` with `spec(A) ⊂ (0, 1)`, solved with an `m`-qubit
/// phase register. Phase-estimation control `j` applies `e^{i A t0 2^j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct HhlInstance {
    a: RealSymMatrix,
    b: DVector<C64>,
    m: usize,
    t0: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<[f64; 2]>,
    m: usize,
    #[serde(default = "default_t0")]
    t0: f64,
}

fn default_t0() -> f64 {
    2.0 * PI
}

pub const MAX_PHASE_QUBITS: usize = 10;

impl TryFrom<RawInstance> for HhlInstance {
    type Error = Error;

    fn try_from(r: RawInstance) -> Result<Self> {
        let a = RealSymMatrix::from_rows(&r.a)?;
        let b = DVector::from_iterator(r.b.len(), r.b.iter().map(|z| C64::new(z[0], z[1])));
        HhlInstance::new(a, b, r.m, r.t0)
    }
}

impl From<HhlInstance> for RawInstance {
    fn from(i: HhlInstance) -> Self {
        RawInstance {
            a: i.a.to_rows(),
            b: i.b.iter().map(|z| [z.re, z.im]).collect(),
            m: i.m,
            t0: i.t0,
        }
    }
}

impl HhlInstance {
    pub fn new(a: RealSymMatrix, b: DVector<C64>, m: usize, t0: f64) -> Result<Self> {
        let n = a.dim();
        if n == 0 || b.len() != n {
            return Err(Error::InvalidDimension(format!("A is {n}x{n} but b has length {}", b.len())));
        }
        if !(1..=MAX_PHASE_QUBITS).contains(&m) {
            return Err(Error::InvalidParams(format!("m = {m} outside 1..={MAX_PHASE_QUBITS}")));
        }
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(Error::InvalidParams("t0 must be positive".into()));
        }
        if (b.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("|b| = {} is not 1", b.norm())));
        }
        let eig = eigh_sym(&a);
        if eig.values.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err(Error::InvalidMatrix(format!(
                "eigenvalues {:?} not inside (0, 1)",
                eig.values
            )));
        }
        Ok(Self { a, b, m, t0 })
    }

    pub fn a(&self) -> &RealSymMatrix {
        &self.a
    }

    pub fn b(&self) -> &DVector<C64> {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    /// Normalized `A⁻¹ b`.
    pub fn x_ideal(&self) -> DVector<C64> {
        let eig = eigh_sym(&self.a);
        let q = eig.vectors.map(|x| C64::new(x, 0.0));
        let mut y = q.adjoint() * &self.b;
        for (yi, l) in y.iter_mut().zip(&eig.values) {
            *yi /= *l;
        }
        let x = q * y;
        let norm = x.norm();
        x / C64::new(norm, 0.0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// True when `λ` lands in the `k = 0` phase bin of an `m`-qubit register.
pub fn in_zero_bin(lambda: f64, m: usize) -> bool {
    let n = (1u64 << m) as f64;
    ((lambda * n).round() as u64) % (1u64 << m) == 0
}

/// Random instance: Haar-orthogonal eigenvectors, eigenvalues uniform on
/// (0, 1) redrawn while they fall in the zero bin of a `rule_m`-qubit
/// register, and Haar-random complex `b`.
pub fn random_hhl_instance(n: usize, m: usize, rule_m: usize, seed: u64) -> Result<HhlInstance> {
    if n == 0 || rule_m == 0 || rule_m > MAX_PHASE_QUBITS {
        return Err(Error::InvalidParams("n and m must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let q = haar_orthogonal(n, &mut rng);
    let lambda: Vec<f64> = (0..n)
        .map(|_| loop {
            let x: f64 = rng.random();
            if x > 0.0 && !in_zero_bin(x, rule_m) {
                break x;
            }
        })
        .collect();
    let b = haar_state(n, &mut rng);
    HhlInstance::new(spectrum_matrix(&q, &lambda), b, m, default_t0())
}
