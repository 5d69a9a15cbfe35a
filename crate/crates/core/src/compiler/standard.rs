use serde::{Deserialize, Serialize};

use crate::device::{Coherent, DeviceGraph, Schedule};
use crate::error::{Error, Result};
use crate::numerics::{RMat, RealSymMatrix};
use crate::units::time_for_angle;

/// `A = θK + cI` with `max |K_ij| = 1` and evolution time `t = θ/(2π g_max)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardFormResult {
    pub k: RealSymMatrix,
    pub c: f64,
    pub theta: f64,
    pub t_s: f64,
}

impl StandardFormResult {
    pub fn is_empty(&self) -> bool {
        self.theta == 0.0
    }

    pub fn reconstruct(&self) -> RMat {
        let n = self.k.dim();
        self.k.matrix() * self.theta + RMat::identity(n, n) * self.c
    }
}

pub fn standard_form(a: &RealSymMatrix, gmax_hz: f64) -> StandardFormResult {
    let n = a.dim();
    let diag = a.diagonal();
    let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = if n == 0 { 0.0 } else { 0.5 * (lo + hi) };
    let shifted = a.matrix() - RMat::identity(n, n) * c;
    let theta = shifted.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if theta == 0.0 {
        return StandardFormResult {
            k: RealSymMatrix::zeros(n),
            c,
            theta: 0.0,
            t_s: 0.0,
        };
    }
    StandardFormResult {
        k: RealSymMatrix::symmetrized(shifted / theta),
        c,
        theta,
        t_s: time_for_angle(theta, gmax_hz),
    }
}

/// Sign of the exponent in `e^{±iA}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn check_data_dim(n: usize, graph: &DeviceGraph) -> Result<()> {
    if n != graph.n_data() {
        return Err(Error::InvalidDimension(format!(
            "generator is {n}x{n} but the data partition has {} qubits",
            graph.n_data()
        )));
    }
    Ok(())
}

/// Coherent segment programming `ε₀ + g_max K` on the data partition.
pub(crate) fn program_segment(
    graph: &DeviceGraph,
    k: &RealSymMatrix,
    duration_s: f64,
    couple: bool,
    label: &str,
) -> Result<Coherent> {
    let n = graph.n_total();
    let g = graph.gmax_hz();
    let mut eps = vec![graph.eps0_hz(); n];
    let mut cpl = vec![vec![0.0; n]; n];
    let ids = graph.data_ids();
    for (i, &qi) in ids.iter().enumerate() {
        eps[qi] = graph.eps0_hz() + g * k.matrix()[(i, i)];
        if couple {
            for (j, &qj) in ids.iter().enumerate() {
                if i != j {
                    cpl[qi][qj] = g * k.matrix()[(i, j)];
                }
            }
        }
    }
    Coherent::new(graph, duration_s, eps, cpl, Vec::new(), label)
}

/// One coherent step implementing `e^{sign·iA}` on the SES of the data
/// partition, up to a global phase. Ancillas stay parked at `ε₀` and
/// decoupled. A zero generator yields an empty schedule.
pub fn schedule_sym_unitary(a: &RealSymMatrix, sign: Sign, graph: &DeviceGraph) -> Result<Schedule> {
    check_data_dim(a.dim(), graph)?;
    let sf = standard_form(&a.scaled(-sign.value()), graph.gmax_hz());
    let mut s = Schedule::new(graph.clone());
    if !sf.is_empty() {
        let label = match sign {
            Sign::Plus => "exp(+iA)",
            Sign::Minus => "exp(-iA)",
        };
        s.push_coherent(program_segment(graph, &sf.k, sf.t_s, true, label)?);
    }
    Ok(s)
}

/// Uncoupled step with `ε_i = ε₀ + g_max K_ii`, `K = (D - c)/θ_D`, lasting
/// `θ_D/(2·2π g_max)`: SES states acquire `e^{-iD/2}` relative to each other.
pub fn schedule_diagonal_half(d: &[f64], graph: &DeviceGraph) -> Result<Schedule> {
    check_data_dim(d.len(), graph)?;
    let sf = standard_form(&RealSymMatrix::from_diagonal(d)?, graph.gmax_hz());
    let mut s = Schedule::new(graph.clone());
    if !sf.is_empty() {
        s.push_coherent(program_segment(graph, &sf.k, 0.5 * sf.t_s, false, "exp(-iD/2)")?);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::total_duration;
    use crate::numerics::{max_abs_distance, random_symmetric, rng_from_seed, C64};
    use std::f64::consts::PI;

    #[test]
    fn zero_generator_is_empty() {
        let sf = standard_form(&RealSymMatrix::zeros(3), 50e6);
        assert!(sf.is_empty());
        assert_eq!(sf.t_s, 0.0);
    }

    #[test]
    fn diag_plus_minus_one() {
        let sf = standard_form(&RealSymMatrix::from_diagonal(&[1.0, -1.0]).unwrap(), 50e6);
        assert_eq!(sf.c, 0.0);
        assert_eq!(sf.theta, 1.0);
        assert_eq!(sf.k.diagonal(), vec![1.0, -1.0]);
        assert!((sf.t_s - 3.183098861837907e-9).abs() < 1e-21);
    }

    #[test]
    fn exponential_identity() {
        let mut rng = rng_from_seed(12);
        let a = random_symmetric(6, &mut rng);
        let sf = standard_form(&a, 50e6);
        assert!((sf.reconstruct() - a.matrix()).amax() < 1e-12);
        assert!(sf.k.max_abs() <= 1.0);
        let lhs = sf.k.scaled(sf.theta).exp_i(-1.0) * C64::from_polar(1.0, -sf.c);
        assert!(max_abs_distance(&lhs, &a.exp_i(-1.0)) < 1e-10);
    }

    #[test]
    fn sym_unitary_segment_layout() {
        let g = DeviceGraph::with_ancillas(2, 1, 5.5e9, 50e6).unwrap();
        let a = RealSymMatrix::from_rows(&[vec![0.0, PI / 4.0], vec![PI / 4.0, 0.0]]).unwrap();
        let s = schedule_sym_unitary(&a, Sign::Plus, &g).unwrap();
        let c = s.coherent_segments().next().unwrap();
        assert_eq!(c.epsilons_hz, vec![5.5e9; 3]);
        assert!((c.couplings_hz[0][1] + 50e6).abs() < 1e-6);
        assert_eq!(c.couplings_hz[0][2], 0.0);
        assert!((total_duration(&s) - (PI / 4.0) / (2.0 * PI * 50e6)).abs() < 1e-20);
    }

    #[test]
    fn diagonal_half_timing() {
        let g = DeviceGraph::with_ancillas(2, 1, 5.5e9, 50e6).unwrap();
        assert!(schedule_diagonal_half(&[0.3, 0.3], &g).unwrap().is_empty());
        let s = schedule_diagonal_half(&[0.0, PI], &g).unwrap();
        let want = PI / 4.0 / (2.0 * PI * 50e6);
        assert!((total_duration(&s) - want).abs() < 1e-20);
        let c = s.coherent_segments().next().unwrap();
        assert!(c.couplings_hz.iter().flatten().all(|x| *x == 0.0));
        assert_eq!(c.epsilons_hz[0], 5.5e9 - 50e6);
        assert_eq!(c.epsilons_hz[1], 5.5e9 + 50e6);
    }

    #[test]
    fn dimension_mismatch() {
        let g = DeviceGraph::with_ancillas(2, 1, 5.5e9, 50e6).unwrap();
        assert!(matches!(
            schedule_sym_unitary(&RealSymMatrix::identity(3), Sign::Plus, &g),
            Err(Error::InvalidDimension(_))
        ));
    }
}
