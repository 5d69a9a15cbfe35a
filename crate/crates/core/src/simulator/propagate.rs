//! Propagators for single coherent segments.

use crate::device::Coherent;
use crate::error::{Error, Result};
use crate::numerics::{eigh_real, CMat, RMat, C64};

use super::gates::apply_z_phases;
use super::lanczos::expmv_lanczos;
use super::FullState;

use std::f64::consts::PI;

/// Qubits connected through nonzero couplings, each list sorted.
pub(crate) fn components(couplings: &[Vec<f64>], extra_links: &[usize]) -> Vec<Vec<usize>> {
    let n = couplings.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let union = |a: usize, b: usize, p: &mut Vec<usize>| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            if couplings[i][j] != 0.0 {
                union(i, j, &mut parent);
            }
        }
    }
    for w in extra_links.windows(2) {
        union(w[0], w[1], &mut parent);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for q in 0..n {
        let r = find(&mut parent, q);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(q);
    }
    groups
}

/// Full-register offset of a local state of the component `qs`.
fn offset(local: usize, qs: &[usize]) -> usize {
    qs.iter()
        .enumerate()
        .filter(|(b, _)| local >> b & 1 == 1)
        .map(|(_, q)| 1 << q)
        .sum()
}

struct ComponentHamiltonian<'a> {
    qs: &'a [usize],
    eps: Vec<f64>,
    pairs: Vec<(usize, usize, f64)>,
    counter_rotating: bool,
}

impl<'a> ComponentHamiltonian<'a> {
    fn new(seg: &Coherent, qs: &'a [usize], counter_rotating: bool) -> Self {
        let eps = qs.iter().map(|&q| seg.epsilons_hz[q]).collect();
        let mut pairs = Vec::new();
        for a in 0..qs.len() {
            for b in (a + 1)..qs.len() {
                let g = seg.couplings_hz[qs[a]][qs[b]];
                if g != 0.0 {
                    pairs.push((a, b, g));
                }
            }
        }
        Self {
            qs,
            eps,
            pairs,
            counter_rotating,
        }
    }

    fn diag(&self, local: usize) -> f64 {
        (0..self.qs.len())
            .filter(|b| local >> b & 1 == 1)
            .map(|b| self.eps[b])
            .sum()
    }

    /// Neighbours `(local', g)` reached by one coupling term.
    fn hops(&self, local: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.pairs.iter().filter_map(move |&(a, b, g)| {
            let differ = (local >> a & 1) != (local >> b & 1);
            (self.counter_rotating || differ).then_some((local ^ (1 << a) ^ (1 << b), g))
        })
    }

    fn sector_key(&self, local: usize) -> u32 {
        if self.counter_rotating {
            local.count_ones() & 1
        } else {
            local.count_ones()
        }
    }
}

/// Applies `e^{-i2πHt}` of a drive-free segment. Uncoupled qubits pick up a
/// phase; each coupled component is split into conserved sectors (parity,
/// or excitation number without counter-rotating terms) and exponentiated
/// densely up to `dense_limit`, otherwise by Krylov propagation.
pub(crate) fn apply_static(
    state: &mut FullState,
    seg: &Coherent,
    counter_rotating: bool,
    dense_limit: usize,
    krylov_tol: f64,
) -> Result<()> {
    let t = seg.duration_s;
    if t == 0.0 {
        return Ok(());
    }
    let n = state.n_qubits();
    let mut phases = vec![0.0; n];
    for comp in components(&seg.couplings_hz, &[]) {
        if comp.len() == 1 {
            phases[comp[0]] = -2.0 * PI * seg.epsilons_hz[comp[0]] * t;
            continue;
        }
        let h = ComponentHamiltonian::new(seg, &comp, counter_rotating);
        let k = comp.len();
        let mut sectors: Vec<Vec<usize>> = Vec::new();
        let mut keys: Vec<u32> = Vec::new();
        for local in 0..1usize << k {
            let key = h.sector_key(local);
            match keys.iter().position(|x| *x == key) {
                Some(p) => sectors[p].push(local),
                None => {
                    keys.push(key);
                    sectors.push(vec![local]);
                }
            }
        }
        if sectors.iter().map(Vec::len).max().unwrap_or(0) <= dense_limit {
            for sec in &sectors {
                apply_dense_sector(state, &h, sec, t);
            }
        } else {
            apply_krylov(state, &h, t, krylov_tol)?;
        }
    }
    apply_z_phases(state, &phases)
}

fn apply_dense_sector(state: &mut FullState, h: &ComponentHamiltonian, sector: &[usize], t: f64) {
    let m = sector.len();
    let mut pos = std::collections::HashMap::with_capacity(m);
    for (p, &l) in sector.iter().enumerate() {
        pos.insert(l, p);
    }
    let mut hm = RMat::zeros(m, m);
    for (p, &l) in sector.iter().enumerate() {
        hm[(p, p)] += h.diag(l);
        for (l2, g) in h.hops(l) {
            hm[(pos[&l2], p)] += g;
        }
    }
    let u = if m == 1 {
        CMat::from_element(1, 1, C64::from_polar(1.0, -2.0 * PI * hm[(0, 0)] * t))
    } else {
        let (vals, vecs) = eigh_real(&hm);
        let v = vecs.map(|x| C64::new(x, 0.0));
        let mut left = v.clone();
        for (j, lam) in vals.iter().enumerate() {
            let f = C64::from_polar(1.0, -2.0 * PI * lam * t);
            for x in left.column_mut(j).iter_mut() {
                *x *= f;
            }
        }
        left * v.transpose()
    };
    let offs: Vec<usize> = sector.iter().map(|&l| offset(l, h.qs)).collect();
    let mask: usize = h.qs.iter().map(|q| 1 << q).sum();
    let amps = state.amplitudes_mut();
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (b, o) in buf.iter_mut().zip(&offs) {
            *b = amps[base + o];
        }
        if buf.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        for (i, o) in offs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, b) in buf.iter().enumerate() {
                acc += u[(i, j)] * b;
            }
            amps[base + o] = acc;
        }
    }
}

fn apply_krylov(state: &mut FullState, h: &ComponentHamiltonian, t: f64, tol: f64) -> Result<()> {
    let qs = h.qs;
    let k = qs.len();
    let to_local = |s: usize| -> usize {
        qs.iter()
            .enumerate()
            .filter(|(_, q)| s >> **q & 1 == 1)
            .map(|(b, _)| 1 << b)
            .sum()
    };
    let mask: usize = qs.iter().map(|q| 1 << q).sum();
    let local_offsets: Vec<usize> = (0..1usize << k).map(|l| offset(l, qs)).collect();
    let diag: Vec<f64> = (0..1usize << k).map(|l| h.diag(l)).collect();
    let matvec = |x: &[C64], out: &mut [C64]| {
        for (s, o) in out.iter_mut().enumerate() {
            let l = to_local(s);
            let base = s & !mask;
            let mut acc = x[s] * diag[l];
            for (l2, g) in h.hops(l) {
                acc += x[base + local_offsets[l2]] * g;
            }
            *o = acc;
        }
    };
    let out = expmv_lanczos(matvec, state.amplitudes(), 2.0 * PI * t, tol)?;
    *state.amplitudes_mut() = out;
    Ok(())
}

/// Multi-level model of a set of qubits for driven evolution.
pub(crate) struct PulseSystem {
    pub levels: usize,
    pub level_energies: Vec<Vec<f64>>,
    pub couplings: Vec<(usize, usize, f64)>,
    pub drives: Vec<(usize, f64, f64)>,
    pub drive_qubit_only: bool,
}

impl PulseSystem {
    fn dim(&self) -> usize {
        self.levels.pow(self.level_energies.len() as u32)
    }

    fn digit(&self, s: usize, q: usize) -> usize {
        (s / self.levels.pow(q as u32)) % self.levels
    }

    fn static_h(&self) -> RMat {
        let d = self.dim();
        let mut h = RMat::zeros(d, d);
        for s in 0..d {
            h[(s, s)] = (0..self.level_energies.len())
                .map(|q| self.level_energies[q][self.digit(s, q)])
                .sum();
        }
        for &(a, b, g) in &self.couplings {
            h += (self.x_op(a, false) * self.x_op(b, false)) * g;
        }
        h
    }

    /// Matrix elements `(row, col, value)` of `X` on qubit `q`.
    fn ladder(&self, q: usize, drive: bool) -> Vec<(usize, usize, f64)> {
        let d = self.dim();
        let stride = self.levels.pow(q as u32);
        let mut out = Vec::new();
        for s in 0..d {
            let l = self.digit(s, q);
            if l + 1 < self.levels {
                if drive && self.drive_qubit_only && l >= 1 {
                    continue;
                }
                let v = ((l + 1) as f64).sqrt();
                out.push((s + stride, s, v));
                out.push((s, s + stride, v));
            }
        }
        out
    }

    fn x_op(&self, q: usize, drive: bool) -> RMat {
        let d = self.dim();
        let mut m = RMat::zeros(d, d);
        for (r, c, v) in self.ladder(q, drive) {
            m[(r, c)] = v;
        }
        m
    }

    fn step(&self, h0: &RMat, xd: &[RMat], t_mid: f64, dt: f64) -> CMat {
        let mut h = h0.clone();
        for (x, &(_, amp, f)) in xd.iter().zip(&self.drives) {
            h += x * (amp * (2.0 * PI * f * t_mid).cos());
        }
        let (vals, vecs) = eigh_real(&h);
        let v = vecs.map(|x| C64::new(x, 0.0));
        let mut left = v.clone();
        for (j, lam) in vals.iter().enumerate() {
            let f = C64::from_polar(1.0, -2.0 * PI * lam * dt);
            for x in left.column_mut(j).iter_mut() {
                *x *= f;
            }
        }
        left * v.transpose()
    }

    /// Exponential-midpoint propagator over `[0, duration]` with
    /// `steps_per_period` steps per carrier period. When the duration holds
    /// an integer number of periods of a common carrier, one period is
    /// integrated and raised to that power.
    pub fn propagate(&self, duration: f64, steps_per_period: usize) -> Result<CMat> {
        let d = self.dim();
        let h0 = self.static_h();
        if self.drives.is_empty() {
            return Ok(self.step(&h0, &[], 0.0, duration));
        }
        let xd: Vec<RMat> = self.drives.iter().map(|&(q, _, _)| self.x_op(q, true)).collect();
        let f = self.drives[0].2;
        let common = self.drives.iter().all(|dr| dr.2 == f);
        let periods = duration * f;
        let whole = periods.round();
        if common && f > 0.0 && whole >= 1.0 && (periods - whole).abs() < 1e-9 * periods {
            let period = 1.0 / f;
            let dt = period / steps_per_period as f64;
            let mut p = CMat::identity(d, d);
            for k in 0..steps_per_period {
                p = self.step(&h0, &xd, (k as f64 + 0.5) * dt, dt) * p;
            }
            return Ok(matrix_power(p, whole as u64));
        }
        let f_max = self.drives.iter().map(|dr| dr.2.abs()).fold(0.0, f64::max);
        let steps = ((duration * f_max).ceil().max(1.0) as usize) * steps_per_period;
        let dt = duration / steps as f64;
        let mut p = CMat::identity(d, d);
        for k in 0..steps {
            p = self.step(&h0, &xd, (k as f64 + 0.5) * dt, dt) * p;
        }
        Ok(p)
    }
}

pub(crate) fn matrix_power(mut base: CMat, mut e: u64) -> CMat {
    let d = base.nrows();
    let mut acc = CMat::identity(d, d);
    while e > 0 {
        if e & 1 == 1 {
            acc = &base * &acc;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub(crate) fn too_large(what: &str, dim: usize) -> Error {
    Error::InvalidDimension(format!("{what} of dimension {dim} is too large"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{Coherent, DeviceGraph};
    use crate::numerics::{expm_hermitian, haar_state, rng_from_seed};
    use rand::Rng;

    fn random_segment(g: &DeviceGraph, rng: &mut impl Rng, t: f64) -> Coherent {
        let n = g.n_total();
        let eps: Vec<f64> = (0..n).map(|_| g.eps0_hz() + rng.random_range(-5e7..5e7)).collect();
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if (i + j) % 3 != 0 {
                    let v = rng.random_range(-5e7..5e7);
                    c[i][j] = v;
                    c[j][i] = v;
                }
            }
        }
        Coherent::new(g, t, eps, c, vec![], "").unwrap()
    }

    #[test]
    fn sector_and_krylov_paths_match_dense() {
        let g = DeviceGraph::with_ancillas(5, 0, 5.5e9, 50e6).unwrap();
        let mut rng = rng_from_seed(41);
        let seg = random_segment(&g, &mut rng, 2e-9);
        for cr in [true, false] {
            let psi = haar_state(32, &mut rng);
            let start = FullState::new(5, 2, psi.iter().copied().collect()).unwrap();
            let mut h = crate::device::hamiltonian_real(&seg, &g).unwrap();
            if !cr {
                for s in 0..32usize {
                    for s2 in 0..32usize {
                        let flips = s ^ s2;
                        if flips.count_ones() == 2 && (s & flips).count_ones() != 1 {
                            h[(s2, s)] = 0.0;
                        }
                    }
                }
            }
            let want = expm_hermitian(&h.map(|x| C64::new(x, 0.0)), 2.0 * PI * 2e-9) * &psi;
            for limit in [1024, 1] {
                let mut s = start.clone();
                apply_static(&mut s, &seg, cr, limit, 1e-11).unwrap();
                let err = s
                    .amplitudes()
                    .iter()
                    .zip(want.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0_f64, f64::max);
                assert!(err < 1e-8, "cr={cr} limit={limit} err={err}");
            }
        }
    }

    #[test]
    fn components_found() {
        let mut c = vec![vec![0.0; 4]; 4];
        c[0][2] = 1.0;
        c[2][0] = 1.0;
        assert_eq!(components(&c, &[]), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(components(&c, &[1, 3]), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn undriven_pulse_system_is_exact() {
        let sys = PulseSystem {
            levels: 3,
            level_energies: vec![vec![0.0, 5e9, 9.7e9]],
            couplings: vec![],
            drives: vec![],
            drive_qubit_only: false,
        };
        let u = sys.propagate(1e-9, 4).unwrap();
        assert!((u[(1, 1)] - C64::from_polar(1.0, -2.0 * PI * 5.0)).norm() < 1e-12);
        assert!((u[(2, 2)] - C64::from_polar(1.0, -2.0 * PI * 9.7)).norm() < 1e-12);
    }

    #[test]
    fn power_by_squaring() {
        let mut rng = rng_from_seed(2);
        let u = crate::numerics::haar_unitary(3, &mut rng).into_matrix();
        let mut want = CMat::identity(3, 3);
        for _ in 0..13 {
            want = &u * want;
        }
        assert!((matrix_power(u, 13) - want).iter().all(|z| z.norm() < 1e-12));
    }
}
