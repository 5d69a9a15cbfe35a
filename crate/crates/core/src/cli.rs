//! Command-line front end. The `ses-forge` binary forwards its arguments to
//! [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::compiler::{schedule_sym_unitary, standard_form, CnotMode, EntanglerParams, Sign};
use crate::device::{serde_cmat, total_duration, DeviceGraph};
use crate::error::{Error, Result};
use crate::hhl::{
    rows_csv, run_hhl, summarize, sweep_trials, trials_csv, DeviceConfig, HhlInstance, HhlLevel, SweepOptions,
    TrialRecord,
};
use crate::numerics::{aba_decompose, derive_seed, haar_state, haar_unitary, rng_from_seed, ComplexUnitary, RealSymMatrix};
use crate::simulator::{
    entangler_gate_error, ordering_flags, run_bench, run_protocol_check, BenchRow, DriveCoupling, ErrorMode,
    EvolveOptions, GateErrorReport, Level, QutritModel, BENCH_ROWS,
};
use crate::units::{DEFAULT_EPS0_HZ, DEFAULT_GMAX_HZ};

pub const THREADS_ENV: &str = "SES_FORGE_THREADS";
pub const ABA_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "ses-forge", version, about = "SES schedule compiler and simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Max ABA reconstruction residual over random unitaries or one input file.
    AbaCheck(AbaCheckArgs),
    /// Standard-form program for `e^{-iA}` from a generator file.
    Compile(CompileArgs),
    /// Controlled-unitary protocol fidelities.
    CuVerify(CuVerifyArgs),
    /// Multi-target CNOT gate errors.
    CnotBench(CnotBenchArgs),
    /// Matrix inversion: one instance file or a random sweep.
    Hhl(HhlArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Abstract,
    Device,
    Qutrit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DriveArg {
    Qubit,
    Transmon,
}

#[derive(Debug, Clone, Args)]
pub struct Physical {
    #[arg(long = "gmax-hz", default_value_t = DEFAULT_GMAX_HZ)]
    pub gmax_hz: f64,
    #[arg(long = "eps0-hz", default_value_t = DEFAULT_EPS0_HZ)]
    pub eps0_hz: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct AbaCheckArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Unitary as a JSON matrix of `[re, im]` pairs; replaces random trials.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    /// Real symmetric generator as a JSON array of rows.
    pub generator: PathBuf,
    #[command(flatten)]
    pub physical: Physical,
    /// Ancilla qubits added to the device graph.
    #[arg(long, default_value_t = 0)]
    pub ancillas: usize,
    /// Schedule destination (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CuVerifyArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = LevelArg::Abstract)]
    pub level: LevelArg,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop counter-rotating terms in device runs.
    #[arg(long)]
    pub no_counter_rotating: bool,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CnotBenchArgs {
    /// Single row instead of the built-in benchmark set.
    #[arg(long, requires_all = ["eta_hz", "tgate_ns"])]
    pub n: Option<usize>,
    #[arg(long = "eta-hz", requires = "n")]
    pub eta_hz: Option<f64>,
    #[arg(long = "tgate-ns", requires = "n")]
    pub tgate_ns: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub lb: u64,
    #[arg(long = "eps0-hz", default_value_t = DEFAULT_EPS0_HZ)]
    pub eps0_hz: f64,
    /// `qutrit` (three levels) or `device` (two-level truncation).
    #[arg(long, value_enum, default_value_t = LevelArg::Qutrit)]
    pub level: LevelArg,
    #[arg(long, value_enum, default_value_t = DriveArg::Qubit)]
    pub drive: DriveArg,
    /// Haar-sampled averaging with this many states instead of the closed form.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct HhlArgs {
    /// Instance JSON; when absent a random sweep runs.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sizes: `4`, `2,3,4` or `2..10` (inclusive).
    #[arg(long, default_value = "2..10")]
    pub n: String,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Register size whose zero phase bin is excluded when sampling (defaults to `m`).
    #[arg(long)]
    pub rule_m: Option<usize>,
    #[arg(long, value_enum, default_value_t = LevelArg::Abstract)]
    pub level: LevelArg,
    /// Report compiled device schedule time in abstract sweeps.
    #[arg(long)]
    pub schedule_time: bool,
    #[arg(long)]
    pub no_counter_rotating: bool,
    /// Per-size summary rows instead of per-trial rows.
    #[arg(long)]
    pub summary: bool,
    #[command(flatten)]
    pub physical: Physical,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a pool may already exist when embedded; the cap is best effort then
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::AbaCheck(a) => aba_check(a),
        Command::Compile(a) => compile(a),
        Command::CuVerify(a) => cu_verify(a),
        Command::CnotBench(a) => cnot_bench(a),
        Command::Hhl(a) => hhl(a),
    }
}

fn emit(out: &Output, csv: &str, json: &impl Serialize) -> Result<()> {
    let text = match out.format {
        Format::Csv => csv.to_string(),
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
    };
    match &out.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive")))
    }
}

#[derive(Serialize)]
struct AbaReport {
    n: usize,
    trials: usize,
    max_residual: f64,
    mean_residual: f64,
}

fn aba_check(a: &AbaCheckArgs) -> Result<()> {
    let residuals: Vec<f64> = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)?;
            let m = serde_cmat::from_rows(&rows).map_err(Error::InvalidInput)?;
            if m.nrows() != m.ncols() || m.nrows() == 0 {
                return Err(Error::InvalidMatrix("unitary must be square and nonempty".into()));
            }
            vec![aba_decompose(&ComplexUnitary::new(m)?)?.residual]
        }
        None => {
            if a.n == 0 || a.trials == 0 {
                return Err(Error::InvalidParams("n and trials must be positive".into()));
            }
            (0..a.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = rng_from_seed(derive_seed(a.seed, t as u64));
                    aba_decompose(&haar_unitary(a.n, &mut rng)).map(|d| d.residual)
                })
                .collect::<Result<_>>()?
        }
    };
    let n = match &a.input {
        Some(_) => 0,
        None => a.n,
    };
    let report = AbaReport {
        n,
        trials: residuals.len(),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        mean_residual: residuals.iter().sum::<f64>() / residuals.len() as f64,
    };
    let csv = format!(
        "n,trials,max_residual,mean_residual\n{},{},{:.6e},{:.6e}\n",
        report.n, report.trials, report.max_residual, report.mean_residual
    );
    emit(&a.output, &csv, &report)?;
    if report.max_residual > ABA_TOL {
        return Err(Error::NumericalFailure(format!(
            "max residual {:.3e} exceeds {ABA_TOL:e}",
            report.max_residual
        )));
    }
    Ok(())
}

fn compile(a: &CompileArgs) -> Result<()> {
    positive("gmax-hz", a.physical.gmax_hz)?;
    positive("eps0-hz", a.physical.eps0_hz)?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(&a.generator)?)?;
    let g = RealSymMatrix::from_rows(&rows)?;
    let graph = DeviceGraph::with_ancillas(g.dim(), a.ancillas, a.physical.eps0_hz, a.physical.gmax_hz)?;
    let sf = standard_form(&g, a.physical.gmax_hz);
    let schedule = schedule_sym_unitary(&g, Sign::Minus, &graph)?;
    let summary = format!(
        "theta={:.9} c={:.9} t_ns={:.6} segments={}",
        sf.theta,
        sf.c,
        sf.t_s * 1e9,
        schedule.len()
    );
    match &a.out {
        Some(p) => {
            schedule.write(p)?;
            println!("{summary}");
        }
        None => {
            println!("{}", schedule.to_json()?);
            eprintln!("{summary}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CuRow {
    n: usize,
    level: &'static str,
    counter_rotating: bool,
    trial: usize,
    fidelity: f64,
}

fn cu_verify(a: &CuVerifyArgs) -> Result<()> {
    positive("gmax-hz", a.physical.gmax_hz)?;
    positive("eps0-hz", a.physical.eps0_hz)?;
    if a.n == 0 || a.trials == 0 {
        return Err(Error::InvalidParams("n and trials must be positive".into()));
    }
    let level = match a.level {
        LevelArg::Abstract => Level::Abstract,
        LevelArg::Device => Level::TwoLevel,
        LevelArg::Qutrit => {
            return Err(Error::InvalidParams("cu-verify runs at abstract or device level".into()))
        }
    };
    let opts = EvolveOptions {
        counter_rotating: !a.no_counter_rotating,
        ..EvolveOptions::default()
    };
    let graph = DeviceGraph::with_ancillas(a.n, 1, a.physical.eps0_hz, a.physical.gmax_hz)?;
    let fids: Vec<f64> = (0..a.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(derive_seed(a.seed, t as u64));
            let u = haar_unitary(a.n, &mut rng);
            let psi = haar_state(a.n, &mut rng);
            let ab = haar_state(2, &mut rng);
            run_protocol_check(&u, &psi, ab[0], ab[1], &graph, level, &opts)
        })
        .collect::<Result<_>>()?;
    let name = match level {
        Level::Abstract => "abstract",
        Level::TwoLevel => "device",
    };
    let rows: Vec<CuRow> = fids
        .iter()
        .enumerate()
        .map(|(trial, &fidelity)| CuRow {
            n: a.n,
            level: name,
            counter_rotating: opts.counter_rotating,
            trial,
            fidelity,
        })
        .collect();
    let mut csv = String::from("n,level,counter_rotating,trial,fidelity\n");
    for r in &rows {
        csv += &format!("{},{},{},{},{:.15}\n", r.n, r.level, r.counter_rotating, r.trial, r.fidelity);
    }
    emit(&a.output, &csv, &rows)?;
    eprintln!("min fidelity {:.12}", fids.iter().copied().fold(1.0, f64::min));
    Ok(())
}

#[derive(Serialize)]
struct BenchOutput<'a> {
    rows: &'a [GateErrorReport],
    reference_e_gate: Vec<Option<f64>>,
    orderings: crate::simulator::OrderingFlags,
}

fn cnot_bench(a: &CnotBenchArgs) -> Result<()> {
    positive("eps0-hz", a.eps0_hz)?;
    let rows: Vec<BenchRow> = match (a.n, a.eta_hz, a.tgate_ns) {
        (Some(n), Some(eta), Some(t)) => vec![BenchRow {
            n,
            eta_hz: eta,
            t_gate_s: t * 1e-9,
            l_b: a.lb,
            reference_e_gate: f64::NAN,
        }],
        _ => BENCH_ROWS.to_vec(),
    };
    let mode = match a.trials {
        Some(samples) => ErrorMode::MonteCarlo { samples, seed: a.seed },
        None => ErrorMode::SubspaceAverage,
    };
    let drive = match a.drive {
        DriveArg::Qubit => DriveCoupling::QubitTransition,
        DriveArg::Transmon => DriveCoupling::Transmon,
    };
    let reports = match a.level {
        LevelArg::Qutrit => run_bench(&rows, a.eps0_hz, drive, &mode)?,
        LevelArg::Device => rows
            .par_iter()
            .map(|r| {
                let p = EntanglerParams::new(r.n, a.eps0_hz, r.t_gate_s, r.l_b, r.eta_hz)?;
                entangler_gate_error(&p, &QutritModel::two_level(), &mode)
            })
            .collect::<Result<_>>()?,
        LevelArg::Abstract => {
            return Err(Error::InvalidParams("cnot-bench runs at qutrit or device level".into()))
        }
    };
    let mut csv = String::from("n,eta_mhz,tgate_ns,omega_mhz,g_mhz,e_gate\n");
    for r in &reports {
        csv += &format!(
            "{},{:.3},{:.3},{:.6},{:.6},{:.8}\n",
            r.n,
            r.eta_hz / 1e6,
            r.t_gate_s * 1e9,
            r.omega_hz / 1e6,
            r.g_hz / 1e6,
            r.e_gate
        );
    }
    let flags = ordering_flags(&reports);
    let out = BenchOutput {
        rows: &reports,
        reference_e_gate: rows
            .iter()
            .map(|r| Some(r.reference_e_gate).filter(|x| x.is_finite()))
            .collect(),
        orderings: flags,
    };
    emit(&a.output, &csv, &out)?;
    if flags.comparisons > 0 {
        eprintln!(
            "orderings: eta {} t_gate {} n {}",
            flags.decreases_with_eta, flags.decreases_with_t_gate, flags.increases_with_n
        );
    }
    Ok(())
}

/// `"4"`, `"2,3,4"` or `"2..10"` (inclusive).
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("cannot parse sizes {s:?}"));
    let ns: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(bad());
    }
    Ok(ns)
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    rows: Vec<crate::hhl::SweepRow>,
    trials: &'a [TrialRecord],
}

fn hhl(a: &HhlArgs) -> Result<()> {
    positive("gmax-hz", a.physical.gmax_hz)?;
    positive("eps0-hz", a.physical.eps0_hz)?;
    let device = match a.level {
        LevelArg::Abstract => None,
        LevelArg::Device => Some(DeviceConfig {
            eps0_hz: a.physical.eps0_hz,
            gmax_hz: a.physical.gmax_hz,
            evolve: EvolveOptions {
                counter_rotating: !a.no_counter_rotating,
                ..EvolveOptions::default()
            },
            cnot: CnotMode::Ideal,
        }),
        LevelArg::Qutrit => return Err(Error::InvalidParams("hhl runs at abstract or device level".into())),
    };
    if let Some(path) = &a.input {
        let inst = HhlInstance::read(path)?;
        let level = device.map_or(HhlLevel::Abstract, HhlLevel::Device);
        let mut r = run_hhl(&inst, &level)?;
        if a.schedule_time && r.schedule_time_s.is_none() {
            r.schedule_time_s = Some(total_duration(&crate::hhl::build_hhl_schedule(
                &inst,
                &DeviceConfig {
                    eps0_hz: a.physical.eps0_hz,
                    gmax_hz: a.physical.gmax_hz,
                    ..DeviceConfig::default()
                },
            )?));
        }
        let rec = TrialRecord {
            n: inst.n(),
            m: inst.m(),
            trial: 0,
            e_algorithm: r.e_algorithm,
            p_postselect: r.p_postselect,
            schedule_time_s: r.schedule_time_s,
        };
        return emit(&a.output, &trials_csv(&[rec]), &r);
    }
    let ns = parse_sizes(&a.n)?;
    let opts = SweepOptions {
        m: a.m,
        trials: a.trials,
        seed: a.seed,
        rule_m: a.rule_m.unwrap_or(a.m),
        schedule_time: a.schedule_time,
        device,
    };
    let records = sweep_trials(&ns, &opts)?;
    let rows = summarize(&records);
    let csv = if a.summary { rows_csv(&rows) } else { trials_csv(&records) };
    for r in &rows {
        eprintln!(
            "n={} m={} mean_e={:.5} stderr={:.5} mean_p={:.4}",
            r.n, r.m, r.mean_e_algorithm, r.stderr, r.mean_p_postselect
        );
    }
    emit(&a.output, &csv, &SweepOutput { rows, trials: &records })
}
