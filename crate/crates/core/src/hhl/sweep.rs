use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::derive_seed;

use super::instance::random_hhl_instance;
use super::run::{build_hhl_schedule, run_hhl, DeviceConfig, HhlLevel};
use crate::device::total_duration;

/// One random instance of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub e_algorithm: f64,
    pub p_postselect: f64,
    pub schedule_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub mean_e_algorithm: f64,
    pub stderr: f64,
    pub mean_p_postselect: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    /// Register size whose zero bin is excluded when drawing eigenvalues.
    pub rule_m: usize,
    /// Report the compiled device schedule time for each instance.
    pub schedule_time: bool,
    /// Simulate on the device instead of the abstract register.
    pub device: Option<DeviceConfig>,
}

impl SweepOptions {
    pub fn new(m: usize, trials: usize, seed: u64) -> Self {
        Self {
            m,
            trials,
            seed,
            rule_m: m,
            schedule_time: false,
            device: None,
        }
    }
}

/// Seed of trial `trial` at size `n`.
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    derive_seed(master, ((n as u64) << 32) | trial as u64)
}

/// Runs over `trials` random instances for each `n`,
/// evaluated in parallel and returned in `(n, trial)` order.
pub fn sweep_trials(ns: &[usize], opts: &SweepOptions) -> Result<Vec<TrialRecord>> {
    if opts.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let jobs: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..opts.trials).map(move |t| (n, t)))
        .collect();
    jobs.par_iter()
        .map(|&(n, trial)| {
            let inst = random_hhl_instance(n, opts.m, opts.rule_m, trial_seed(opts.seed, n, trial))?;
            let level = opts.device.clone().map_or(HhlLevel::Abstract, HhlLevel::Device);
            let r = run_hhl(&inst, &level)?;
            let schedule_time_s = match r.schedule_time_s {
                Some(t) => Some(t),
                None if opts.schedule_time => {
                    Some(total_duration(&build_hhl_schedule(&inst, &DeviceConfig::default())?))
                }
                None => None,
            };
            Ok(TrialRecord {
                n,
                m: opts.m,
                trial,
                e_algorithm: r.e_algorithm,
                p_postselect: r.p_postselect,
                schedule_time_s,
            })
        })
        .collect()
}

pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

pub fn summarize(records: &[TrialRecord]) -> Vec<SweepRow> {
    let mut ns: Vec<(usize, usize)> = records.iter().map(|r| (r.n, r.m)).collect();
    ns.dedup();
    ns.into_iter()
        .map(|(n, m)| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n && r.m == m).collect();
            let e: Vec<f64> = rs.iter().map(|r| r.e_algorithm).collect();
            let (mean, stderr) = mean_stderr(&e);
            SweepRow {
                n,
                m,
                trials: rs.len(),
                mean_e_algorithm: mean,
                stderr,
                mean_p_postselect: rs.iter().map(|r| r.p_postselect).sum::<f64>() / rs.len() as f64,
            }
        })
        .collect()
}

/// Mean error per `n` for an `m`-qubit register.
pub fn sweep_fig7(ns: &[usize], m: usize, trials: usize, seed: u64) -> Result<Vec<SweepRow>> {
    Ok(summarize(&sweep_trials(ns, &SweepOptions::new(m, trials, seed))?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub n: usize,
    pub trials: usize,
    pub mean_m2: f64,
    pub mean_m3: f64,
    /// Mean of `E(m=2) - E(m=3)` with its standard error.
    pub mean_diff: f64,
    pub stderr_diff: f64,
}

/// `m = 2` against `m = 3` on identical instances (drawn under the `m = 2`
/// zero-bin rule, which also excludes the `m = 3` zero bin).
pub fn paired_m2_m3(n: usize, trials: usize, seed: u64) -> Result<PairedComparison> {
    let run = |m: usize| {
        let opts = SweepOptions {
            rule_m: 2,
            ..SweepOptions::new(m, trials, seed)
        };
        sweep_trials(&[n], &opts)
    };
    let (a, b) = (run(2)?, run(3)?);
    let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.e_algorithm - y.e_algorithm).collect();
    let (mean_diff, stderr_diff) = mean_stderr(&diffs);
    Ok(PairedComparison {
        n,
        trials,
        mean_m2: mean_stderr(&a.iter().map(|r| r.e_algorithm).collect::<Vec<_>>()).0,
        mean_m3: mean_stderr(&b.iter().map(|r| r.e_algorithm).collect::<Vec<_>>()).0,
        mean_diff,
        stderr_diff,
    })
}

fn opt_field(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut s = String::from("n,m,trial,e_algorithm,p_postselect,schedule_time_s\n");
    for r in records {
        s += &format!(
            "{},{},{},{:.12e},{:.12e},{}\n",
            r.n,
            r.m,
            r.trial,
            r.e_algorithm,
            r.p_postselect,
            opt_field(r.schedule_time_s)
        );
    }
    s
}

pub fn rows_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("n,m,trials,mean_e_algorithm,stderr,mean_p_postselect\n");
    for r in rows {
        s += &format!(
            "{},{},{},{:.12e},{:.12e},{:.12e}\n",
            r.n, r.m, r.trials, r.mean_e_algorithm, r.stderr, r.mean_p_postselect
        );
    }
    s
}
