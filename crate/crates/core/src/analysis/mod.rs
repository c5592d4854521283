//! Monte-Carlo estimators over independent realizations.
//!
//! Every realization is addressed by `(seed, run_index)`; results are
//! collected into index order before any reduction, so means and standard
//! errors are bit-identical for any thread count.

use rayon::prelude::*;

use crate::epidemic::{run_realization, EpidemicConfig, Policy};
use crate::rng::{derive_seed, tag};
use crate::{Error, Result};

/// Mean and standard error (unbiased sample deviation over `√n`).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct R0Estimate {
    pub policy: Policy,
    pub p: f64,
    pub tau: u32,
    pub runs: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
}

fn check_runs(runs: usize) -> Result<()> {
    if runs == 0 {
        return Err(Error::InvalidConfig("runs must be >= 1".into()));
    }
    Ok(())
}

fn first_generation(config: &EpidemicConfig, run: usize) -> Result<f64> {
    let mut c = config.clone();
    c.run_index = run as u64;
    Ok(run_realization(&c)?.first_generation_infections as f64)
}

/// Averages first-generation infections over `runs` realizations of
/// `config`, using `config.seed` as the master seed.
pub fn estimate_r0(config: &EpidemicConfig, runs: usize) -> Result<R0Estimate> {
    check_runs(runs)?;
    config.validate()?;
    let counts = (0..runs)
        .into_par_iter()
        .map(|r| first_generation(config, r))
        .collect::<Result<Vec<_>>>()?;
    let (mean, stderr) = mean_stderr(&counts);
    Ok(R0Estimate {
        policy: config.policy,
        p: config.p,
        tau: config.tau,
        runs,
        seed: config.seed,
        mean,
        stderr,
    })
}

/// `p · τ`, the estimate that ignores revisits.
pub fn naive_r0(p: f64, tau: u32) -> f64 {
    p * tau as f64
}

/// Cells of an R₀ sweep, ordered τ-major then by `p` in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct R0Table {
    pub p_values: Vec<f64>,
    pub tau_values: Vec<u32>,
    pub cells: Vec<R0Estimate>,
}

impl R0Table {
    pub fn get(&self, p: f64, tau: u32) -> Option<&R0Estimate> {
        self.cells.iter().find(|c| c.p == p && c.tau == tau)
    }

    pub fn policy(&self) -> Option<Policy> {
        self.cells.first().map(|c| c.policy)
    }
}

/// Seed of the sweep cell at `(p_index, tau_index)`.
pub fn cell_seed(master: u64, p_index: usize, tau_index: usize) -> u64 {
    derive_seed(master, &[tag::CELL, p_index as u64, tau_index as u64])
}

/// Estimates R₀ on the full `tau × p` grid. Each cell gets its own seed
/// derived from `base.seed` and its grid coordinates.
pub fn r0_sweep(
    p_values: &[f64],
    tau_values: &[u32],
    base: &EpidemicConfig,
    runs: usize,
) -> Result<R0Table> {
    if p_values.is_empty() || tau_values.is_empty() {
        return Err(Error::InvalidConfig(
            "p and tau lists must be non-empty".into(),
        ));
    }
    check_runs(runs)?;
    let mut configs = Vec::with_capacity(p_values.len() * tau_values.len());
    for (ti, &tau) in tau_values.iter().enumerate() {
        for (pi, &p) in p_values.iter().enumerate() {
            let c = EpidemicConfig {
                p,
                tau,
                seed: cell_seed(base.seed, pi, ti),
                ..base.clone()
            };
            c.validate()?;
            configs.push(c);
        }
    }
    let counts = (0..configs.len() * runs)
        .into_par_iter()
        .map(|k| first_generation(&configs[k / runs], k % runs))
        .collect::<Result<Vec<_>>>()?;
    let cells = configs
        .iter()
        .zip(counts.chunks(runs))
        .map(|(c, xs)| {
            let (mean, stderr) = mean_stderr(xs);
            R0Estimate {
                policy: c.policy,
                p: c.p,
                tau: c.tau,
                runs,
                seed: c.seed,
                mean,
                stderr,
            }
        })
        .collect();
    Ok(R0Table {
        p_values: p_values.to_vec(),
        tau_values: tau_values.to_vec(),
        cells,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCurvePoint {
    pub policy: Policy,
    pub extent: usize,
    pub p: f64,
    pub tau: u32,
    pub agents: usize,
    pub runs: usize,
    pub mean_m: f64,
    pub stderr_m: f64,
}

/// Mean visited-cluster size `⟨M⟩` for each agent count. The seed for a
/// point depends only on `(base.seed, N)`, so repeated `N` values agree.
pub fn cluster_growth(
    agent_counts: &[usize],
    base: &EpidemicConfig,
    runs: usize,
) -> Result<Vec<ClusterCurvePoint>> {
    check_runs(runs)?;
    let configs = agent_counts
        .iter()
        .map(|&n| {
            let c = EpidemicConfig {
                agents: n,
                seed: derive_seed(base.seed, &[tag::CLUSTER, n as u64]),
                ..base.clone()
            };
            c.validate().map(|_| c)
        })
        .collect::<Result<Vec<_>>>()?;
    let sizes = (0..configs.len() * runs)
        .into_par_iter()
        .map(|k| {
            let mut c = configs[k / runs].clone();
            c.run_index = (k % runs) as u64;
            run_realization(&c).map(|s| s.cluster_size_m as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(configs
        .iter()
        .zip(sizes.chunks(runs))
        .map(|(c, xs)| {
            let (mean_m, stderr_m) = mean_stderr(xs);
            ClusterCurvePoint {
                policy: c.policy,
                extent: c.extent,
                p: c.p,
                tau: c.tau,
                agents: c.agents,
                runs,
                mean_m,
                stderr_m,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub p: f64,
    pub tau: u32,
    pub quantum: R0Estimate,
    pub classical: R0Estimate,
    pub ratio_q_over_c: f64,
    pub naive_p_tau: f64,
    /// `|R₀_q − R₀_c| ≤ 3 (stderr_q + stderr_c)`
    pub converged: bool,
}

fn ratio(q: f64, c: f64) -> f64 {
    if q == c {
        1.0
    } else {
        q / c
    }
}

/// Pairs the cells of two tables over the same `(p, τ)` grid.
pub fn summarize_comparison(quantum: &R0Table, classical: &R0Table) -> Result<Vec<ComparisonRow>> {
    if quantum.cells.len() != classical.cells.len() {
        return Err(Error::IncompatibleTable(format!(
            "{} cells versus {}",
            quantum.cells.len(),
            classical.cells.len()
        )));
    }
    quantum
        .cells
        .iter()
        .map(|q| {
            let c = classical.get(q.p, q.tau).ok_or_else(|| {
                Error::IncompatibleTable(format!("no classical cell for p={}, tau={}", q.p, q.tau))
            })?;
            Ok(ComparisonRow {
                p: q.p,
                tau: q.tau,
                quantum: q.clone(),
                classical: c.clone(),
                ratio_q_over_c: ratio(q.mean, c.mean),
                naive_p_tau: naive_r0(q.p, q.tau),
                converged: (q.mean - c.mean).abs() <= 3.0 * (q.stderr + c.stderr),
            })
        })
        .collect()
}
