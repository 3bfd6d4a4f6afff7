//! Seeded Monte Carlo estimation of expected squared condition numbers.
//!
//! Instance `i` of a run is drawn from its own counter-based substream, so
//! the per-instance statistics do not depend on how the work is scheduled.
//! Aggregation is by index.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::condition::{mu_stochastic, mu_stochastic_sampled};
use crate::error::{Error, Result};
use crate::linalg::complex_gaussian;
use crate::problems::{
    condition_report, sample_instance_attempt, solve_instance, ProblemDescriptor,
};
use crate::rng::substream;

pub const DEFAULT_BLOCKS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub descriptor: ProblemDescriptor,
    pub samples: usize,
    pub seed: u64,
    /// Number of blocks for the median-of-means estimate.
    pub blocks: usize,
    /// Total number of redraws allowed for instances with an untrusted or
    /// infinitely ill-conditioned solution.
    pub max_resamples: usize,
}

impl ExperimentConfig {
    /// Default blocks and a resample budget of 1% of the samples (at least 10).
    pub fn new(descriptor: ProblemDescriptor, samples: usize, seed: u64) -> Self {
        Self {
            descriptor,
            samples,
            seed,
            blocks: DEFAULT_BLOCKS,
            max_resamples: (samples / 100).max(10),
        }
    }

    pub fn with_blocks(mut self, blocks: usize) -> Self {
        self.blocks = blocks;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks == 0 || self.samples < self.blocks || self.samples % self.blocks != 0 {
            return Err(Error::InvalidInput(format!(
                "{} samples cannot be split into {} equal blocks",
                self.samples, self.blocks
            )));
        }
        Ok(())
    }
}

/// Statistics of one accepted instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceStats {
    /// `(1 / (s d_O)) Σ μ²`
    pub mean_mu_sq: f64,
    pub mu_max: f64,
    /// Number of draws discarded before this one was accepted.
    pub resamples: usize,
    pub count_mismatch: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub mom_estimate: f64,
    pub naive_mean: f64,
    pub naive_stderr: f64,
    pub theory: f64,
    pub rel_err: f64,
    pub resample_count: usize,
    pub count_mismatches: usize,
    /// Mean over instances of `μ_max²`.
    pub mean_mu_max_sq: f64,
    /// Mean over instances of `ln μ_max`.
    pub mean_log_mu_max: f64,
    pub samples: usize,
    pub seed: u64,
    pub blocks: usize,
}

/// Draws, solves and conditions instance `index`, redrawing on failure up
/// to `max_attempts` times in total.
pub fn evaluate_instance(
    desc: &ProblemDescriptor,
    seed: u64,
    index: u64,
    max_attempts: usize,
) -> Result<InstanceStats> {
    let count = desc.expected_solution_count() as f64;
    for attempt in 0..max_attempts {
        let inst = sample_instance_attempt(desc, seed, index, attempt as u64);
        let Ok(outcome) = solve_instance(&inst) else {
            continue;
        };
        let Ok(report) = condition_report(&inst, &outcome) else {
            continue;
        };
        if !report.is_clean() {
            continue;
        }
        let sum: f64 = report.per_eigenvalue.iter().map(|e| e.mu * e.mu).sum();
        return Ok(InstanceStats {
            mean_mu_sq: sum / count,
            mu_max: report.mu_max,
            resamples: attempt,
            count_mismatch: outcome.count_mismatch,
        });
    }
    Err(Error::TooManyResamples {
        resamples: max_attempts,
        budget: max_attempts.saturating_sub(1),
    })
}

/// Per-instance statistics for indices `0..samples`, in index order.
pub fn instance_stats(cfg: &ExperimentConfig) -> Result<Vec<InstanceStats>> {
    cfg.validate()?;
    let attempts = cfg.max_resamples + 1;
    let stats = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| evaluate_instance(&cfg.descriptor, cfg.seed, i, attempts))
        .collect::<Vec<_>>();
    let mut out = Vec::with_capacity(stats.len());
    let mut resamples = 0;
    for s in stats {
        let s = s.map_err(|_| Error::TooManyResamples {
            resamples: cfg.max_resamples + 1,
            budget: cfg.max_resamples,
        })?;
        resamples += s.resamples;
        out.push(s);
    }
    if resamples > cfg.max_resamples {
        return Err(Error::TooManyResamples {
            resamples,
            budget: cfg.max_resamples,
        });
    }
    Ok(out)
}

/// Runs the experiment on the global thread pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let stats = instance_stats(cfg)?;
    Ok(summarize(cfg, &stats))
}

/// Runs the experiment on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(
    cfg: &ExperimentConfig,
    workers: usize,
) -> Result<ExperimentSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

/// Aggregates per-instance statistics produced for `cfg`.
pub fn summarize(cfg: &ExperimentConfig, stats: &[InstanceStats]) -> ExperimentSummary {
    let values: Vec<f64> = stats.iter().map(|s| s.mean_mu_sq).collect();
    let n = values.len() as f64;
    let naive_mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - naive_mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mom_estimate = median_of_means(&values, cfg.blocks);
    let theory = cfg.descriptor.expected_mean_sq_condition();
    ExperimentSummary {
        mom_estimate,
        naive_mean,
        naive_stderr: (var / n).sqrt(),
        theory,
        rel_err: (mom_estimate - theory).abs() / theory,
        resample_count: stats.iter().map(|s| s.resamples).sum(),
        count_mismatches: stats.iter().filter(|s| s.count_mismatch).count(),
        mean_mu_max_sq: stats.iter().map(|s| s.mu_max * s.mu_max).sum::<f64>() / n,
        mean_log_mu_max: stats.iter().map(|s| s.mu_max.ln()).sum::<f64>() / n,
        samples: cfg.samples,
        seed: cfg.seed,
        blocks: cfg.blocks,
    }
}

/// Median of the means of `blocks` consecutive equal-length blocks.
///
/// # Panics
/// If `values.len()` is not a positive multiple of `blocks`.
pub fn median_of_means(values: &[f64], blocks: usize) -> f64 {
    assert!(
        blocks > 0 && !values.is_empty() && values.len() % blocks == 0,
        "{} values do not split into {blocks} blocks",
        values.len()
    );
    let len = values.len() / blocks;
    let mut means: Vec<f64> = values
        .chunks_exact(len)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let mid = blocks / 2;
    if blocks % 2 == 1 {
        means[mid]
    } else {
        0.5 * (means[mid - 1] + means[mid])
    }
}

/// `∫ ‖p‖² e^{-‖p‖²} dp` over the `d` complex lines `X = ω^k Y` making up
/// `{X^d = Y^d}` in `C²`, each integrated in polar coordinates by composite
/// Simpson quadrature. The exact value is `π d`.
pub fn verify_lemma_lines(d: usize) -> f64 {
    const RADIUS: f64 = 12.0;
    const INTERVALS: usize = 20_000;
    let h = RADIUS / INTERVALS as f64;
    (0..d)
        .map(|k| {
            let omega = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
            // unit direction of the line
            let u = [omega / 2f64.sqrt(), Complex64::new(1.0 / 2f64.sqrt(), 0.0)];
            let f = |t: f64| {
                let r2 = (u[0] * t).norm_sqr() + (u[1] * t).norm_sqr();
                r2 * (-r2).exp() * t
            };
            let mut acc = f(0.0) + f(RADIUS);
            for i in 1..INTERVALS {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
            }
            2.0 * PI * acc * h / 3.0
        })
        .sum()
}

/// Monte Carlo estimate of `∫_{C^n} ‖p‖² e^{-‖p‖²} dp = π^n E‖p‖²` with `p`
/// standard complex Gaussian. The exact value is `π^n n`.
pub fn verify_lemma_subspace(n: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = substream(seed, n as u64, 0);
    let mut acc = 0.0;
    for _ in 0..samples {
        acc += (0..n)
            .map(|_| complex_gaussian(&mut rng).norm_sqr())
            .sum::<f64>();
    }
    PI.powi(n as i32) * acc / samples as f64
}

/// One eigenvalue of the stochastic-condition comparison.
#[derive(Clone, Copy, Debug)]
pub struct StochasticSample {
    /// Direction-averaged `μ_st²`.
    pub sampled: f64,
    /// `μ² / m`.
    pub predicted: f64,
}

impl StochasticSample {
    pub fn rel_err(&self) -> f64 {
        (self.sampled - self.predicted).abs() / self.predicted
    }
}

/// Compares the direction-sampled stochastic condition number with `μ²/m`
/// on every eigenvalue of `instances` seeded instances of `desc`.
pub fn stochastic_check(
    desc: &ProblemDescriptor,
    instances: usize,
    directions: usize,
    seed: u64,
) -> Result<Vec<StochasticSample>> {
    let weights = desc.weights();
    let o = desc.output_variety();
    let m = desc.m();
    let per_instance = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let inst = sample_instance_attempt(desc, seed, i, 0);
            let outcome = solve_instance(&inst)?;
            let report = condition_report(&inst, &outcome)?;
            let blocks = inst.blocks();
            let mut rng = substream(seed, i, 1);
            outcome
                .triples
                .iter()
                .zip(&report.per_eigenvalue)
                .map(|(t, e)| {
                    let sampled = mu_stochastic_sampled(
                        &weights,
                        &blocks,
                        o,
                        t,
                        inst.p_norm,
                        directions,
                        &mut rng,
                    )?;
                    Ok(StochasticSample {
                        sampled,
                        predicted: mu_stochastic(e.mu, m),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Vec<_>>();
    let mut out = Vec::new();
    for r in per_instance {
        out.extend(r?);
    }
    Ok(out)
}
