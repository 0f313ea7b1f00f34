//! Coordinate-selection experiment: `K` hypotheses, hypothesis `k` has loss
//! `a_k ± b_k` with equal probability, `a_k ~ U[B, 1-B]`, `b_k ~ U[0, B]`.

use rand::Rng;
use rayon::prelude::*;

use super::{trial_rng, ExperimentRecord, Method};
use crate::error::{param, Result};
use crate::learners::svp_select;
use crate::stats::LossMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ToyDistribution {
    pub means: Vec<f64>,
    pub stdevs: Vec<f64>,
    pub spread: f64,
}

impl ToyDistribution {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// `min_k a_k`, the risk of the best hypothesis.
    pub fn optimal_risk(&self) -> f64 {
        self.means.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_spread(b: f64) -> Result<()> {
    if b > 0.0 && b < 0.5 {
        Ok(())
    } else {
        param(format!("spread B must lie in (0, 1/2), got {b}"))
    }
}

pub fn generate_toy_distribution<R: Rng + ?Sized>(b: f64, k: usize, rng: &mut R) -> Result<ToyDistribution> {
    check_spread(b)?;
    if k == 0 {
        return param("need at least one hypothesis (K >= 1)");
    }
    let mut means = Vec::with_capacity(k);
    let mut stdevs = Vec::with_capacity(k);
    for _ in 0..k {
        means.push(rng.random_range(b..=1.0 - b));
        stdevs.push(rng.random_range(0.0..=b));
    }
    Ok(ToyDistribution { means, stdevs, spread: b })
}

/// Draws an `n × K` loss matrix; entry `(i, k)` is `a_k + s b_k`, `s = ±1`.
pub fn sample_toy<R: Rng + ?Sized>(dist: &ToyDistribution, n: usize, rng: &mut R) -> Result<LossMatrix> {
    if n == 0 {
        return param("sample size must be at least 1");
    }
    let mut data = Vec::with_capacity(n * dist.len());
    let mut bits = 0u64;
    let mut left = 0u32;
    for (&a, &b) in dist.means.iter().zip(&dist.stdevs) {
        let (lo, hi) = ((a - b).max(0.0), (a + b).min(1.0));
        for _ in 0..n {
            if left == 0 {
                bits = rng.next_u64();
                left = 64;
            }
            data.push(if bits & 1 == 1 { hi } else { lo });
            bits >>= 1;
            left -= 1;
        }
    }
    LossMatrix::from_column_major(n, dist.len(), data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyConfig {
    /// `B`: means are drawn from `[B, 1-B]`, standard deviations from `[0, B]`.
    pub spread: f64,
    pub hypotheses: usize,
    /// `0` stands for ERM.
    pub lambdas: Vec<f64>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
}

impl ToyConfig {
    pub fn validate(&self) -> Result<()> {
        check_spread(self.spread)?;
        if self.hypotheses == 0 {
            return param("need at least one hypothesis (K >= 1)");
        }
        if self.trials == 0 {
            return param("need at least one trial");
        }
        if self.lambdas.is_empty() || self.sizes.is_empty() {
            return param("need at least one lambda and one sample size");
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
            return param(format!("lambda must be finite and nonnegative, got {l}"));
        }
        if self.sizes.contains(&0) {
            return param("sample sizes must be at least 1");
        }
        if self.sizes.contains(&1) && self.lambdas.iter().any(|&l| l > 0.0) {
            return param("variance penalization with lambda > 0 requires n >= 2");
        }
        Ok(())
    }
}

/// For each trial: draw a distribution, then for each sample size draw a
/// sample and let every method pick a hypothesis. Records the excess risk
/// `a_selected - min_k a_k` averaged over trials, one record per
/// `(size, lambda)` in input order.
pub fn run_toy_experiment(cfg: &ToyConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let per_trial = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.master_seed, t);
            let dist = generate_toy_distribution(cfg.spread, cfg.hypotheses, &mut rng)?;
            let best = dist.optimal_risk();
            let mut excess = Vec::with_capacity(cfg.sizes.len() * cfg.lambdas.len());
            for &n in &cfg.sizes {
                let m = sample_toy(&dist, n, &mut rng)?;
                for &lambda in &cfg.lambdas {
                    let sel = svp_select(&m, lambda)?;
                    excess.push(dist.means[sel.index] - best);
                }
            }
            Ok(excess)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let cells = cfg.sizes.len() * cfg.lambdas.len();
    let mut sums = vec![0.0; cells];
    let mut squares = vec![0.0; cells];
    for trial in &per_trial {
        for (i, e) in trial.iter().enumerate() {
            sums[i] += e;
            squares[i] += e * e;
        }
    }
    let trials = cfg.trials as f64;
    let std_error = |i: usize| {
        if cfg.trials < 2 {
            return 0.0;
        }
        let mean = sums[i] / trials;
        ((squares[i] - trials * mean * mean).max(0.0) / (trials - 1.0) / trials).sqrt()
    };
    let mut records = Vec::with_capacity(sums.len());
    for (i, &n) in cfg.sizes.iter().enumerate() {
        for (j, &lambda) in cfg.lambdas.iter().enumerate() {
            records.push(ExperimentRecord {
                sample_size: n,
                method: Method::for_lambda(lambda),
                lambda,
                mean_excess_risk: sums[i * cfg.lambdas.len() + j] / trials,
                std_error: std_error(i * cfg.lambdas.len() + j),
                trials: cfg.trials,
                master_seed: cfg.master_seed,
                misselection_rate: None,
            });
        }
    }
    Ok(records)
}
