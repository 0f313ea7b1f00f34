//! Two-hypothesis construction separating ERM from variance penalization.
//!
//! One hypothesis has Bernoulli loss with mean `1/2 + ε`, the other has
//! constant loss `1/2`. The constant is optimal with zero variance, so
//! penalized selection has excess risk decaying like `1/n`, while ERM picks
//! the Bernoulli hypothesis with probability bounded below by a normal tail.
//!
//! The Bernoulli hypothesis is column 0, so ERM resolves an exact tie
//! `P_n = 1/2` against the constant. ERM then errs exactly when
//! `B >= n/2` for `B ~ Bin(n, 1/2 - ε)` counting zero losses, the event
//! bounded below by [`slud_lower_bound`].

use rand::Rng;
use rayon::prelude::*;

use super::{trial_rng, ExperimentRecord, Method};
use crate::error::{param, Result};
use crate::learners::{erm_select, svp_select};
use crate::normal::normal_upper_tail;
use crate::stats::LossMatrix;

/// Column of the Bernoulli hypothesis in [`TwoHypothesisTask::sample`].
pub const BERNOULLI_INDEX: usize = 0;
/// Column of the constant hypothesis.
pub const CONSTANT_INDEX: usize = 1;

/// Largest admissible gap, `1/√8`.
pub const MAX_EPSILON: f64 = 0.353_553_390_593_273_8;

/// How the gap `ε` depends on the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonRule {
    Constant(f64),
    /// `ε(n) = 1/√(8n)`.
    InverseSqrt,
}

impl EpsilonRule {
    pub fn epsilon(&self, n: usize) -> f64 {
        match *self {
            EpsilonRule::Constant(e) => e,
            EpsilonRule::InverseSqrt => 1.0 / (8.0 * n as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoHypothesisTask {
    epsilon: f64,
    n: usize,
}

impl TwoHypothesisTask {
    pub fn new(epsilon: f64, n: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if n == 0 {
            return param("sample size must be at least 1");
        }
        Ok(Self { epsilon, n })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Column 0 Bernoulli(`1/2 + ε`), column 1 constant `1/2`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LossMatrix {
        let p = 0.5 + self.epsilon;
        let mut data = vec![0.5; 2 * self.n];
        for v in &mut data[..self.n] {
            *v = if rng.random::<f64>() < p { 1.0 } else { 0.0 };
        }
        LossMatrix::from_column_major(self.n, 2, data).expect("entries lie in [0,1]")
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= MAX_EPSILON {
        Ok(())
    } else {
        param(format!("epsilon must lie in (0, 1/√8], got {epsilon}"))
    }
}

/// Slud's normal lower bound on a binomial upper tail:
/// `Pr{Z > (t-np)/√(np(1-p))}`, for `p <= 1/2` and `np <= t <= n(1-p)`.
///
/// For integer `t` this bounds `Pr{B >= t}` from below, `B ~ Bin(n, p)`. It
/// does not bound the strict tail `Pr{B > t}`: e.g. `n = 128`, `p = 1/2 - 1/32`,
/// `t = 64` gives `Pr{B > t} = 0.2126` against a bound of `0.2393`.
pub fn slud_lower_bound(n: usize, p: f64, t: f64) -> Result<f64> {
    if n == 0 {
        return param("Slud's inequality requires n >= 1");
    }
    if !(p > 0.0 && p <= 0.5) {
        return param(format!("Slud's inequality requires 0 < p <= 1/2, got p = {p}"));
    }
    let nf = n as f64;
    if !(t >= nf * p && t <= nf * (1.0 - p)) {
        return param(format!("Slud's inequality requires np <= t <= n(1-p), got t = {t}"));
    }
    Ok(normal_upper_tail((t - nf * p) / (nf * p * (1.0 - p)).sqrt()))
}

/// `Pr{Z > √n ε / √(1/4 - ε²)}`, the normal-tail lower bound on the
/// probability that ERM picks the Bernoulli hypothesis. Valid for every `n`.
pub fn erm_misselection_normal_tail(n: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if n == 0 {
        return param("sample size must be at least 1");
    }
    Ok(normal_upper_tail((n as f64).sqrt() * epsilon / (0.25 - epsilon * epsilon).sqrt()))
}

/// `exp(-8 n ε²)`, valid once `n >= ε⁻²`.
pub fn erm_misselection_lower_bound(n: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let nf = n as f64;
    // n ε² >= 1 with a relative slack for ε = 1/√n rounding.
    if nf * epsilon * epsilon < 1.0 - 1e-12 {
        return param(format!(
            "the exponential misselection bound requires n >= 1/epsilon^2 = {:.6}, got n = {n}",
            1.0 / (epsilon * epsilon)
        ));
    }
    Ok((-8.0 * nf * epsilon * epsilon).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoHypothesisConfig {
    pub epsilon: EpsilonRule,
    pub sizes: Vec<usize>,
    pub lambda: f64,
    pub trials: usize,
    pub master_seed: u64,
}

/// Simulates ERM and SVP(λ) on the two-hypothesis task. Emits an `erm` and
/// an `svp` record per sample size with misselection frequency and mean
/// excess risk (`ε` times the frequency).
pub fn run_two_hypothesis_experiment(cfg: &TwoHypothesisConfig) -> Result<Vec<ExperimentRecord>> {
    if !(cfg.lambda > 0.0) || !cfg.lambda.is_finite() {
        return param(format!("lambda must be finite and positive, got {}", cfg.lambda));
    }
    if cfg.trials == 0 || cfg.sizes.is_empty() {
        return param("need at least one trial and one sample size");
    }
    let tasks = cfg
        .sizes
        .iter()
        .map(|&n| {
            if n < 2 {
                return param("variance penalization with lambda > 0 requires n >= 2");
            }
            TwoHypothesisTask::new(cfg.epsilon.epsilon(n), n)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(2 * tasks.len());
    for (size_index, task) in tasks.iter().enumerate() {
        let picks = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.master_seed, ((size_index as u64) << 40) | t);
                let m = task.sample(&mut rng);
                Ok((erm_select(&m).index == BERNOULLI_INDEX, svp_select(&m, cfg.lambda)?.index == BERNOULLI_INDEX))
            })
            .collect::<Result<Vec<(bool, bool)>>>()?;
        let erm = picks.iter().filter(|p| p.0).count();
        let svp = picks.iter().filter(|p| p.1).count();
        for (method, lambda, count) in [(Method::Erm, 0.0, erm), (Method::Svp, cfg.lambda, svp)] {
            let rate = count as f64 / cfg.trials as f64;
            records.push(ExperimentRecord {
                sample_size: task.n(),
                method,
                lambda,
                mean_excess_risk: task.epsilon() * rate,
                std_error: task.epsilon() * (rate * (1.0 - rate) / cfg.trials as f64).sqrt(),
                trials: cfg.trials,
                master_seed: cfg.master_seed,
                misselection_rate: Some(rate),
            });
        }
    }
    Ok(records)
}
