//! Sample compression with variance penalization.
//!
//! For every size-`d` index subset `I` of the data, a [`Trainer`] produces a
//! hypothesis from the points in `I`; that hypothesis is scored on the
//! complement `I^c` by `P_{I^c} + λ √(V_{I^c})`, and the subset with the
//! smallest score wins. `λ = 0` is classical sample compression.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{check_delta, param, Error, Result};
use crate::stats::{mean_of, variance_of, Sample};

/// Default upper limit on the number of enumerated subsets.
pub const DEFAULT_SUBSET_CAP: u128 = 1_000_000;

/// A trained hypothesis: maps a data point to a loss in `[0,1]`.
pub trait LossEvaluator<P> {
    fn loss(&self, point: &P) -> f64;
}

impl<P, F: Fn(&P) -> f64> LossEvaluator<P> for F {
    fn loss(&self, point: &P) -> f64 {
        self(point)
    }
}

/// Learning algorithm used by the compression scheme. Must be deterministic:
/// the same subset always yields an evaluator with the same outputs.
pub trait Trainer<P> {
    type Evaluator: LossEvaluator<P>;

    fn train(&self, data: &[P], subset: &[usize]) -> Self::Evaluator;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionSelection {
    pub chosen_subset: Vec<usize>,
    pub objective: f64,
    pub complement_mean: f64,
    /// `None` only when `λ = 0` and the complement holds a single point.
    pub complement_variance: Option<f64>,
    pub lambda: f64,
    pub num_candidates: u128,
}

/// Losses of `evaluator` on the points whose indices are not in `subset`.
fn complement_losses<P, E: LossEvaluator<P>>(data: &[P], subset: &[usize], evaluator: &E) -> Result<Sample> {
    let mut skip = subset.iter().copied().peekable();
    let mut losses = Vec::with_capacity(data.len().saturating_sub(subset.len()));
    for (i, point) in data.iter().enumerate() {
        if skip.peek() == Some(&i) {
            skip.next();
            continue;
        }
        losses.push(evaluator.loss(point));
    }
    Sample::new(losses)
}

fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&i| i >= n) {
        return param(format!("subset must be strictly increasing indices below {n}"));
    }
    Ok(())
}

/// Mean and unbiased variance of the evaluator's losses on `I^c`.
pub fn complement_statistics<P, E: LossEvaluator<P>>(
    data: &[P],
    subset: &[usize],
    evaluator: &E,
) -> Result<(f64, f64)> {
    check_subset(data.len(), subset)?;
    if data.len() < subset.len() + 2 {
        return param(format!("complement statistics need n - d >= 2, got n = {}, d = {}", data.len(), subset.len()));
    }
    let s = complement_losses(data, subset, evaluator)?;
    Ok((s.mean(), s.variance()?))
}

/// Exact `C(n, d)`, or `None` on overflow.
pub fn binomial(n: usize, d: usize) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    let d = d.min(n - d);
    let mut acc: u128 = 1;
    for i in 0..d {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `ln C(n, d)` through the log-gamma function.
pub fn ln_binomial(n: usize, d: usize) -> f64 {
    let lg = |x: usize| libm::lgamma(x as f64 + 1.0);
    lg(n) - lg(d) - lg(n - d)
}

fn check_sizes(n: usize, d: usize) -> Result<()> {
    if d >= 1 && d < n {
        Ok(())
    } else {
        param(format!("compression needs 1 <= d < n, got n = {n}, d = {d}"))
    }
}

/// All size-`d` subsets of `0..n` in lexicographic order, provided there are
/// at most `cap` of them.
pub fn enumerate_subsets(n: usize, d: usize, cap: u128) -> Result<impl Iterator<Item = Vec<usize>>> {
    check_sizes(n, d)?;
    match binomial(n, d) {
        Some(count) if count <= cap => Ok((0..n).combinations(d)),
        Some(count) => Err(Error::TooManySubsets { count, cap }),
        None => Err(Error::TooManySubsets { count: u128::MAX, cap }),
    }
}

/// Runs the compression scheme. Subset scores may be computed in parallel;
/// the reduction is by `(objective, lexicographic position)`, so the result
/// does not depend on scheduling.
pub fn compress_select<P, T>(data: &[P], trainer: &T, d: usize, lambda: f64, cap: u128) -> Result<CompressionSelection>
where
    P: Sync,
    T: Trainer<P> + Sync,
{
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return param(format!("lambda must be finite and nonnegative, got {lambda}"));
    }
    let n = data.len();
    if lambda > 0.0 && n < d + 2 {
        return param(format!("variance penalization needs n - d >= 2, got n = {n}, d = {d}"));
    }
    let subsets: Vec<Vec<usize>> = enumerate_subsets(n, d, cap)?.collect();
    let scored = subsets
        .par_iter()
        .map(|subset| {
            let evaluator = trainer.train(data, subset);
            let losses = complement_losses(data, subset, &evaluator)?;
            let mean = mean_of(losses.values());
            let variance = if losses.len() >= 2 { Some(variance_of(losses.values())?) } else { None };
            let objective = match variance {
                Some(v) if lambda > 0.0 => mean + lambda * v.sqrt(),
                _ => mean,
            };
            Ok((objective, mean, variance))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, s) in scored.iter().enumerate().skip(1) {
        if s.0 < scored[best].0 {
            best = i;
        }
    }
    let (objective, complement_mean, complement_variance) = scored[best];
    Ok(CompressionSelection {
        chosen_subset: subsets[best].clone(),
        objective,
        complement_mean,
        complement_variance,
        lambda,
        num_candidates: subsets.len() as u128,
    })
}

/// `√(2 ln(6|C|/δ))` with `|C| = C(n, d)`.
pub fn compression_lambda(n: usize, d: usize, delta: f64) -> Result<f64> {
    check_sizes(n, d)?;
    check_delta(delta)?;
    Ok((2.0 * compression_log_term(n, d, delta)).sqrt())
}

fn compression_log_term(n: usize, d: usize, delta: f64) -> f64 {
    6f64.ln() + ln_binomial(n, d) - delta.ln()
}

/// With probability `>= 1 - δ`, the compression scheme run with
/// [`compression_lambda`] has risk at most `P(A_{X[I*]}) + bound` for every
/// subset `I*`, where `reference_variance = V(A_{X[I*]}, μ)`:
/// `√(8 V* L / (n-d)) + 14 L / (3(n-d-1))`, `L = ln(6|C|/δ)`.
pub fn compression_excess_bound(n: usize, d: usize, delta: f64, reference_variance: f64) -> Result<f64> {
    check_sizes(n, d)?;
    check_delta(delta)?;
    if n < d + 2 {
        return param(format!("compression bound needs n - d >= 2, got n = {n}, d = {d}"));
    }
    if !(reference_variance >= 0.0) || !reference_variance.is_finite() {
        return param(format!("reference variance must be nonnegative, got {reference_variance}"));
    }
    let l = compression_log_term(n, d, delta);
    let m = (n - d) as f64;
    Ok((8.0 * reference_variance * l / m).sqrt() + 14.0 * l / (3.0 * (m - 1.0)))
}

/// Trainer that predicts the mean label of its training subset; the loss on
/// a labelled point is `|label - prediction|` clamped to `[0,1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SubsetMeanTrainer;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetMeanPredictor {
    pub prediction: f64,
}

impl LossEvaluator<f64> for SubsetMeanPredictor {
    fn loss(&self, label: &f64) -> f64 {
        (label - self.prediction).abs().clamp(0.0, 1.0)
    }
}

impl Trainer<f64> for SubsetMeanTrainer {
    type Evaluator = SubsetMeanPredictor;

    fn train(&self, labels: &[f64], subset: &[usize]) -> SubsetMeanPredictor {
        let sum: f64 = subset.iter().map(|&i| labels[i]).sum();
        SubsetMeanPredictor { prediction: sum / subset.len() as f64 }
    }
}

/// Finite label distribution on `[0,1]`, used to compute the true risk and
/// loss variance of a [`SubsetMeanPredictor`] in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLabels {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteLabels {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return param("label support and probabilities must be nonempty and of equal length");
        }
        if support.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return param("labels must lie in [0,1]");
        }
        if probs.iter().any(|p| !(*p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return param("label probabilities must be nonnegative and sum to 1");
        }
        Ok(Self { support, probs })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![1.0 - p, p])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (v, p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return *v;
            }
        }
        *self.support.last().expect("nonempty support")
    }

    /// `E |Y - prediction|` (clamped losses).
    pub fn risk(&self, predictor: &SubsetMeanPredictor) -> f64 {
        self.support.iter().zip(&self.probs).map(|(y, p)| p * predictor.loss(y)).sum()
    }

    /// `Var |Y - prediction|`.
    pub fn loss_variance(&self, predictor: &SubsetMeanPredictor) -> f64 {
        let mean = self.risk(predictor);
        self.support.iter().zip(&self.probs).map(|(y, p)| p * (predictor.loss(y) - mean).powi(2)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn enumeration_counts_and_order() {
        let all: Vec<_> = enumerate_subsets(4, 2, 100).unwrap().collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(enumerate_subsets(10, 3, 1000).unwrap().count(), 120);
        match enumerate_subsets(10, 3, 100) {
            Err(e @ Error::TooManySubsets { count: 120, cap: 100 }) => {
                assert!(e.to_string().contains("smaller d or n"))
            }
            _ => panic!("expected cap error"),
        }
        assert!(enumerate_subsets(5, 0, 10).is_err());
        assert!(enumerate_subsets(5, 5, 10).is_err());
        assert!(matches!(enumerate_subsets(400, 200, DEFAULT_SUBSET_CAP), Err(Error::TooManySubsets { .. })));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(50, 3), Some(19600));
        assert_eq!(binomial(10, 2), Some(45));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(2000, 1000), None);
        for n in 1..60 {
            for d in 0..=n {
                let exact = binomial(n, d).unwrap() as f64;
                assert_relative_eq!(ln_binomial(n, d), exact.ln(), epsilon = 1e-10, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn complement_stats_examples() {
        let labels = [0.3, 0.7, 0.0, 1.0];
        let zero = |_: &f64| 0.0;
        assert_eq!(complement_statistics(&labels, &[0, 1], &zero).unwrap(), (0.0, 0.0));
        let identity = |y: &f64| *y;
        assert_eq!(complement_statistics(&labels, &[0, 1], &identity).unwrap(), (0.5, 0.5));
        assert!(complement_statistics(&labels, &[0, 1, 2], &identity).is_err());
        assert!(complement_statistics(&labels, &[1, 0], &identity).is_err());
        let clamp_fail = |_: &f64| 1.5;
        assert!(matches!(complement_statistics(&labels, &[0], &clamp_fail), Err(Error::OutOfUnitInterval { .. })));
    }

    #[test]
    fn lambda_and_bound_values() {
        assert_relative_eq!(compression_lambda(10, 2, 0.1).unwrap(), 3.975174726220829, max_relative = 1e-12);
        assert_relative_eq!(
            compression_excess_bound(50, 3, 0.1, 0.0).unwrap(),
            1.418020374667898,
            max_relative = 1e-12
        );
        let mut prev = 0.0;
        for d in 1..=10 {
            let l = compression_lambda(20, d, 0.1).unwrap();
            assert!(l > prev);
            prev = l;
            let nf = 20.0f64;
            assert!(ln_binomial(20, d) <= d as f64 * (nf * std::f64::consts::E / d as f64).ln());
        }
        assert!(compression_excess_bound(5, 4, 0.1, 0.0).is_err());
    }

    #[test]
    fn trainer_and_label_model() {
        let labels = [0.0, 1.0, 1.0, 0.0];
        let p = SubsetMeanTrainer.train(&labels, &[0, 1]);
        assert_eq!(p.prediction, 0.5);
        assert_eq!(p.loss(&1.0), 0.5);
        let dist = DiscreteLabels::bernoulli(0.3).unwrap();
        let m0 = SubsetMeanPredictor { prediction: 0.0 };
        assert_relative_eq!(dist.risk(&m0), 0.3, max_relative = 1e-15);
        assert_relative_eq!(dist.loss_variance(&m0), 0.21, max_relative = 1e-14);
        let half = SubsetMeanPredictor { prediction: 0.5 };
        assert_relative_eq!(dist.risk(&half), 0.5, max_relative = 1e-15);
        assert_eq!(dist.loss_variance(&half), 0.0);
        assert!(DiscreteLabels::new(vec![0.0, 2.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteLabels::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
    }
}
