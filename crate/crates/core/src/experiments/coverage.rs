//! Monte Carlo coverage of the confidence bounds.
//!
//! Each trial draws an i.i.d. sample from a distribution with known mean
//! `μ` and variance `σ²` (so `E V_n = σ²`) and checks whether the bound's
//! event fails. A valid bound fails in at most a `δ` fraction of trials, up
//! to binomial noise.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use super::trial_rng;
use crate::bounds::{
    bennett_radius, empirical_bernstein_radius, hoeffding_radius, stdev_lower_radius, stdev_upper_radius,
    variance_lower_deviation, variance_upper_deviation,
};
use crate::error::{check_delta, param, Error, Result};
use crate::stats::{mean_of, variance_of};

/// Distributions on `[0,1]` with closed-form mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    Bernoulli(f64),
    Uniform,
    Beta(f64, f64),
    /// `a ± b` with equal probability.
    ToyCoordinate(f64, f64),
}

impl DistSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpec::Bernoulli(p) if (0.0..=1.0).contains(&p) => Ok(()),
            DistSpec::Uniform => Ok(()),
            DistSpec::Beta(a, b) if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() => Ok(()),
            DistSpec::ToyCoordinate(a, b) if b >= 0.0 && a - b >= 0.0 && a + b <= 1.0 => Ok(()),
            _ => param(format!("invalid distribution parameters: {self}")),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            DistSpec::Bernoulli(p) => p,
            DistSpec::Uniform => 0.5,
            DistSpec::Beta(a, b) => a / (a + b),
            DistSpec::ToyCoordinate(a, _) => a,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            DistSpec::Bernoulli(p) => p * (1.0 - p),
            DistSpec::Uniform => 1.0 / 12.0,
            DistSpec::Beta(a, b) => a * b / ((a + b) * (a + b) * (a + b + 1.0)),
            DistSpec::ToyCoordinate(_, b) => b * b,
        }
    }

    fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        Ok(match *self {
            DistSpec::Bernoulli(p) => Sampler::Bernoulli(p),
            DistSpec::Uniform => Sampler::Uniform,
            DistSpec::Beta(a, b) => Sampler::Beta(Beta::new(a, b).map_err(|e| Error::Parameter(e.to_string()))?),
            DistSpec::ToyCoordinate(a, b) => Sampler::TwoPoint(a - b, a + b),
        })
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Bernoulli(p) => write!(f, "bernoulli:{p}"),
            DistSpec::Uniform => f.write_str("uniform"),
            DistSpec::Beta(a, b) => write!(f, "beta:{a},{b}"),
            DistSpec::ToyCoordinate(a, b) => write!(f, "toy:{a},{b}"),
        }
    }
}

impl FromStr for DistSpec {
    type Err = Error;

    /// `bernoulli:P`, `uniform`, `beta:A,B` or `toy:A,B`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("bad number in {s:?}"))))
                .collect()
        };
        let spec = match (name.trim().to_ascii_lowercase().as_str(), args.is_empty()) {
            ("uniform", true) => DistSpec::Uniform,
            ("bernoulli", false) => match nums()?.as_slice() {
                [p] => DistSpec::Bernoulli(*p),
                _ => return param(format!("bernoulli takes one parameter: {s:?}")),
            },
            ("beta", false) => match nums()?.as_slice() {
                [a, b] => DistSpec::Beta(*a, *b),
                _ => return param(format!("beta takes two parameters: {s:?}")),
            },
            ("toy", false) => match nums()?.as_slice() {
                [a, b] => DistSpec::ToyCoordinate(*a, *b),
                _ => return param(format!("toy takes two parameters: {s:?}")),
            },
            _ => {
                return param(format!(
                    "unknown distribution {s:?} (expected bernoulli:P, uniform, beta:A,B or toy:A,B)"
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

enum Sampler {
    Bernoulli(f64),
    Uniform,
    Beta(Beta<f64>),
    TwoPoint(f64, f64),
}

impl Sampler {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Bernoulli(p) => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            Sampler::Uniform => rng.random::<f64>(),
            Sampler::Beta(b) => b.sample(rng),
            Sampler::TwoPoint(lo, hi) => {
                if rng.random::<bool>() {
                    *hi
                } else {
                    *lo
                }
            }
        }
    }
}

/// Bound whose coverage is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageKind {
    /// `μ > P_n + √(ln(1/δ)/2n)`.
    Hoeffding,
    /// `μ > P_n + bennett(σ²)`.
    Bennett,
    /// `μ > P_n + empirical_bernstein(V_n)`.
    EmpiricalBernstein,
    /// `σ > √V_n + r`.
    StdevUpper,
    /// `√V_n > σ + r`.
    StdevLower,
    /// `σ² - V_n > s` with `s` solving the lower tail bound at `δ`.
    VarianceLowerTail,
    /// `V_n - σ² > s` with `s` solving the upper tail bound at `δ`.
    VarianceUpperTail,
}

impl CoverageKind {
    pub const ALL: [CoverageKind; 7] = [
        CoverageKind::Hoeffding,
        CoverageKind::Bennett,
        CoverageKind::EmpiricalBernstein,
        CoverageKind::StdevUpper,
        CoverageKind::StdevLower,
        CoverageKind::VarianceLowerTail,
        CoverageKind::VarianceUpperTail,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CoverageKind::Hoeffding => "hoeffding",
            CoverageKind::Bennett => "bennett",
            CoverageKind::EmpiricalBernstein => "empirical-bernstein",
            CoverageKind::StdevUpper => "stdev-upper",
            CoverageKind::StdevLower => "stdev-lower",
            CoverageKind::VarianceLowerTail => "variance-lower-tail",
            CoverageKind::VarianceUpperTail => "variance-upper-tail",
        }
    }
}

impl fmt::Display for CoverageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CoverageKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown bound kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub kind: CoverageKind,
    pub dist: DistSpec,
    pub n: usize,
    pub delta: f64,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    /// Binomial standard error of `failure_rate`.
    pub stderr: f64,
}

impl CoverageReport {
    /// `δ + 3√(δ(1-δ)/trials)`.
    pub fn threshold(&self) -> f64 {
        self.delta + 3.0 * (self.delta * (1.0 - self.delta) / self.trials as f64).sqrt()
    }

    pub fn passes(&self) -> bool {
        self.failure_rate <= self.threshold()
    }
}

/// Minimum trial count accepted by the coverage harness.
pub const MIN_COVERAGE_TRIALS: usize = 1000;

pub fn run_coverage(
    dist: DistSpec,
    kind: CoverageKind,
    n: usize,
    delta: f64,
    trials: usize,
    master_seed: u64,
) -> Result<CoverageReport> {
    let mut reports = run_coverage_suite(dist, &[kind], n, delta, trials, master_seed)?;
    Ok(reports.remove(0))
}

/// Evaluates several bounds on the same simulated samples.
pub fn run_coverage_suite(
    dist: DistSpec,
    kinds: &[CoverageKind],
    n: usize,
    delta: f64,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<CoverageReport>> {
    check_delta(delta)?;
    if n < 2 {
        return param(format!("coverage checks need n >= 2, got {n}"));
    }
    if trials < MIN_COVERAGE_TRIALS {
        return param(format!("coverage checks need at least {MIN_COVERAGE_TRIALS} trials, got {trials}"));
    }
    let sampler = dist.sampler()?;
    let mu = dist.mean();
    let var = dist.variance();
    let sd = var.sqrt();
    let hoeffding = hoeffding_radius(n, delta)?.radius;
    let bennett = bennett_radius(n, delta, var)?.radius;
    let sd_up = stdev_upper_radius(n, delta)?.radius;
    let sd_low = stdev_lower_radius(n, delta)?.radius;
    let var_low = variance_lower_deviation(n, delta, var)?;
    let var_up = variance_upper_deviation(n, delta, var)?;

    let failures = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, t| {
                let mut rng = trial_rng(master_seed, t);
                buf.clear();
                buf.extend((0..n).map(|_| sampler.draw(&mut rng)));
                let m = mean_of(buf);
                let v = variance_of(buf)?;
                kinds
                    .iter()
                    .map(|kind| {
                        Ok(match kind {
                            CoverageKind::Hoeffding => mu > m + hoeffding,
                            CoverageKind::Bennett => mu > m + bennett,
                            CoverageKind::EmpiricalBernstein => {
                                mu > m + empirical_bernstein_radius(n, delta, v)?.radius
                            }
                            CoverageKind::StdevUpper => sd > v.sqrt() + sd_up,
                            CoverageKind::StdevLower => v.sqrt() > sd + sd_low,
                            CoverageKind::VarianceLowerTail => var - v > var_low,
                            CoverageKind::VarianceUpperTail => v - var > var_up,
                        })
                    })
                    .collect::<Result<Vec<bool>>>()
            },
        )
        .collect::<Result<Vec<Vec<bool>>>>()?;

    Ok(kinds
        .iter()
        .enumerate()
        .map(|(i, &kind)| {
            let count = failures.iter().filter(|f| f[i]).count();
            let rate = count as f64 / trials as f64;
            CoverageReport {
                kind,
                dist,
                n,
                delta,
                trials,
                failures: count,
                failure_rate: rate,
                stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
            }
        })
        .collect())
}
