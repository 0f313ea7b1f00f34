//! One-sided confidence radii for the mean of `[0,1]`-valued losses.
//!
//! Every function returns a deviation `r` such that, with probability at
//! least `1 - δ`, the true mean exceeds the empirical mean by at most `r`
//! (or, for the standard-deviation radii, the analogous statement for
//! `√V_n`). Radii are never truncated at 1.
//!
//! | kind                     | radius                                                        |
//! |--------------------------|---------------------------------------------------------------|
//! | Hoeffding                | `√(ln(1/δ) / 2n)`                                             |
//! | finite-class Hoeffding   | `√(ln(|F|/δ) / 2n)`                                           |
//! | Bennett (true variance)  | `√(2 V ln(1/δ) / n) + ln(1/δ) / 3n`                           |
//! | empirical Bernstein      | `√(2 V_n ln(2/δ) / n) + 7 ln(2/δ) / 3(n-1)`                   |
//! | finite-class EB          | empirical Bernstein with `δ → δ/|F|`                          |
//! | uniform EB               | `√(18 V_n t / n) + 15 t / (n-1)`, `t = ln(M(n)/δ)`            |
//! | stdev upper / lower      | `√(2 ln(1/δ) / (n-1))`                                        |
//!
//! Here `M(n) = 10 N∞(1/n, F, 2n)` is supplied through [`ClassComplexity`].

use std::fmt;
use std::sync::Arc;

use crate::error::{check_delta, check_min_n, param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Hoeffding,
    Bennett,
    EmpiricalBernstein,
    StdevUpper,
    StdevLower,
    UniformEB,
    FiniteClassHoeffding,
    FiniteClassEB,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Hoeffding => "hoeffding",
            BoundKind::Bennett => "bennett",
            BoundKind::EmpiricalBernstein => "empirical-bernstein",
            BoundKind::StdevUpper => "stdev-upper",
            BoundKind::StdevLower => "stdev-lower",
            BoundKind::UniformEB => "uniform-eb",
            BoundKind::FiniteClassHoeffding => "finite-class-hoeffding",
            BoundKind::FiniteClassEB => "finite-class-eb",
        })
    }
}

/// A computed deviation bound together with the inputs that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceRadius {
    pub radius: f64,
    pub delta: f64,
    pub n: usize,
    pub kind: BoundKind,
}

impl ConfidenceRadius {
    fn new(radius: f64, delta: f64, n: usize, kind: BoundKind) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return param(format!("{kind} radius is not a finite nonnegative number ({radius})"));
        }
        Ok(Self { radius, delta, n, kind })
    }
}

/// Size of a hypothesis class, either as a cardinality or through the log
/// covering number `n ↦ ln N∞(1/n, F, 2n)`.
///
/// A `LogCover` function must be pure; it may be called concurrently.
#[derive(Clone)]
pub enum ClassComplexity {
    Finite(u64),
    LogCover(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl fmt::Debug for ClassComplexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassComplexity::Finite(c) => f.debug_tuple("Finite").field(c).finish(),
            ClassComplexity::LogCover(_) => f.write_str("LogCover(..)"),
        }
    }
}

impl ClassComplexity {
    pub fn finite(cardinality: u64) -> Self {
        ClassComplexity::Finite(cardinality)
    }

    pub fn log_cover<F>(f: F) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        ClassComplexity::LogCover(Arc::new(f))
    }

    /// `ln |F|` for a finite class, `ln N∞(1/n, F, 2n)` otherwise.
    pub fn ln_size(&self, n: usize) -> Result<f64> {
        match self {
            ClassComplexity::Finite(0) => param("class cardinality must be at least 1"),
            ClassComplexity::Finite(c) => Ok((*c as f64).ln()),
            ClassComplexity::LogCover(f) => {
                let v = f(n);
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    param(format!("log covering number must be finite and >= 0, got {v} at n = {n}"))
                }
            }
        }
    }

    /// `ln M(n) = ln 10 + ln N∞(1/n, F, 2n)`, evaluated in log space.
    pub fn ln_m(&self, n: usize) -> Result<f64> {
        Ok(std::f64::consts::LN_10 + self.ln_size(n)?)
    }
}

fn check_cardinality(cardinality: u64) -> Result<()> {
    if cardinality >= 1 {
        Ok(())
    } else {
        param("class cardinality must be at least 1")
    }
}

pub fn hoeffding_radius(n: usize, delta: f64) -> Result<ConfidenceRadius> {
    check_min_n(n, 1, "Hoeffding's inequality")?;
    check_delta(delta)?;
    let r = ((1.0 / delta).ln() / (2.0 * n as f64)).sqrt();
    ConfidenceRadius::new(r, delta, n, BoundKind::Hoeffding)
}

/// Hoeffding's radius made uniform over a finite class by a union bound.
pub fn hoeffding_finite_class_radius(n: usize, delta: f64, cardinality: u64) -> Result<ConfidenceRadius> {
    check_min_n(n, 1, "Hoeffding's inequality")?;
    check_delta(delta)?;
    check_cardinality(cardinality)?;
    let t = (cardinality as f64).ln() + (1.0 / delta).ln();
    let r = (t / (2.0 * n as f64)).sqrt();
    ConfidenceRadius::new(r, delta, n, BoundKind::FiniteClassHoeffding)
}

/// Bennett's inequality with the true variance `variance` supplied.
pub fn bennett_radius(n: usize, delta: f64, variance: f64) -> Result<ConfidenceRadius> {
    check_min_n(n, 1, "Bennett's inequality")?;
    check_delta(delta)?;
    if !(variance >= 0.0) {
        return param(format!("variance must be nonnegative, got {variance}"));
    }
    let l = (1.0 / delta).ln();
    let nf = n as f64;
    let r = (2.0 * variance * l / nf).sqrt() + l / (3.0 * nf);
    ConfidenceRadius::new(r, delta, n, BoundKind::Bennett)
}

fn check_sample_variance(v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        param(format!("sample variance must be finite and nonnegative, got {v}"))
    }
}

fn eb_radius(n: usize, ln_term: f64, sample_variance: f64) -> f64 {
    let nf = n as f64;
    (2.0 * sample_variance * ln_term / nf).sqrt() + 7.0 * ln_term / (3.0 * (nf - 1.0))
}

/// Empirical Bernstein radius: Bennett with the observed sample variance and
/// a `7/3` linear term. Also valid for independent, non-identically
/// distributed losses with the mean of their expectations as target.
pub fn empirical_bernstein_radius(n: usize, delta: f64, sample_variance: f64) -> Result<ConfidenceRadius> {
    check_min_n(n, 2, "the empirical Bernstein bound")?;
    check_delta(delta)?;
    check_sample_variance(sample_variance)?;
    let r = eb_radius(n, (2.0 / delta).ln(), sample_variance);
    ConfidenceRadius::new(r, delta, n, BoundKind::EmpiricalBernstein)
}

pub fn empirical_bernstein_finite_class_radius(
    n: usize,
    delta: f64,
    sample_variance: f64,
    cardinality: u64,
) -> Result<ConfidenceRadius> {
    check_min_n(n, 2, "the empirical Bernstein bound")?;
    check_delta(delta)?;
    check_sample_variance(sample_variance)?;
    check_cardinality(cardinality)?;
    // ln 1 = 0 exactly, so |F| = 1 reproduces the single-hypothesis radius bit for bit.
    let ln_term = (cardinality as f64).ln() + (2.0 / delta).ln();
    let r = eb_radius(n, ln_term, sample_variance);
    ConfidenceRadius::new(r, delta, n, BoundKind::FiniteClassEB)
}

/// Empirical Bernstein radius holding uniformly over a class of bounded
/// complexity; `t = ln(M(n)/δ)` is computed in log space.
pub fn empirical_bernstein_uniform_radius(
    n: usize,
    delta: f64,
    sample_variance: f64,
    complexity: &ClassComplexity,
) -> Result<ConfidenceRadius> {
    check_min_n(n, 16, "the uniform empirical Bernstein bound")?;
    check_delta(delta)?;
    check_sample_variance(sample_variance)?;
    let t = complexity.ln_m(n)? - delta.ln();
    // M(n) >= 10 and δ < 1 give t > ln 10.
    assert!(t >= 1.0, "ln(M(n)/δ) = {t} < 1");
    let nf = n as f64;
    let r = (18.0 * sample_variance * t / nf).sqrt() + 15.0 * t / (nf - 1.0);
    ConfidenceRadius::new(r, delta, n, BoundKind::UniformEB)
}

fn stdev_radius(n: usize, delta: f64, kind: BoundKind) -> Result<ConfidenceRadius> {
    check_min_n(n, 2, "the standard deviation bound")?;
    check_delta(delta)?;
    let r = (2.0 * (1.0 / delta).ln() / (n - 1) as f64).sqrt();
    ConfidenceRadius::new(r, delta, n, kind)
}

/// `r` with `√E V_n <= √V_n + r` w.p. `>= 1 - δ`.
pub fn stdev_upper_radius(n: usize, delta: f64) -> Result<ConfidenceRadius> {
    stdev_radius(n, delta, BoundKind::StdevUpper)
}

/// `r` with `√V_n <= √E V_n + r` w.p. `>= 1 - δ`.
pub fn stdev_lower_radius(n: usize, delta: f64) -> Result<ConfidenceRadius> {
    stdev_radius(n, delta, BoundKind::StdevLower)
}

fn check_tail_args(n: usize, s: f64, expected_variance: f64) -> Result<()> {
    check_min_n(n, 2, "the sample variance tail bound")?;
    if !(s > 0.0) || !s.is_finite() {
        return param(format!("deviation s must be positive, got {s}"));
    }
    if !(expected_variance >= 0.0) || !expected_variance.is_finite() {
        return param(format!("expected variance must be nonnegative, got {expected_variance}"));
    }
    Ok(())
}

/// Upper bound on `Pr{E V_n - V_n > s}`: `exp(-(n-1)s² / (2 E V_n))`.
/// Returns 0 when `E V_n = 0`.
pub fn variance_lower_tail_prob(n: usize, s: f64, expected_variance: f64) -> Result<f64> {
    check_tail_args(n, s, expected_variance)?;
    if expected_variance == 0.0 {
        return Ok(0.0);
    }
    Ok((-((n - 1) as f64) * s * s / (2.0 * expected_variance)).exp())
}

/// Upper bound on `Pr{V_n - E V_n > s}`: `exp(-(n-1)s² / (2 E V_n + s))`.
pub fn variance_upper_tail_prob(n: usize, s: f64, expected_variance: f64) -> Result<f64> {
    check_tail_args(n, s, expected_variance)?;
    Ok((-((n - 1) as f64) * s * s / (2.0 * expected_variance + s)).exp())
}

/// Deviation `s` at which [`variance_lower_tail_prob`] equals `δ`.
pub fn variance_lower_deviation(n: usize, delta: f64, expected_variance: f64) -> Result<f64> {
    check_min_n(n, 2, "the sample variance tail bound")?;
    check_delta(delta)?;
    Ok((2.0 * expected_variance * (1.0 / delta).ln() / (n - 1) as f64).sqrt())
}

/// Deviation `s` at which [`variance_upper_tail_prob`] equals `δ`: the
/// positive root of `(n-1)s² = ln(1/δ)(2 E V_n + s)`.
pub fn variance_upper_deviation(n: usize, delta: f64, expected_variance: f64) -> Result<f64> {
    check_min_n(n, 2, "the sample variance tail bound")?;
    check_delta(delta)?;
    let l = (1.0 / delta).ln();
    let m = (n - 1) as f64;
    Ok((l + (l * l + 8.0 * m * expected_variance * l).sqrt()) / (2.0 * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hoeffding_values() {
        let r = hoeffding_radius(200, 0.05).unwrap();
        assert_eq!(r.kind, BoundKind::Hoeffding);
        assert_relative_eq!(r.radius, 0.08654091913011426, max_relative = 1e-13);
        assert_relative_eq!(
            hoeffding_radius(2, (-2.0f64).exp()).unwrap().radius,
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-13
        );
        assert!(hoeffding_radius(10, 1.0 - 1e-12).unwrap().radius < 1e-5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(hoeffding_radius(0, 0.1).is_err());
        for d in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(hoeffding_radius(10, d).is_err(), "delta {d}");
        }
        assert!(bennett_radius(10, 0.1, -1e-9).is_err());
        assert!(empirical_bernstein_radius(1, 0.1, 0.0).is_err());
        assert!(stdev_upper_radius(1, 0.1).is_err());
        assert!(hoeffding_finite_class_radius(10, 0.1, 0).is_err());
        let e = empirical_bernstein_uniform_radius(15, 0.1, 0.0, &ClassComplexity::finite(1)).unwrap_err();
        assert!(e.to_string().contains("requires n >= 16"), "{e}");
        assert!(variance_lower_tail_prob(10, 0.0, 0.1).is_err());
        assert!(variance_upper_tail_prob(10, -0.1, 0.1).is_err());
    }

    #[test]
    fn finite_class_hoeffding() {
        assert_eq!(
            hoeffding_finite_class_radius(200, 0.05, 1).unwrap().radius,
            hoeffding_radius(200, 0.05).unwrap().radius
        );
        assert_relative_eq!(
            hoeffding_finite_class_radius(200, 0.05, 100).unwrap().radius,
            0.13784867119002348,
            max_relative = 1e-13
        );
        // |F| scaled by e adds one to the log term.
        let k = 7u64;
        let base = (k as f64 / 0.1f64).ln();
        let r1 = hoeffding_finite_class_radius(50, 0.1, k).unwrap().radius;
        let r2 = ((base + 1.0) / 100.0).sqrt();
        assert_relative_eq!(r2 / r1, ((base + 1.0) / base).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn bennett_values() {
        assert_relative_eq!(bennett_radius(100, 0.05, 0.0).unwrap().radius, 0.00998577424517997, max_relative = 1e-13);
        assert_relative_eq!(bennett_radius(100, 0.05, 0.25).unwrap().radius, 0.13237311577922078, max_relative = 1e-13);
    }

    #[test]
    fn empirical_bernstein_values() {
        assert_relative_eq!(
            empirical_bernstein_radius(101, 0.1, 0.0).unwrap().radius,
            0.06990041971625979,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            empirical_bernstein_radius(101, 0.1, 0.25).unwrap().radius,
            0.1916803761535621,
            max_relative = 1e-13
        );
        let r = |n| empirical_bernstein_radius(n, 0.1, 0.0).unwrap().radius;
        assert_relative_eq!(r(200_001) / r(100_001), 0.5, max_relative = 1e-5);
    }

    #[test]
    fn finite_class_eb_values() {
        assert_eq!(
            empirical_bernstein_finite_class_radius(101, 0.1, 0.25, 1).unwrap().radius,
            empirical_bernstein_radius(101, 0.1, 0.25).unwrap().radius
        );
        assert_relative_eq!(
            empirical_bernstein_finite_class_radius(101, 0.1, 0.25, 10).unwrap().radius,
            0.2855820096424287,
            max_relative = 1e-13
        );
        let mut prev = 0.0;
        for c in 1..50 {
            let r = empirical_bernstein_finite_class_radius(101, 0.1, 0.25, c).unwrap().radius;
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn uniform_eb_values() {
        let none = ClassComplexity::log_cover(|_| 0.0);
        assert_relative_eq!(
            empirical_bernstein_uniform_radius(100, 0.1, 0.0, &none).unwrap().radius,
            0.6977530584830443,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            empirical_bernstein_uniform_radius(100, 0.1, 0.25, &none).unwrap().radius,
            1.1529811972985882,
            max_relative = 1e-13
        );
        // Finite cardinality is the same code path with ln |F|.
        let a = empirical_bernstein_uniform_radius(64, 0.05, 0.1, &ClassComplexity::finite(30)).unwrap();
        let b = empirical_bernstein_uniform_radius(64, 0.05, 0.1, &ClassComplexity::log_cover(|_| 30f64.ln())).unwrap();
        assert_eq!(a.radius, b.radius);
        assert!(ClassComplexity::log_cover(|_| -1.0).ln_size(5).is_err());
        assert!(ClassComplexity::log_cover(|_| f64::NAN).ln_size(5).is_err());
    }

    #[test]
    fn huge_classes_stay_finite() {
        let c = ClassComplexity::log_cover(|n| 1e3 * (n as f64).ln().powf(1.5));
        let r = empirical_bernstein_uniform_radius(10_000, 1e-9, 0.2, &c).unwrap();
        assert!(r.radius.is_finite());
        assert!(hoeffding_finite_class_radius(10, 1e-12, u64::MAX).unwrap().radius.is_finite());
    }

    #[test]
    fn stdev_values() {
        let u = stdev_upper_radius(101, 0.05).unwrap();
        let l = stdev_lower_radius(101, 0.05).unwrap();
        assert_relative_eq!(u.radius, 0.24477468306808164, max_relative = 1e-13);
        assert_eq!(u.radius, l.radius);
        assert_eq!((u.kind, l.kind), (BoundKind::StdevUpper, BoundKind::StdevLower));
        assert!(stdev_upper_radius(101, 1.0 - 1e-14).unwrap().radius < 1e-6);
    }

    #[test]
    fn tail_values() {
        assert_relative_eq!(
            variance_lower_tail_prob(101, 0.1, 0.25).unwrap(),
            0.1353352832366127,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            variance_upper_tail_prob(101, 0.1, 0.25).unwrap(),
            0.18887560283756183,
            max_relative = 1e-13
        );
        assert_eq!(variance_lower_tail_prob(101, 0.1, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            variance_upper_tail_prob(101, 0.1, 0.0).unwrap(),
            4.5399929762484854e-05,
            max_relative = 1e-13
        );
    }

    #[test]
    fn tail_deviations_invert_tail_probabilities() {
        for &(n, delta, ev) in &[(30, 0.05, 0.25), (101, 0.01, 0.02), (300, 0.1, 1.0 / 12.0)] {
            let s = variance_lower_deviation(n, delta, ev).unwrap();
            assert_relative_eq!(variance_lower_tail_prob(n, s, ev).unwrap(), delta, max_relative = 1e-12);
            let s = variance_upper_deviation(n, delta, ev).unwrap();
            assert_relative_eq!(variance_upper_tail_prob(n, s, ev).unwrap(), delta, max_relative = 1e-12);
        }
    }
}
