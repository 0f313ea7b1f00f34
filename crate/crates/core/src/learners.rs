//! Hypothesis selection over an explicit [`LossMatrix`].
//!
//! ERM picks the column with the smallest empirical mean. Sample variance
//! penalization (SVP) picks the column minimizing
//! `P_n(f) + λ √(V_n(f) / n)`; `λ = 0` is ERM.
//!
//! The argmin compares `(objective, index)` with exact float comparison, so
//! the smallest index wins ties. Objectives within `1e-12` of the minimum are
//! reported in [`Selection::tied_indices`].

use crate::bounds::ClassComplexity;
use crate::error::{check_delta, check_min_n, param, Error, Result};
use crate::stats::{mean_of, variance_of, LossMatrix, Sample};

/// Width of the window used when reporting ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub objective: f64,
    pub tied_indices: Vec<usize>,
    pub lambda: f64,
}

/// Constants used by the excess-risk certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CertificateMode {
    /// Uniform bound through `M(n) = 10 N∞(1/n, F, 2n)`:
    /// `λ = √(18 L)`, bound `√(32 V* L / n) + 22 L / (n-1)`, `L = ln(3M(n)/δ)`.
    #[default]
    Uniform,
    /// Finite class via the union-bound empirical Bernstein radius, `M = 2|F|`:
    /// `λ = √(2 L)`, bound `√(8 V* L / n) + 14 L / (3(n-1))`, `L = ln(6|F|/δ)`.
    FiniteClass,
}

/// Right-hand side of the SVP excess-risk guarantee relative to a fixed
/// reference hypothesis `f*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcessRiskCertificate {
    pub bound: f64,
    pub delta: f64,
    pub lambda: f64,
    pub reference_variance: f64,
    pub n: usize,
    pub mode: CertificateMode,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        param(format!("lambda must be finite and nonnegative, got {lambda}"))
    }
}

fn objective_of(values: &[f64], lambda: f64) -> Result<f64> {
    let mean = mean_of(values);
    if lambda == 0.0 {
        return Ok(mean);
    }
    if values.len() < 2 {
        return param("variance penalization with lambda > 0 requires n >= 2");
    }
    let var = variance_of(values)?;
    Ok(mean + lambda * (var / values.len() as f64).sqrt())
}

/// `P_n + λ √(V_n / n)` for one hypothesis.
pub fn svp_objective(s: &Sample, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    objective_of(s.values(), lambda)
}

fn argmin(objectives: &[f64], lambda: f64) -> Selection {
    let (index, objective) =
        objectives
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (j, v)| if v < best.1 { (j, v) } else { best });
    let tied_indices =
        objectives.iter().enumerate().filter(|(_, &v)| v - objective <= TIE_TOLERANCE).map(|(j, _)| j).collect();
    Selection { index, objective, tied_indices, lambda }
}

pub fn erm_select(m: &LossMatrix) -> Selection {
    let objectives: Vec<f64> = (0..m.cols()).map(|j| mean_of(m.column(j).expect("column in range"))).collect();
    argmin(&objectives, 0.0)
}

pub fn svp_select(m: &LossMatrix, lambda: f64) -> Result<Selection> {
    check_lambda(lambda)?;
    let objectives = (0..m.cols()).map(|j| objective_of(m.column(j)?, lambda)).collect::<Result<Vec<f64>>>()?;
    Ok(argmin(&objectives, lambda))
}

fn ln_three_m_over_delta(n: usize, delta: f64, complexity: &ClassComplexity, mode: CertificateMode) -> Result<f64> {
    check_delta(delta)?;
    let ln_m = match mode {
        CertificateMode::Uniform => complexity.ln_m(n)?,
        CertificateMode::FiniteClass => match complexity {
            ClassComplexity::Finite(_) => std::f64::consts::LN_2 + complexity.ln_size(n)?,
            ClassComplexity::LogCover(_) => {
                return param("finite-class certificate requires a finite hypothesis class")
            }
        },
    };
    Ok(3f64.ln() + ln_m - delta.ln())
}

/// Regularization parameter for which the excess-risk certificate holds.
pub fn svp_lambda_prescription(
    n: usize,
    delta: f64,
    complexity: &ClassComplexity,
    mode: CertificateMode,
) -> Result<f64> {
    let l = ln_three_m_over_delta(n, delta, complexity, mode)?;
    Ok(match mode {
        CertificateMode::Uniform => (18.0 * l).sqrt(),
        CertificateMode::FiniteClass => (2.0 * l).sqrt(),
    })
}

/// With probability `>= 1 - δ`, SVP run with [`svp_lambda_prescription`]
/// has risk at most `P(f*) + bound`, where `reference_variance = V(f*, μ)`.
pub fn svp_excess_risk_bound(
    n: usize,
    delta: f64,
    reference_variance: f64,
    complexity: &ClassComplexity,
    mode: CertificateMode,
) -> Result<ExcessRiskCertificate> {
    check_min_n(n, 2, "the SVP excess risk bound")?;
    if !(reference_variance >= 0.0) || !reference_variance.is_finite() {
        return param(format!("reference variance must be nonnegative, got {reference_variance}"));
    }
    let l = ln_three_m_over_delta(n, delta, complexity, mode)?;
    let nf = n as f64;
    let bound = match mode {
        CertificateMode::Uniform => (32.0 * reference_variance * l / nf).sqrt() + 22.0 * l / (nf - 1.0),
        CertificateMode::FiniteClass => (8.0 * reference_variance * l / nf).sqrt() + 14.0 * l / (3.0 * (nf - 1.0)),
    };
    if !bound.is_finite() {
        return Err(Error::Parameter(format!("excess risk bound overflowed ({bound})")));
    }
    Ok(ExcessRiskCertificate {
        bound,
        delta,
        lambda: svp_lambda_prescription(n, delta, complexity, mode)?,
        reference_variance,
        n,
        mode,
    })
}
