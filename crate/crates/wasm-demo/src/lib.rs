//! WebAssembly bindings for the static page in `www/`.
//!
//! Every export returns a flat `Float64Array` with a fixed number of values
//! per row; the page slices it back into series.

use svp_core::bounds::{bennett_radius, empirical_bernstein_radius, hoeffding_radius};
use svp_core::experiments::{
    parse_sizes, run_toy_experiment, run_two_hypothesis_experiment, slud_lower_bound, EpsilonRule, Method, ToyConfig,
    TwoHypothesisConfig,
};
use wasm_bindgen::prelude::*;

/// Demo runs are capped so a click never freezes the tab for long.
const MAX_WORK: usize = 60_000_000;

/// Rows `[n, hoeffding, bennett, empirical_bernstein]` for `n = 2..=n_max`.
/// Bennett uses `variance` as the true variance; the empirical Bernstein
/// radius plugs in the same value as the sample variance.
pub fn radius_rows(delta: f64, variance: f64, n_max: usize) -> Result<Vec<f64>, String> {
    if !(2..=100_000).contains(&n_max) {
        return Err(format!("n_max must lie in [2, 100000], got {n_max}"));
    }
    let mut out = Vec::with_capacity(4 * (n_max - 1));
    for n in 2..=n_max {
        out.push(n as f64);
        out.push(hoeffding_radius(n, delta).map_err(|e| e.to_string())?.radius);
        out.push(bennett_radius(n, delta, variance).map_err(|e| e.to_string())?.radius);
        out.push(empirical_bernstein_radius(n, delta, variance).map_err(|e| e.to_string())?.radius);
    }
    Ok(out)
}

/// Rows `[n, erm_excess, svp_excess]` from the coordinate-selection experiment.
pub fn toy_rows(
    spread: f64,
    hypotheses: usize,
    lambda: f64,
    trials: usize,
    sizes: &str,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let sizes = parse_sizes(sizes)?;
    let work = trials.saturating_mul(hypotheses).saturating_mul(sizes.iter().sum());
    if work > MAX_WORK {
        return Err(format!("run too large for the demo ({work} draws, limit {MAX_WORK})"));
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(format!("lambda must be positive, got {lambda}"));
    }
    let cfg = ToyConfig { spread, hypotheses, lambdas: vec![0.0, lambda], sizes, trials, master_seed: seed };
    let recs = run_toy_experiment(&cfg).map_err(|e| e.to_string())?;
    Ok(recs
        .chunks(2)
        .flat_map(|pair| [pair[0].sample_size as f64, pair[0].mean_excess_risk, pair[1].mean_excess_risk])
        .collect())
}

/// Rows `[n, erm_rate, svp_rate, normal_lower_bound]` for the two-hypothesis
/// task with `ε(n) = 1/√(8n)`.
pub fn two_hypothesis_rows(lambda: f64, trials: usize, sizes: &str, seed: u64) -> Result<Vec<f64>, String> {
    let sizes = parse_sizes(sizes)?;
    let work = trials.saturating_mul(sizes.iter().sum());
    if work > MAX_WORK {
        return Err(format!("run too large for the demo ({work} draws, limit {MAX_WORK})"));
    }
    let cfg = TwoHypothesisConfig { epsilon: EpsilonRule::InverseSqrt, sizes, lambda, trials, master_seed: seed };
    let recs = run_two_hypothesis_experiment(&cfg).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * recs.len());
    for pair in recs.chunks(2) {
        let (erm, svp) = (&pair[0], &pair[1]);
        debug_assert!(erm.method == Method::Erm && svp.method == Method::Svp);
        let n = erm.sample_size;
        let eps = EpsilonRule::InverseSqrt.epsilon(n);
        let slud = slud_lower_bound(n, 0.5 - eps, n as f64 / 2.0).map_err(|e| e.to_string())?;
        out.extend([
            n as f64,
            erm.misselection_rate.unwrap_or(f64::NAN),
            svp.misselection_rate.unwrap_or(f64::NAN),
            slud,
        ]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = radiusCurves)]
pub fn radius_curves(delta: f64, variance: f64, n_max: usize) -> Result<Vec<f64>, JsError> {
    radius_rows(delta, variance, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = toyExperiment)]
pub fn toy_experiment(
    spread: f64,
    hypotheses: usize,
    lambda: f64,
    trials: usize,
    sizes: &str,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    toy_rows(spread, hypotheses, lambda, trials, sizes, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = twoHypothesis)]
pub fn two_hypothesis(lambda: f64, trials: usize, sizes: &str, seed: u64) -> Result<Vec<f64>, JsError> {
    two_hypothesis_rows(lambda, trials, sizes, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_rows_layout() {
        let rows = radius_rows(0.1, 0.25, 101).unwrap();
        assert_eq!(rows.len(), 4 * 100);
        let last = &rows[rows.len() - 4..];
        assert_eq!(last[0], 101.0);
        assert_eq!(last[3], empirical_bernstein_radius(101, 0.1, 0.25).unwrap().radius);
        assert!(radius_rows(0.1, 0.25, 1).is_err());
        assert!(radius_rows(2.0, 0.25, 10).is_err());
    }

    #[test]
    fn toy_rows_layout() {
        let rows = toy_rows(0.25, 20, 2.5, 10, "10,20", 1).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[0], rows[3]), (10.0, 20.0));
        assert!(rows.iter().all(|v| *v >= 0.0));
        assert!(toy_rows(0.25, 500, 2.5, 10_000, "10:500:10", 1).is_err());
        assert!(toy_rows(0.25, 20, 0.0, 10, "10", 1).is_err());
    }

    #[test]
    fn two_hypothesis_rows_layout() {
        let rows = two_hypothesis_rows(2.5, 2000, "128", 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], 128.0);
        assert!(rows[1] > rows[2]);
        assert!((rows[3] - 0.2393).abs() < 1e-3);
    }
}
