use proptest::collection::vec;
use proptest::prelude::*;

use svp_core::bounds::{
    bennett_radius, empirical_bernstein_finite_class_radius, empirical_bernstein_radius,
    empirical_bernstein_uniform_radius, hoeffding_radius, ClassComplexity,
};
use svp_core::compression::{complement_statistics, compress_select, SubsetMeanTrainer, Trainer};
use svp_core::learners::{erm_select, svp_objective, svp_select};
use svp_core::stats::{pairwise_variance, sample_variance, self_bounding_moment_check, LossMatrix, Sample};

fn unit_vec(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(prop_oneof![3 => 0.0..=1.0f64, 1 => Just(0.0), 1 => Just(1.0)], min..=max)
}

fn loss_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = LossMatrix> {
    (2..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        vec(0.0..=1.0f64, r * c).prop_map(move |data| LossMatrix::from_column_major(r, c, data).unwrap())
    })
}

proptest! {
    #[test]
    fn two_pass_matches_pairwise(v in unit_vec(2, 60)) {
        let s = Sample::new(v.clone()).unwrap();
        let a = sample_variance(&s).unwrap();
        prop_assert!((a - pairwise_variance(&v).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn variance_is_bounded(v in unit_vec(2, 60)) {
        let n = v.len() as f64;
        let var = sample_variance(&Sample::new(v).unwrap()).unwrap();
        prop_assert!(var >= 0.0);
        prop_assert!(var <= n / (4.0 * (n - 1.0)) + 1e-12);
    }

    #[test]
    fn variance_shift_and_scale(v in vec(-5.0..5.0f64, 2..40), c in -3.0..3.0f64, a in -4.0..4.0f64) {
        let base = pairwise_variance(&v).unwrap();
        let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
        let scaled: Vec<f64> = v.iter().map(|x| a * x).collect();
        prop_assert!((pairwise_variance(&shifted).unwrap() - base).abs() <= 1e-9 * (1.0 + base));
        prop_assert!((pairwise_variance(&scaled).unwrap() - a * a * base).abs() <= 1e-9 * (1.0 + a * a * base));
    }

    #[test]
    fn moment_check_holds(v in unit_vec(2, 50)) {
        prop_assert!(self_bounding_moment_check(&Sample::new(v).unwrap()));
    }

    #[test]
    fn radii_shrink_with_confidence_and_n(n in 2usize..2000, d1 in 0.001..0.5f64, d2 in 0.001..0.5f64, var in 0.0..=0.25f64) {
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        for f in [
            |n, d, _v| hoeffding_radius(n, d).unwrap().radius,
            |n, d, v| bennett_radius(n, d, v).unwrap().radius,
            |n, d, v| empirical_bernstein_radius(n, d, v).unwrap().radius,
        ] as [fn(usize, f64, f64) -> f64; 3] {
            prop_assert!(f(n, lo, var) >= f(n, hi, var));
            prop_assert!(f(n + 1, lo, var) <= f(n, lo, var));
        }
    }

    #[test]
    fn eb_variance_term_below_hoeffding_scale(n in 2usize..5000, delta in 0.001..0.5f64, var in 0.0..=0.25f64) {
        let nf = n as f64;
        let l = (2.0 / delta).ln();
        let eb = empirical_bernstein_radius(n, delta, var).unwrap().radius;
        prop_assert!(eb - 7.0 * l / (3.0 * (nf - 1.0)) <= (l / (2.0 * nf)).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn uniform_bound_dominates_finite_class(n in 16usize..3000, delta in 0.001..0.5f64, var in 0.0..=0.25f64, k in 1u64..10_000) {
        let uniform = empirical_bernstein_uniform_radius(n, delta, var, &ClassComplexity::finite(k)).unwrap().radius;
        let finite = empirical_bernstein_finite_class_radius(n, delta, var, k).unwrap().radius;
        prop_assert!(uniform >= finite);
    }

    #[test]
    fn zero_lambda_is_erm(m in loss_matrix(30, 12)) {
        let erm = erm_select(&m);
        let svp = svp_select(&m, 0.0).unwrap();
        prop_assert_eq!(erm.index, svp.index);
        prop_assert_eq!(erm.objective, svp.objective);
    }

    #[test]
    fn selection_minimizes_objective(m in loss_matrix(30, 12), lambda in 0.0..10.0f64) {
        let sel = svp_select(&m, lambda).unwrap();
        for j in 0..m.cols() {
            let obj = svp_objective(&m.column_sample(j).unwrap(), lambda).unwrap();
            prop_assert!(sel.objective <= obj);
            if j < sel.index {
                prop_assert!(obj > sel.objective);
            }
        }
    }

    #[test]
    fn selection_invariant_under_affine_map(m in loss_matrix(30, 8), lambda in 0.0..5.0f64) {
        // x -> x/2 + 1/4 maps every objective o to o/2 + 1/4, so the selected
        // index is unchanged away from near-ties.
        let sel = svp_select(&m, lambda).unwrap();
        let runner_up = (0..m.cols())
            .filter(|&j| j != sel.index)
            .map(|j| svp_objective(&m.column_sample(j).unwrap(), lambda).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(runner_up - sel.objective > 1e-9);
        let shifted = LossMatrix::from_column_major(
            m.rows(),
            m.cols(),
            (0..m.cols()).flat_map(|j| m.column(j).unwrap().iter().map(|x| x * 0.5 + 0.25).collect::<Vec<_>>()).collect(),
        )
        .unwrap();
        prop_assert_eq!(svp_select(&shifted, lambda).unwrap().index, sel.index);
    }

    #[test]
    fn selection_follows_column_permutation(m in loss_matrix(20, 8), lambda in 0.0..5.0f64, rot in 0usize..8) {
        let k = m.cols();
        let rot = rot % k;
        let sel = svp_select(&m, lambda).unwrap();
        prop_assume!(sel.tied_indices.len() == 1);
        let cols: Vec<Vec<f64>> = (0..k).map(|j| m.column((j + rot) % k).unwrap().to_vec()).collect();
        let permuted = LossMatrix::from_columns(cols).unwrap();
        let psel = svp_select(&permuted, lambda).unwrap();
        prop_assert_eq!((psel.index + rot) % k, sel.index);
    }

    #[test]
    fn zero_lambda_compression_matches_brute_force(labels in vec(0.0..=1.0f64, 3..12), d in 1usize..3) {
        prop_assume!(labels.len() >= d + 2);
        let n = labels.len();
        let trainer = SubsetMeanTrainer;
        let got = compress_select(&labels, &trainer, d, 0.0, 1_000_000).unwrap();
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let p = trainer.train(&labels, &subset);
            let (sum, count) = (0..n)
                .filter(|i| !subset.contains(i))
                .fold((0.0, 0usize), |(s, c), i| (s + (labels[i] - p.prediction).abs(), c + 1));
            let mean = sum / count as f64;
            if best.as_ref().is_none_or(|b| mean < b.0 - 1e-12) {
                best = Some((mean, subset.clone()));
            }
            // Next combination in lexicographic order.
            let Some(i) = (0..d).rev().find(|&i| subset[i] < n - d + i) else { break };
            subset[i] += 1;
            for j in i + 1..d {
                subset[j] = subset[j - 1] + 1;
            }
        }
        let (mean, subset) = best.unwrap();
        prop_assert!((got.complement_mean - mean).abs() <= 1e-12);
        let (m, _) = complement_statistics(&labels, &got.chosen_subset, &trainer.train(&labels, &got.chosen_subset)).unwrap();
        prop_assert!((m - mean).abs() <= 1e-12);
        if got.chosen_subset != subset {
            // Only acceptable when the two subsets tie to rounding.
            let (alt, _) = complement_statistics(&labels, &subset, &trainer.train(&labels, &subset)).unwrap();
            prop_assert!((alt - m).abs() <= 1e-12);
        }
    }
}
