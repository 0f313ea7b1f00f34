use std::collections::hash_map::RandomState;
use std::fs::File;
use std::hash::{BuildHasher, Hasher};
use std::io::{self, BufWriter, Read, Write};

use serde_json::json;
use svp_core::bounds::{
    bennett_radius, empirical_bernstein_finite_class_radius, empirical_bernstein_radius,
    empirical_bernstein_uniform_radius, hoeffding_finite_class_radius, hoeffding_radius, stdev_lower_radius,
    stdev_upper_radius, ClassComplexity,
};
use svp_core::compression::{
    compress_select, compression_excess_bound, compression_lambda, enumerate_subsets, DiscreteLabels,
    SubsetMeanTrainer, Trainer,
};
use svp_core::experiments::{
    parse_sizes, run_coverage_suite, run_toy_experiment, run_two_hypothesis_experiment, trial_rng, CoverageKind,
    DistSpec, EpsilonRule, ToyConfig, TwoHypothesisConfig,
};
use svp_core::learners::svp_select;
use svp_core::report::{format_sig, read_loss_matrix_csv, write_coverage_csv, write_experiment_csv, TEXT_DIGITS};

use crate::{
    BoundArgs, CliError, CompressArgs, CoverageArgs, KindArg, SeedArgs, SelectArgs, ToyArgs, TwoHypothesisArgs,
};

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

fn text(x: f64) -> String {
    format_sig(x, TEXT_DIGITS)
}

fn required<T: Copy>(value: Option<T>, flag: &str, kind: KindArg) -> Result<T> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("--{flag} is required for --kind {}", kind_name(kind))),
    }
}

fn kind_name(kind: KindArg) -> String {
    use clap::ValueEnum;
    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

pub fn bound(a: &BoundArgs) -> Result<()> {
    let k = a.kind;
    let r = match k {
        KindArg::Hoeffding => hoeffding_radius(a.n, a.delta)?,
        KindArg::Bennett => bennett_radius(a.n, a.delta, required(a.variance, "variance", k)?)?,
        KindArg::EmpiricalBernstein => {
            empirical_bernstein_radius(a.n, a.delta, required(a.sample_variance, "sample-variance", k)?)?
        }
        KindArg::StdevUpper => stdev_upper_radius(a.n, a.delta)?,
        KindArg::StdevLower => stdev_lower_radius(a.n, a.delta)?,
        KindArg::UniformEb => empirical_bernstein_uniform_radius(
            a.n,
            a.delta,
            required(a.sample_variance, "sample-variance", k)?,
            &ClassComplexity::finite(required(a.cardinality, "cardinality", k)?),
        )?,
        KindArg::FiniteClassHoeffding => {
            hoeffding_finite_class_radius(a.n, a.delta, required(a.cardinality, "cardinality", k)?)?
        }
        KindArg::FiniteClassEb => empirical_bernstein_finite_class_radius(
            a.n,
            a.delta,
            required(a.sample_variance, "sample-variance", k)?,
            required(a.cardinality, "cardinality", k)?,
        )?,
    };
    if a.json {
        println!("{}", json!({ "kind": r.kind.to_string(), "n": r.n, "delta": r.delta, "radius": r.radius }));
    } else {
        println!("{}", text(r.radius));
    }
    Ok(())
}

pub fn select(a: &SelectArgs) -> Result<()> {
    let m = if a.input == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        read_loss_matrix_csv(buf.as_slice())?
    } else {
        let f = File::open(&a.input).map_err(|e| CliError::Input(format!("cannot read {}: {e}", a.input)))?;
        read_loss_matrix_csv(io::BufReader::new(f))?
    };
    let sel = svp_select(&m, a.lambda)?;
    let column = m.column_sample(sel.index)?;
    let mean = column.mean();
    // Radius and variance need two observations; report them only when defined.
    let variance = column.variance().ok();
    let radius = match variance {
        Some(v) => Some(empirical_bernstein_radius(m.rows(), a.delta, v)?.radius),
        None => None,
    };
    if a.json {
        println!(
            "{}",
            json!({
                "index": sel.index,
                "objective": sel.objective,
                "ties": sel.tied_indices,
                "lambda": sel.lambda,
                "mean": mean,
                "sample_variance": variance,
                "delta": a.delta,
                "empirical_bernstein_radius": radius,
            })
        );
        return Ok(());
    }
    let na = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), text);
    let ties = sel.tied_indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    println!("index {}", sel.index);
    println!("objective {}", text(sel.objective));
    println!("ties {ties}");
    println!("mean {}", text(mean));
    println!("sample_variance {}", na(variance));
    println!("empirical_bernstein_radius {}", na(radius));
    Ok(())
}

fn master_seed(seed: u64, entropy: bool) -> u64 {
    if !entropy {
        return seed;
    }
    let s = RandomState::new().build_hasher().finish();
    eprintln!("seed {s}");
    s
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => usage("--threads must be at least 1"),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn output(path: &Option<String>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Input(format!("cannot write {p}: {e}")))?))
        }
    })
}

fn sizes(spec: &str) -> Result<Vec<usize>> {
    parse_sizes(spec).map_err(CliError::Usage)
}

pub fn coverage(a: &CoverageArgs) -> Result<()> {
    let dist: DistSpec = a.dist.parse().map_err(|e: svp_core::Error| CliError::Usage(e.to_string()))?;
    let kinds = if a.kind == "all" {
        CoverageKind::ALL.to_vec()
    } else {
        vec![a.kind.parse().map_err(|e: svp_core::Error| CliError::Usage(e.to_string()))?]
    };
    let s = &a.seed;
    let seed = master_seed(s.seed, s.entropy);
    let reports = with_pool(s.threads, || run_coverage_suite(dist, &kinds, a.n, a.delta, a.trials, seed))??;
    write_coverage_csv(&reports, output(&s.out)?)?;
    Ok(())
}

fn experiment_output(s: &SeedArgs, records: &[svp_core::experiments::ExperimentRecord]) -> Result<()> {
    write_experiment_csv(records, output(&s.out)?)?;
    Ok(())
}

pub fn toy(a: &ToyArgs) -> Result<()> {
    let mut lambdas = vec![0.0];
    lambdas.extend(a.lambda.iter().copied().filter(|&l| l != 0.0));
    let cfg = ToyConfig {
        spread: a.spread,
        hypotheses: a.hypotheses,
        lambdas,
        sizes: sizes(&a.sizes)?,
        trials: if a.full { 10_000 } else { a.trials },
        master_seed: master_seed(a.seed.seed, a.seed.entropy),
    };
    cfg.validate()?;
    let records = with_pool(a.seed.threads, || run_toy_experiment(&cfg))??;
    experiment_output(&a.seed, &records)
}

pub fn two_hypothesis(a: &TwoHypothesisArgs) -> Result<()> {
    let epsilon = match a.epsilon.as_str() {
        "inverse-sqrt" => EpsilonRule::InverseSqrt,
        e => EpsilonRule::Constant(
            e.parse().map_err(|_| CliError::Usage(format!("--epsilon must be a number or inverse-sqrt, got {e:?}")))?,
        ),
    };
    let cfg = TwoHypothesisConfig {
        epsilon,
        sizes: sizes(&a.sizes)?,
        lambda: a.lambda,
        trials: a.trials,
        master_seed: master_seed(a.seed.seed, a.seed.entropy),
    };
    let records = with_pool(a.seed.threads, || run_two_hypothesis_experiment(&cfg))??;
    experiment_output(&a.seed, &records)
}

fn parse_labels(spec: &str) -> Result<DiscreteLabels> {
    let bad = || CliError::Usage(format!("--labels expects value:prob pairs, got {spec:?}"));
    let mut support = Vec::new();
    let mut probs = Vec::new();
    for pair in spec.split(',') {
        let (v, p) = pair.split_once(':').ok_or_else(bad)?;
        support.push(v.trim().parse::<f64>().map_err(|_| bad())?);
        probs.push(p.trim().parse::<f64>().map_err(|_| bad())?);
    }
    Ok(DiscreteLabels::new(support, probs)?)
}

pub fn compress_demo(a: &CompressArgs) -> Result<()> {
    let labels = parse_labels(&a.labels)?;
    let lambda = compression_lambda(a.n, a.d, a.delta)?;
    let mut rng = trial_rng(master_seed(a.seed, a.entropy), 0);
    let data: Vec<f64> = (0..a.n).map(|_| labels.sample(&mut rng)).collect();
    let sel = compress_select(&data, &SubsetMeanTrainer, a.d, lambda, a.cap)?;
    let chosen = SubsetMeanTrainer.train(&data, &sel.chosen_subset);

    // Best subset by true risk; its loss variance is the bound's reference.
    let (best_risk, best_var) = enumerate_subsets(a.n, a.d, a.cap)?
        .map(|s| {
            let p = SubsetMeanTrainer.train(&data, &s);
            (labels.risk(&p), labels.loss_variance(&p))
        })
        .fold((f64::INFINITY, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc });
    let bound = compression_excess_bound(a.n, a.d, a.delta, best_var)?;
    let risk = labels.risk(&chosen);
    let subset = sel.chosen_subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    println!("candidates {}", sel.num_candidates);
    println!("lambda {}", text(lambda));
    println!("chosen_subset {subset}");
    println!("prediction {}", text(chosen.prediction));
    println!("objective {}", text(sel.objective));
    println!("complement_mean {}", text(sel.complement_mean));
    println!("risk {}", text(risk));
    println!("best_risk {}", text(best_risk));
    println!("excess_risk {}", text(risk - best_risk));
    println!("bound {}", text(bound));
    Ok(())
}
