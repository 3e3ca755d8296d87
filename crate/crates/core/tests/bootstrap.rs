mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use shapeboot::bootstrap::{
    derive_seed, draw_weights, m_of_n_ci, multinomial_counts, naive_draw, naive_draws,
    percentile_ci, reshaped_draw, run_ci_pipeline, stream_rng, BootstrapMode, BootstrapPlan,
    WeightScheme,
};
use shapeboot::estimators::{generalized_grenander, Dataset};
use shapeboot::mc::{generate_dgp, DgpModel, EVAL_POINT};
use shapeboot::mean_function::{build_perturbation, QMode};
use shapeboot::Error;

fn model1_data(n: usize, seed: u64) -> Dataset<f64> {
    let (x, y) = generate_dgp(&DgpModel::new(1).unwrap(), n, &mut stream_rng(seed, 0));
    Dataset::Isoreg { x, y }
}

fn all_kinds(seed: u64) -> Vec<Dataset<f64>> {
    let mut rng = common::rng(seed);
    let n = 60;
    let samples: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
    let times = samples.clone();
    let is_event: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.7).collect();
    let check: Vec<f64> = (0..n).map(|_| 3.0 * rng.random::<f64>()).collect();
    let ind: Vec<f64> = check
        .iter()
        .map(|&c| f64::from(u8::from(rng.random::<f64>() < 1.0 - (-c).exp())))
        .collect();
    let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let y: Vec<f64> = x.iter().map(|&v| v * v + 0.1 * rng.sample::<f64, _>(StandardNormal)).collect();
    vec![
        Dataset::Density { samples },
        Dataset::Isoreg { x, y },
        Dataset::CensoredDensity { times: times.clone(), is_event: is_event.clone() },
        Dataset::Hazard { times, is_event },
        Dataset::CurrentStatus { check_times: check, indicators: ind },
    ]
}

#[test]
fn weight_second_moment() {
    let n = 50;
    let nf = n as f64;
    for (scheme, want) in [
        (WeightScheme::Multinomial, 1.0 - 1.0 / nf),
        (WeightScheme::Dirichlet, (nf - 1.0) / (nf + 1.0)),
    ] {
        let mut rng = common::rng(11);
        let reps = 100_000;
        let mut acc = 0.0;
        for _ in 0..reps {
            let w: Vec<f64> = draw_weights(scheme, n, &mut rng);
            acc += w.iter().map(|v| (v - 1.0) * (v - 1.0)).sum::<f64>() / n as f64;
        }
        let m = acc / reps as f64;
        assert!((m - want).abs() < 0.005, "{scheme:?}: {m} vs {want}");
    }
}

#[test]
fn normal_draws_reproduce_normal_quantiles() {
    let mut rng = common::rng(3);
    let draws: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
    let ci = percentile_ci(&draws, 0.0, 0.05).unwrap();
    assert!((ci.lo + 1.96).abs() < 0.02 && (ci.hi - 1.96).abs() < 0.02, "{ci:?}");
}

#[test]
fn single_replication_is_degenerate() {
    let data = model1_data(200, 4);
    let plan = BootstrapPlan { replications: 1, seed: 9, ..BootstrapPlan::default() };
    let ci = run_ci_pipeline(&data, EVAL_POINT, &plan).unwrap();
    assert_eq!(ci.lo, ci.hi);
    assert_eq!(ci.summary.count, 1);
}

#[test]
fn pipeline_is_thread_count_invariant() {
    let data = model1_data(300, 5);
    let plan = BootstrapPlan { replications: 200, seed: 17, ..BootstrapPlan::default() };
    let run = |t| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .unwrap()
            .install(|| run_ci_pipeline(&data, EVAL_POINT, &plan).unwrap())
    };
    let a = run(1);
    assert_eq!(a, run(3));
    assert_eq!(a, run(8));
}

#[test]
fn full_subsample_with_unit_exponent_is_the_naive_bootstrap() {
    let data = model1_data(150, 6);
    let model = data.build(EVAL_POINT).unwrap();
    let th = generalized_grenander(&model).unwrap();
    let plan = BootstrapPlan { replications: 300, seed: 21, mode: BootstrapMode::Naive, ..BootstrapPlan::default() };
    let naive = percentile_ci(&naive_draws(&model, th, &plan).unwrap(), th, plan.alpha).unwrap();
    let moon = m_of_n_ci(&model, th, 150, 1, plan.alpha, 300, 21, plan.grid_points).unwrap();
    assert!((naive.lo - moon.lo).abs() < 1e-12 && (naive.hi - moon.hi).abs() < 1e-12);
}

#[test]
fn subsample_size_is_checked() {
    let data = model1_data(50, 7);
    let model = data.build(EVAL_POINT).unwrap();
    let th = generalized_grenander(&model).unwrap();
    for m in [0, 51] {
        assert!(matches!(
            m_of_n_ci(&model, th, m, 1, 0.05, 10, 1, 256),
            Err(Error::BadSubsampleSize { .. })
        ));
    }
    let plan = BootstrapPlan {
        mode: BootstrapMode::MOutOfN { m: None },
        q_mode: QMode::Robust(3),
        ..BootstrapPlan::default()
    };
    assert!(run_ci_pipeline(&data, EVAL_POINT, &plan).is_err());
}

#[test]
fn constant_response_collapses_the_interval() {
    let x: Vec<f64> = (0..80).map(|i| (i as f64 + 0.5) / 80.0).collect();
    let data = Dataset::Isoreg { y: vec![1.25; 80], x };
    let model = data.build(0.5).unwrap();
    let th = generalized_grenander(&model).unwrap();
    let ci = m_of_n_ci(&model, th, 9, 1, 0.05, 50, 3, 256).unwrap();
    assert_eq!((ci.lo, ci.hi), (th, th));
    let plan = BootstrapPlan { replications: 50, mode: BootstrapMode::Naive, ..BootstrapPlan::default() };
    let ci = run_ci_pipeline(&data, 0.5, &plan).unwrap();
    assert_eq!((ci.lo, ci.hi), (1.25, 1.25));
}

#[test]
fn model_one_interval_is_sane() {
    let data = model1_data(500, 8);
    let plan = BootstrapPlan { replications: 400, seed: 2, ..BootstrapPlan::default() };
    let ci = run_ci_pipeline(&data, EVAL_POINT, &plan).unwrap();
    assert!(ci.length() > 0.0 && ci.length() < 3.0, "{ci:?}");
    assert!(ci.contains(ci.theta_hat));
    assert!(ci.d_estimates.contains_key(&1) && ci.d_estimates.contains_key(&3));
}

#[test]
fn unit_weights_reproduce_the_estimate() {
    let plan = BootstrapPlan::default();
    for seed in 0..3 {
        for data in all_kinds(seed) {
            let x0 = match &data {
                Dataset::Isoreg { .. } => 0.5,
                _ => 0.6,
            };
            let model = data.build(x0).unwrap();
            let th = generalized_grenander(&model).unwrap();
            let w = vec![1.0; model.n()];
            let nv = naive_draw(&model, &w, &plan).unwrap();
            assert!((nv - th).abs() <= 1e-12 * th.abs().max(1.0), "{:?}: {nv} vs {th}", model.kind());
            let zero = build_perturbation(&BTreeMap::from([(1, 0.0)]), QMode::Known(1)).unwrap();
            let rv = reshaped_draw(&model, th, &zero, &w, &plan).unwrap();
            assert!((rv - th).abs() <= 1e-12 * th.abs().max(1.0), "{:?}: {rv} vs {th}", model.kind());
        }
    }
}

#[test]
fn all_mass_on_one_point() {
    let data = model1_data(40, 9);
    let model = data.build(EVAL_POINT).unwrap();
    let mut w = vec![0.0; 40];
    w[17] = 40.0;
    match naive_draw(&model, &w, &BootstrapPlan::default()) {
        Ok(v) => assert!(v.is_finite()),
        Err(e) => assert!(matches!(e, Error::InvalidData(_) | Error::AboveRange(_) | Error::BoundaryEvaluation(_)), "{e:?}"),
    }
}

proptest! {
    #[test]
    fn multinomial_weights_sum_to_n(n in 1usize..200, seed in any::<u64>()) {
        let w: Vec<f64> = multinomial_counts(n, n, &mut stream_rng(seed, 0));
        prop_assert_eq!(w.iter().sum::<f64>(), n as f64);
        prop_assert!(w.iter().all(|v| *v >= 0.0 && v.fract() == 0.0));
    }

    #[test]
    fn dirichlet_weights_sum_to_n(n in 1usize..200, seed in any::<u64>()) {
        let w: Vec<f64> = draw_weights(WeightScheme::Dirichlet, n, &mut stream_rng(seed, 0));
        prop_assert!((w.iter().sum::<f64>() - n as f64).abs() < 1e-9 * n as f64);
    }

    #[test]
    fn ci_shifts_with_the_estimate(
        draws in prop::collection::vec(-5.0f64..5.0, 1..60),
        th in -10.0f64..10.0,
        c in -10.0f64..10.0,
    ) {
        let a = percentile_ci(&draws, th, 0.1).unwrap();
        let b = percentile_ci(&draws, th + c, 0.1).unwrap();
        prop_assert!((b.lo - a.lo - c).abs() < 1e-9);
        prop_assert!((b.hi - a.hi - c).abs() < 1e-9);
        prop_assert!(a.lo <= a.hi);
    }

    #[test]
    fn symmetric_draws_give_symmetric_intervals(
        half in prop::collection::vec(0.0f64..5.0, 1..10),
        th in -3.0f64..3.0,
    ) {
        let draws: Vec<f64> = half.iter().flat_map(|&v| [v, -v]).collect();
        let ci = percentile_ci(&draws, th, 0.1).unwrap();
        prop_assert!(((ci.lo + ci.hi) / 2.0 - th).abs() < 1e-9);
    }

    #[test]
    fn derived_seeds_differ(seed in any::<u64>(), a in 0u64..1000, b in 0u64..1000) {
        prop_assume!(a != b);
        prop_assert_ne!(derive_seed(seed, &[a]), derive_seed(seed, &[b]));
    }
}
