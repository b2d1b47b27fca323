use grsklab::arrays::IndexSet;
use grsklab::sampling::{mc_laplace, mc_laplace_streams, sample_array, MCEstimate, ParameterSet};
use grsklab::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Mean and standard error of a sample.
fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn inverse_weights_have_gamma_means() {
    // 1/w ~ Gamma(alpha + alphahat): mean alpha + alphahat, here 1.5 and 0.7.
    let p = ParameterSet::new(vec![0.3; 300], vec![1.2; 150].into_iter().chain(vec![0.4; 150]).collect()).unwrap();
    let w = sample_array(&IndexSet::rectangle(300, 300).unwrap(), &p, 17).unwrap();
    for (cols, rate) in [(1..=150, 1.5), (151..=300, 0.7)] {
        let inv: Vec<f64> = (1..=300).flat_map(|i| cols.clone().map(move |j| (i, j))).map(|(i, j)| 1.0 / w.at(i, j)).collect();
        let (mean, se) = moments(&inv);
        assert!((mean - rate).abs() < 4.0 * se, "rate {rate}: {mean} +- {se}");
    }
}

#[test]
fn weights_have_inverse_gamma_means() {
    // E[w] = 1/(a - 1) for a > 1; a = 3.5 keeps the variance finite.
    let p = ParameterSet::homogeneous(400, 400, 3.5).unwrap();
    let w = sample_array(&IndexSet::rectangle(400, 400).unwrap(), &p, 3).unwrap();
    let xs: Vec<f64> = w.values().copied().collect();
    let (mean, se) = moments(&xs);
    assert!((mean - 0.4).abs() < 4.0 * se, "{mean} +- {se}");
}

#[test]
fn small_shapes_sample_correctly() {
    // Shape below one exercises the boosted sampler.
    let p = ParameterSet::homogeneous(300, 300, 0.35).unwrap();
    let w = sample_array(&IndexSet::rectangle(300, 300).unwrap(), &p, 8).unwrap();
    let inv: Vec<f64> = w.values().map(|x| 1.0 / x).collect();
    let (mean, se) = moments(&inv);
    assert!((mean - 0.35).abs() < 4.0 * se, "{mean} +- {se}");
}

#[test]
fn sampling_is_reproducible() {
    let shape = IndexSet::new(vec![(2, 3), (4, 1)]).unwrap();
    let p = ParameterSet::new(vec![0.1, 0.2, 0.3, 0.4], vec![1.0, 1.5, 2.0]).unwrap();
    let a = sample_array(&shape, &p, 99).unwrap();
    let b = sample_array(&shape, &p, 99).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_array(&shape, &p, 100).unwrap());
}

#[test]
fn laplace_at_zero_is_one_with_zero_error() {
    let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
    let e = mc_laplace(&[(3, 3)], &[0.0], &p, 2000, 1).unwrap();
    assert_eq!((e.mean, e.stderr), (1.0, 0.0));
    let far = mc_laplace(&[(3, 3)], &[1e9], &p, 2000, 1).unwrap();
    assert!(far.mean < 1e-6);
}

/// `E[exp(-w)]` with `1/w ~ Gamma(1.5)`, against the density integral
/// `int x^{1/2} e^{-x - 1/x} dx / Gamma(3/2)` by a trapezoid rule in `log x`.
#[test]
fn single_cell_matches_density_integral() {
    let h = 1e-3;
    let oracle: f64 = (0..45_000)
        .map(|k| -40.0 + h * k as f64)
        .map(|y: f64| h * (1.5 * y - y.exp() - (-y).exp()).exp())
        .sum::<f64>()
        / (PI.sqrt() / 2.0);
    let p = ParameterSet::new(vec![0.5], vec![1.0]).unwrap();
    let e = mc_laplace(&[(1, 1)], &[1.0], &p, 1_000_000, 2024).unwrap();
    assert!((e.mean - oracle).abs() < 4.0 * e.stderr, "{} +- {} vs {oracle}", e.mean, e.stderr);
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_laplace(&[(1, 3), (3, 1)], &[0.4, 0.6], &p, 20_000, 5).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn pooled_halves_agree_with_a_single_run() {
    let p = ParameterSet::homogeneous(2, 2, 1.0).unwrap();
    let a = mc_laplace(&[(2, 2)], &[0.5], &p, 200_000, 1).unwrap();
    let b = mc_laplace(&[(2, 2)], &[0.5], &p, 200_000, 2).unwrap();
    let pooled = a.pooled(&b);
    assert_eq!(pooled.n_samples, 400_000);
    let single = mc_laplace(&[(2, 2)], &[0.5], &p, 400_000, 3).unwrap();
    let se = (pooled.stderr.powi(2) + single.stderr.powi(2)).sqrt();
    assert!((pooled.mean - single.mean).abs() < 4.0 * se);
    // Pooling means equals the sample-weighted average.
    assert!((pooled.mean - (a.mean + b.mean) / 2.0).abs() < 1e-15);
}

#[test]
fn invalid_requests_are_rejected() {
    let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
    assert!(matches!(mc_laplace(&[(1, 2), (2, 2)], &[1.0, 1.0], &p, 2000, 1), Err(Error::Shape(_))));
    assert!(matches!(mc_laplace(&[(1, 1)], &[1.0], &p, 10, 1), Err(Error::Precondition(_))));
    assert!(matches!(mc_laplace(&[(1, 1)], &[-1.0], &p, 2000, 1), Err(Error::Precondition(_))));
    assert!(matches!(mc_laplace(&[(4, 1)], &[1.0], &p, 2000, 1), Err(Error::Parameters(_))));
    assert!(matches!(mc_laplace_streams(&[(1, 1)], &[1.0], &p, 2000, 1, 0), Err(Error::Precondition(_))));
    assert!(matches!(ParameterSet::new(vec![-1.0], vec![0.5]), Err(Error::Parameters(_))));
    assert!(matches!(ParameterSet::homogeneous(1, 1, 0.0), Err(Error::Parameters(_))));
}

#[test]
fn estimate_serialises_with_short_sample_key() {
    let e = MCEstimate { mean: 0.5, stderr: 0.01, n_samples: 1000, seed: 7 };
    assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"mean":0.5,"stderr":0.01,"n":1000,"seed":7}"#);
}

#[test]
fn homogeneous_parameters_are_detected() {
    assert_eq!(ParameterSet::new(vec![0.0, 0.0], vec![1.3, 1.3]).unwrap().gamma, Some(1.3));
    assert_eq!(ParameterSet::new(vec![0.1, 0.0], vec![1.3, 1.3]).unwrap().gamma, None);
    assert!(ParameterSet::new(vec![0.1], vec![1.3]).unwrap().require_homogeneous().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimates_lie_in_the_unit_interval(u1 in 0.0f64..5.0, u2 in 0.0f64..5.0, seed in any::<u64>()) {
        let p = ParameterSet::homogeneous(3, 3, 1.0).unwrap();
        let e = mc_laplace(&[(1, 3), (3, 1)], &[u1, u2], &p, 2000, seed).unwrap();
        prop_assert!(e.mean > 0.0 && e.mean <= 1.0);
        prop_assert!(e.stderr >= 0.0);
    }

    #[test]
    fn samples_are_positive_and_finite(seed in any::<u64>(), gamma in 0.2f64..4.0) {
        let p = ParameterSet::homogeneous(4, 4, gamma).unwrap();
        let w = sample_array(&IndexSet::new(vec![(2, 4), (4, 2)]).unwrap(), &p, seed).unwrap();
        prop_assert!(w.values().all(|x| x.is_finite() && *x > 0.0));
    }
}
