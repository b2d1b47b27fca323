use grsklab::airy::{
    airy_arguments, airy_one_point, airy_two_point, conjecture_rhs, extended_airy_kernel, limit_term,
    tracy_widom_f2, AiryQuadrature, MIN_THRESHOLD,
};
use grsklab::specfun::{airy_ai, airy_ai_prime, scaling_constants};
use grsklab::Error;

/// GUE Tracy–Widom distribution from a 30-digit Nyström evaluation of the
/// closed-form Airy kernel (50 and 70 nodes agree to all printed digits).
const F2: [(f64, f64); 5] = [
    (-3.0, 0.080_319_552_939_334_55),
    (-1.0, 0.807_214_241_999_285_3),
    (0.0, 0.969_372_828_355_262_7),
    (1.0, 0.997_505_438_149_389_2),
    (2.0, 0.999_887_553_698_309_2),
];

fn ai(x: f64) -> f64 {
    airy_ai(x).unwrap()
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + inner + f(b))
}

/// `(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`, and `Ai'(x)^2 - x Ai(x)^2` on the diagonal.
fn closed_form_kernel(x: f64, y: f64) -> f64 {
    let (a, ap) = (ai(x), airy_ai_prime(x).unwrap());
    if x == y {
        return ap * ap - x * a * a;
    }
    let (b, bp) = (ai(y), airy_ai_prime(y).unwrap());
    (a * bp - ap * b) / (x - y)
}

#[test]
fn equal_time_kernel_is_the_airy_kernel() {
    for (x, y) in [(-1.0, -1.0), (0.0, 0.0), (1.0, 1.0), (-1.5, 0.7), (0.3, 2.2)] {
        let k = extended_airy_kernel(0.4, x, 0.4, y).unwrap();
        let swapped = extended_airy_kernel(0.4, y, 0.4, x).unwrap();
        assert!((k.value - closed_form_kernel(x, y)).abs() < 1e-9, "({x}, {y}): {k:?}");
        assert!((k.value - swapped.value).abs() < 1e-12);
        if x == y {
            assert!(k.value > 0.0);
        }
    }
}

#[test]
fn kernel_branches_match_direct_integrals() {
    let (x, y) = (0.5, -0.5);
    // t > t': int_0^inf e^{-lambda s} Ai(x + lambda) Ai(y + lambda); Ai(10)^2 ~ 1e-20 ends the range.
    for s in [0.3, 2.5] {
        let oracle = simpson(|l| (-l * s).exp() * ai(x + l) * ai(y + l), 0.0, 9.5, 20_000);
        let k = extended_airy_kernel(s, x, 0.0, y).unwrap();
        assert!((k.value - oracle).abs() < 1e-9, "s = {s}: {k:?} vs {oracle}");
    }
    // t < t': -int_{-inf}^0 e^{lambda s} Ai Ai, truncated where e^{-9.5 s} is negligible.
    // s = 1.5 exercises the full-line subtraction, s = 3 the direct branch.
    for s in [1.5, 3.0] {
        let oracle = -simpson(|l| (l * s).exp() * ai(x + l) * ai(y + l), -9.5, 0.0, 40_000);
        let k = extended_airy_kernel(0.0, x, s, y).unwrap();
        assert!((k.value - oracle).abs() < 1e-6, "s = {s}: {k:?} vs {oracle}");
    }
}

#[test]
fn tracy_widom_against_reference_values() {
    for (s, f) in F2 {
        assert!((tracy_widom_f2(s).unwrap() - f).abs() < 1e-10, "s = {s}");
        // The lambda-integral engine: its full determinant and its order-3 series.
        let e = airy_one_point(s, 3).unwrap();
        assert!((e.full - f).abs() < 1e-7, "s = {s}: {e:?}");
        assert!((e.value - f).abs() < 1e-4, "s = {s}: {e:?}");
    }
    assert!(matches!(tracy_widom_f2(MIN_THRESHOLD - 0.1), Err(Error::OutOfRange(_) | Error::Precondition(_))));
}

#[test]
fn equal_times_reduce_to_one_point() {
    let one = airy_one_point(-0.5, 3).unwrap();
    let two = airy_two_point(1.3, 1.3, -0.5, f64::INFINITY, 3).unwrap();
    assert!((one.value - two.value).abs() < 1e-6);
    let both = airy_two_point(1.3, 1.3, 0.4, -0.5, 3).unwrap();
    assert!((one.value - both.value).abs() < 1e-6);
    assert_eq!(airy_two_point(0.0, 2.0, f64::INFINITY, f64::INFINITY, 2).unwrap().value, 1.0);
}

#[test]
fn stationarity_reversibility_and_bounds() {
    let base = airy_two_point(0.0, 0.8, -0.5, 0.3, 3).unwrap();
    let shifted = airy_two_point(2.5, 3.3, -0.5, 0.3, 3).unwrap();
    assert!((base.value - shifted.value).abs() < 1e-6, "{base:?} vs {shifted:?}");
    // Swapping the time order of the two events.
    let swapped = airy_two_point(0.8, 0.0, 0.3, -0.5, 3).unwrap();
    assert!((base.value - swapped.value).abs() < 1e-6, "{base:?} vs {swapped:?}");
    // The stationary Airy process is reversible: exchanging the thresholds at fixed times.
    let reversed = airy_two_point(0.0, 0.8, 0.3, -0.5, 3).unwrap();
    assert!((base.value - reversed.value).abs() < 1e-6, "{base:?} vs {reversed:?}");
    // Frechet bounds between the marginals.
    let (fa, fb) = (airy_one_point(-0.5, 3).unwrap().value, airy_one_point(0.3, 3).unwrap().value);
    assert!(base.value <= fa.min(fb) + 1e-6 && base.value >= fa + fb - 1.0 - 1e-6);
    // Positive correlation at short lag: above the product of marginals.
    assert!(base.value > fa * fb);
}

#[test]
fn far_apart_times_decorrelate() {
    let f0 = F2[2].1;
    let e = airy_two_point(0.0, 6.0, 0.0, 0.0, 3).unwrap();
    assert!((e.value - f0 * f0).abs() < 5e-2, "{e:?}");
    // Correlation decays with the lag.
    let near = airy_two_point(0.0, 1.0, 0.0, 0.0, 3).unwrap();
    assert!(near.value - f0 * f0 > e.value - f0 * f0);
}

#[test]
fn two_point_is_monotone_in_thresholds() {
    let vals: Vec<f64> =
        [-2.0, -1.0, 0.0, 1.0].iter().map(|&x| airy_two_point(0.0, 0.5, x, 0.0, 3).unwrap().value).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{vals:?}");
    assert!(vals.iter().all(|v| (-1e-9..=1.0 + 1e-9).contains(v)));
}

#[test]
fn invalid_airy_requests() {
    assert!(matches!(airy_two_point(0.0, 1.0, -6.0, 0.0, 2), Err(Error::OutOfRange(_) | Error::Precondition(_))));
    assert!(matches!(airy_two_point(0.0, 1.0, 0.0, 0.0, 4), Err(Error::DimensionCap(_))));
    let q = AiryQuadrature::default();
    assert!(matches!(limit_term(2, 2, 0.5, 0.5, 0.0, 0.0, 1.0, &q), Err(Error::DimensionCap(_))));
    assert!(matches!(limit_term(1, 0, 0.0, 0.5, 0.0, 0.0, 1.0, &q), Err(Error::Precondition(_))));
    assert_eq!(limit_term(0, 0, 0.5, 0.5, 0.0, 0.0, 1.0, &q).unwrap().value, 1.0);
}

/// `-int_0^inf dtau int_0^inf dx Ai(theta + x + tau)^2 = -int_0^inf u Ai(theta + u)^2 du`,
/// which is also minus the trace of the Airy kernel on `(theta, inf)`.
#[test]
fn single_limit_term_is_minus_the_airy_trace() {
    let q = AiryQuadrature::default();
    let (t1, t2, r1, r2, gamma) = (0.5, 0.5, 0.3, -0.2, 1.0);
    let args = airy_arguments(t1, t2, r1, r2, gamma).unwrap();
    for (k2, k1, theta) in [(1, 0, args.thresholds[1]), (0, 1, args.thresholds[0])] {
        let moment = -simpson(|u| u * ai(theta + u).powi(2), 0.0, 10.0 - theta, 20_000);
        let trace = -simpson(|x| closed_form_kernel(x, x), theta, 10.0, 20_000);
        assert!((moment - trace).abs() < 1e-9);
        let e = limit_term(k2, k1, t1, t2, r1, r2, gamma, &q).unwrap();
        assert!((e.value - moment).abs() < 1e-8, "({k2}, {k1}): {e:?} vs {moment}");
    }
}

#[test]
fn limit_terms_do_not_depend_on_the_truncation() {
    let short = AiryQuadrature { space_tail: 10.0, ..AiryQuadrature::default() };
    let long = AiryQuadrature { space_tail: 14.0, ..AiryQuadrature::default() };
    let a = limit_term(1, 0, 0.5, 0.5, 0.0, 0.0, 1.0, &short).unwrap();
    let b = limit_term(1, 0, 0.5, 0.5, 0.0, 0.0, 1.0, &long).unwrap();
    assert!((a.value - b.value).abs() < 1e-8, "{a:?} vs {b:?}");
}

/// The limit terms are the graded coefficients of the two-time determinant:
/// `k2` variables at the second point and `k1` at the first.
#[test]
fn limit_terms_match_the_two_time_series() {
    let q = AiryQuadrature::default();
    let (t1, t2, r1, r2, gamma) = (0.5, 0.5, 0.0, 0.0, 1.0);
    let rhs = conjecture_rhs(t1, t2, r1, r2, gamma, 2).unwrap();
    let mut sum = 0.0;
    let mut series = 0.0;
    for (k2, k1) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let e = limit_term(k2, k1, t1, t2, r1, r2, gamma, &q).unwrap();
        let coef = rhs.terms[k1][k2];
        assert!((e.value - coef).abs() < 1e-3, "({k2}, {k1}): {e:?} vs {coef}");
        sum += e.value;
        series += coef;
    }
    assert!((sum - series).abs() < 1e-3, "{sum} vs {series}");
}

#[test]
fn conjecture_rhs_is_a_monotone_distribution_function() {
    let k = scaling_constants(1.0).unwrap();
    let a = airy_arguments(0.5, 0.25, 0.1, -0.1, 1.0).unwrap();
    assert!((a.times[0] + 0.5 * k.c3).abs() < 1e-15 && (a.times[1] - 0.25 * k.c3).abs() < 1e-15);
    assert!((a.thresholds[1] - (-0.1 * k.c1 + 0.0625 * k.c2)).abs() < 1e-15);
    let scan = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { [-1.0, 0.0, 1.0, 2.0].iter().map(|&r| f(r)).collect() };
    let in_r1 = scan(&|r| conjecture_rhs(0.5, 0.5, r, 0.0, 1.0, 2).unwrap().value);
    let in_r2 = scan(&|r| conjecture_rhs(0.5, 0.5, 0.0, r, 1.0, 2).unwrap().value);
    // Equal times: a single time with two thresholds, i.e. the smaller one.
    let equal = scan(&|r| conjecture_rhs(0.0, 0.0, r, 0.5, 1.0, 2).unwrap().value);
    for v in [&in_r1, &in_r2, &equal] {
        assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{v:?}");
    }
    // Thresholds at 8, where 1 - F_2 is below 1e-10.
    let r = (8.0 - 0.25 * k.c2) / k.c1;
    let large = conjecture_rhs(0.5, 0.5, r, r, 1.0, 2).unwrap().value;
    assert!((large - 1.0).abs() < 1e-8, "{large}");
}
