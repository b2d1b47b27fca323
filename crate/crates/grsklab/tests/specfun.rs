use grsklab::specfun::{
    airy_ai, airy_ai_prime, airy_pair, digamma, gamma, gamma_asymptotic_ratio, log_gamma, plancherel_rank1_check,
    polygamma, scaling_constants, sklyanin, stade_check, whittaker_givental, GiventalQuadrature, WhittakerArg,
};
use grsklab::Error;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Maclaurin series `Ai(x) = Ai(0) f(x) + Ai'(0) g(x)` with
/// `f = sum 3^k (1/3)_k x^{3k} / (3k)!`, `g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!`.
fn airy_series(x: f64) -> f64 {
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 0..60 {
        f += tf;
        g += tg;
        let k = k as f64;
        tf *= x * x * x / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x * x * x / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    }
    AI0 * f + AIP0 * g
}

/// Stirling series for `log Gamma(z)` at large `|z|`, with Bernoulli terms through `B_12`.
fn stirling(z: C64) -> C64 {
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    for (k, bk) in b.iter().enumerate() {
        let n = 2.0 * (k + 1) as f64;
        s += bk / (n * (n - 1.0) * z.powf(n - 1.0));
    }
    s
}

#[test]
fn airy_at_zero_and_against_its_series() {
    assert!((airy_ai(0.0).unwrap() - 0.355_028_053_9).abs() < 1e-10);
    assert!((airy_ai_prime(0.0).unwrap() - AIP0).abs() < 1e-10);
    for x in [-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0] {
        assert!((airy_ai(x).unwrap() - airy_series(x)).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn airy_decays_monotonically_on_the_right() {
    assert!(airy_ai(1.0).unwrap() < airy_ai(0.0).unwrap());
    let vals: Vec<f64> = (10..=100).map(|k| airy_ai(k as f64 / 10.0).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
}

#[test]
fn airy_satisfies_its_differential_equation() {
    let h = 1e-3;
    for x in [-2.0, 0.0, 2.0] {
        let d2 = (airy_ai(x + h).unwrap() - 2.0 * airy_ai(x).unwrap() + airy_ai(x - h).unwrap()) / (h * h);
        assert!((d2 - x * airy_ai(x).unwrap()).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn airy_range_is_enforced_but_the_internal_pair_extends() {
    assert!(matches!(airy_ai(10.5), Err(Error::OutOfRange(_))));
    assert!(matches!(airy_ai_prime(-11.0), Err(Error::OutOfRange(_))));
    // Reference values (30-digit arbitrary-precision evaluation) on both
    // sides of the switch to the asymptotic expansion at |x| = 10.
    let reference = [
        (-25.0, 0.163_526_578_830_429_47, 0.962_378_851_387_697_4),
        (-12.0, -0.066_555_175_054_373_13, 1.023_110_453_367_970_7),
        (-10.0, 0.040_241_238_486_443_19, 0.996_265_044_132_790_1),
        (-9.5, 0.319_103_247_719_128_2, -0.108_095_318_811_871_24),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
        (12.0, 1.393_184_688_875_360_8e-13, -4.854_736_554_985_308_5e-13),
    ];
    for (x, ai, aip) in reference {
        let (a, b) = airy_pair(x);
        assert!((a - ai).abs() < 1e-11 && (b - aip).abs() < 1e-11, "x = {x}: {a}, {b}");
    }
}

#[test]
fn log_gamma_special_values() {
    assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
    assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
    assert!((gamma(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-12);
    assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::PoleCollision(_))));
    assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::PoleCollision(_))));
}

#[test]
fn log_gamma_matches_stirling_far_out() {
    for z in [c(30.0, 20.0), c(40.0, -5.0), c(25.0, 200.0), c(-15.5, 60.0)] {
        let (a, b) = (log_gamma(z).unwrap(), stirling(z));
        // Both are the principal branch, so they must agree without 2 pi i ambiguity.
        assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "z = {z}: {a} vs {b}");
    }
}

#[test]
fn gamma_ratio_at_a_half_and_fifty() {
    let r = gamma_asymptotic_ratio(0.5, 50.0).unwrap();
    assert!((r - (2.0 * PI).sqrt()).abs() < 1e-3);
}

#[test]
fn digamma_and_polygamma_values() {
    assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-10);
    assert!((polygamma(1, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-10);
    // Psi''(1) = -2 zeta(3)
    assert!((polygamma(2, 1.0).unwrap() + 2.0 * 1.202_056_903_159_594_3).abs() < 1e-10);
    for x in [0.3, 1.3, 2.3] {
        assert!((digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs() < 1e-12);
        assert!((polygamma(1, x + 1.0).unwrap() - polygamma(1, x).unwrap() + 1.0 / (x * x)).abs() < 1e-11);
    }
    assert!(matches!(digamma(-2.0), Err(Error::PoleCollision(_))));
    assert!(matches!(polygamma(3, 1.0), Err(Error::Precondition(_))));
}

#[test]
fn digamma_is_the_derivative_of_log_gamma() {
    for x in [0.4, 1.7, 6.2] {
        let h = 1e-5;
        let fd = (log_gamma(c(x + h, 0.0)).unwrap().re - log_gamma(c(x - h, 0.0)).unwrap().re) / (2.0 * h);
        assert!((fd - digamma(x).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn scaling_constants_at_two_and_double_critical_point() {
    assert!((scaling_constants(2.0).unwrap().f_gamma - 1.154_431_329_8).abs() < 1e-10);
    for g in [0.5, 1.0, 2.0] {
        let k = scaling_constants(g).unwrap();
        assert!(k.g1_residual.abs() < 1e-10 && k.g2_residual.abs() < 1e-10);
        assert!((k.g3 - 2.0 * polygamma(2, g / 2.0).unwrap()).abs() < 1e-12);
        assert!((k.f2 - 2.0 * polygamma(1, g / 2.0).unwrap()).abs() < 1e-12);
    }
    assert!(matches!(scaling_constants(-1.0), Err(Error::Parameters(_))));
}

#[test]
fn sklyanin_small_ranks() {
    let one = sklyanin(&[c(0.3, 1.0)]).unwrap();
    assert!((one - 1.0 / c(0.0, 2.0 * PI)).norm() < 1e-15);
    let y = 0.7;
    let two = sklyanin(&[c(0.0, y), c(0.0, -y)]).unwrap();
    let direct = 1.0 / (c(0.0, 2.0 * PI).powu(2) * 2.0 * gamma(c(0.0, 2.0 * y)).unwrap() * gamma(c(0.0, -2.0 * y)).unwrap());
    assert!((two - direct).norm() < 1e-14 * direct.norm());
    // Along the imaginary axis s_2 d(lambda_1) d(lambda_2) is a positive density.
    assert!((two * c(0.0, 1.0).powu(2)).re > 0.0);
    let lam = [c(0.1, 0.4), c(-0.2, 1.1), c(0.05, -0.6)];
    let perm = [lam[2], lam[0], lam[1]];
    assert!((sklyanin(&lam).unwrap() - sklyanin(&perm).unwrap()).norm() < 1e-14);
}

/// `2 K_nu(2 s) = int_R e^{nu t - 2 s cosh t} dt` by a trapezoid rule.
fn two_bessel_k(nu: f64, s: f64) -> f64 {
    let h = 2e-3;
    (-10_000..=10_000).map(|k| h * k as f64).map(|t: f64| h * (nu * t - 2.0 * s * t.cosh()).exp()).sum()
}

#[test]
fn whittaker_rank_one_and_two() {
    let q = GiventalQuadrature::default();
    let r1 = whittaker_givental(&WhittakerArg { alpha: vec![c(0.4, 0.3)], x: vec![2.0] }, &q).unwrap();
    assert!((r1 - c(2.0, 0.0).powc(c(-0.4, -0.3))).norm() < 1e-14);
    // Rank two: (x1 x2)^{-(a1 + a2)/2} 2 K_{a2 - a1}(2 sqrt(x2 / x1)).
    let (a1, a2, x1, x2) = (0.3, 0.8, 1.5, 0.7);
    let psi = whittaker_givental(&WhittakerArg { alpha: vec![c(a1, 0.0), c(a2, 0.0)], x: vec![x1, x2] }, &q).unwrap();
    let oracle = (x1 * x2).powf(-(a1 + a2) / 2.0) * two_bessel_k(a2 - a1, (x2 / x1).sqrt());
    assert!((psi.re - oracle).abs() < 1e-6 * oracle && psi.im.abs() < 1e-12, "{psi} vs {oracle}");
    let swapped = whittaker_givental(&WhittakerArg { alpha: vec![c(a2, 0.0), c(a1, 0.0)], x: vec![x1, x2] }, &q).unwrap();
    assert!((psi - swapped).norm() < 1e-6 * psi.norm());
}

#[test]
fn whittaker_rank_caps() {
    let q = GiventalQuadrature::default();
    let arg3 = WhittakerArg { alpha: vec![c(0.1, 0.0); 3], x: vec![1.0; 3] };
    assert!(matches!(whittaker_givental(&arg3, &q), Err(Error::DimensionCap(_))));
    let arg4 = WhittakerArg { alpha: vec![c(0.1, 0.0); 4], x: vec![1.0; 4] };
    assert!(matches!(whittaker_givental(&arg4, &GiventalQuadrature { allow_expensive: true, ..q }), Err(Error::DimensionCap(_))));
    // A coarse rank-3 run goes through behind the flag.
    let cheap = GiventalQuadrature { half_length: 8.0, nodes: 40, allow_expensive: true };
    let v = whittaker_givental(&arg3, &cheap).unwrap();
    assert!(v.re.is_finite() && v.re > 0.0);
}

#[test]
fn stade_rank_one_values() {
    let q = GiventalQuadrature::default();
    // Truncating log x at -12 drops about e^{-12 (nu + lambda)} / (nu + lambda) of the mass.
    let a = stade_check(&[0.75], &[0.75], 1.0, &q).unwrap();
    assert!((a.rhs - PI.sqrt() / 2.0).abs() < 1e-12 && a.relerr < 1e-7, "{a:?}");
    let b = stade_check(&[0.5], &[1.0], 2.0, &q).unwrap();
    assert!((b.rhs - 2f64.powf(-1.5) * PI.sqrt() / 2.0).abs() < 1e-12 && b.relerr < 1e-7, "{b:?}");
    assert!(matches!(stade_check(&[0.5], &[-0.6], 1.0, &q), Err(Error::Precondition(_))));
}

#[test]
fn stade_rank_two() {
    let c = stade_check(&[0.6, 0.8], &[0.7, 0.9], 1.0, &GiventalQuadrature::default()).unwrap();
    assert!(c.relerr <= 1e-4, "{c:?}");
}

#[test]
fn plancherel_rank_one() {
    let c = plancherel_rank1_check(&GiventalQuadrature::default(), 40.0).unwrap();
    assert!(c.relerr <= 1e-4, "{c:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gamma_ratio_tends_to_root_two_pi(a in -2.0f64..3.0, b in 30.0f64..200.0, flip in any::<bool>()) {
        let b = if flip { -b } else { b };
        let r = gamma_asymptotic_ratio(a, b).unwrap();
        prop_assert!((r / (2.0 * PI).sqrt() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn log_gamma_recursion(re in -8.0f64..8.0, im in 0.1f64..30.0) {
        let z = c(re, im);
        let lhs = log_gamma(z + 1.0).unwrap().exp();
        let rhs = z * log_gamma(z).unwrap().exp();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn log_gamma_reflection(re in -5.0f64..5.0, im in 0.2f64..8.0) {
        let z = c(re, im);
        let lhs = log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap() - (PI / (PI * z).sin()).ln();
        let k = lhs.im / (2.0 * PI);
        prop_assert!(lhs.re.abs() < 1e-11 && (k - k.round()).abs() < 1e-11);
    }

    #[test]
    fn scaling_constants_stay_positive(g in 0.05f64..=4.0) {
        let k = scaling_constants(g).unwrap();
        prop_assert!(k.c1 > 0.0 && k.c2 > 0.0 && k.c3 > 0.0);
        prop_assert!(k.g1_residual.abs() < 1e-9 && k.g2_residual.abs() < 1e-9);
    }
}
