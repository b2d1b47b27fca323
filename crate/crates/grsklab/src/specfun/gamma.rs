use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Lanczos approximation with `g = 7`, nine terms (Godfrey's coefficients):
/// `Gamma(z + 1) = sqrt(2 pi) t^(z + 1/2) e^(-t) A(z)`, `t = z + g + 1/2`,
/// `A(z) = c_0 + sum_k c_k / (z + k)`.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal branch of `log Gamma(z)`: the continuation from the positive real
/// axis with the branch cut along the negative real axis.
///
/// For `Re z >= 1/2` the Lanczos sum is used directly; otherwise `z` is shifted
/// right by `k` and `log Gamma(z) = log Gamma(z + k) - sum_{j<k} log(z + j)`,
/// each logarithm taken on its principal branch. That sum is continuous away
/// from the cut, so the result is the principal `log Gamma` (not merely some
/// logarithm of `Gamma`).
pub fn log_gamma(z: C64) -> Result<C64> {
    if is_pole(z) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::PoleCollision(format!("log Gamma at z = {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

/// [`log_gamma`] without the pole check (returns non-finite values at poles).
pub fn log_gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        let k = (0.5 - z.re).ceil();
        let mut shift = C64::new(0.0, 0.0);
        let mut zz = z;
        for _ in 0..k as usize {
            shift += zz.ln();
            zz += 1.0;
        }
        return lanczos(zz) - shift;
    }
    lanczos(z)
}

fn lanczos(z: C64) -> C64 {
    let x = z - 1.0;
    let mut a = C64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (x + 0.5) * t.ln() - t + a.ln()
}

/// `log Gamma(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    log_gamma_unchecked(C64::new(x, 0.0)).re
}

/// `Gamma(z)` for complex `z` (not at a pole).
pub fn gamma(z: C64) -> Result<C64> {
    log_gamma(z).map(|l| l.exp())
}

fn check_real_pole(x: f64) -> Result<()> {
    if x <= 0.0 && x == x.round() || !x.is_finite() {
        Err(Error::PoleCollision(format!("polygamma at x = {x}")))
    } else {
        Ok(())
    }
}

/// Digamma `Psi(x) = (log Gamma)'(x)` on the real line.
pub fn digamma(x: f64) -> Result<f64> {
    check_real_pole(x)?;
    if x < 0.0 {
        // Psi(1 - x) - Psi(x) = pi cot(pi x)
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let (mut x, mut acc) = (x, 0.0);
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r2 = 1.0 / (x * x);
    // B_{2k} / (2k) for k = 1..7
    let series = r2
        * (1.0 / 12.0
            - r2 * (1.0 / 120.0
                - r2 * (1.0 / 252.0
                    - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0 - r2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// `Psi^{(k)}(x)` for `k <= 2` on the real line.
pub fn polygamma(k: u32, x: f64) -> Result<f64> {
    check_real_pole(x)?;
    match k {
        0 => digamma(x),
        1 => {
            if x < 0.0 {
                // Psi'(1 - x) + Psi'(x) = pi^2 / sin^2(pi x)
                let s = (PI * x).sin();
                return Ok(PI * PI / (s * s) - polygamma(1, 1.0 - x)?);
            }
            let (mut x, mut acc) = (x, 0.0);
            while x < 10.0 {
                acc += 1.0 / (x * x);
                x += 1.0;
            }
            let r = 1.0 / x;
            let r2 = r * r;
            // 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
            let series = r * r2
                * (1.0 / 6.0
                    - r2 * (1.0 / 30.0
                        - r2 * (1.0 / 42.0
                            - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
            Ok(acc + r + 0.5 * r2 + series)
        }
        2 => {
            if x < 0.0 {
                // Psi''(1 - x) - Psi''(x) = 2 pi^3 cos(pi x) / sin^3(pi x)
                let s = (PI * x).sin();
                let c = (PI * x).cos();
                return Ok(polygamma(2, 1.0 - x)? - 2.0 * PI.powi(3) * c / s.powi(3));
            }
            let (mut x, mut acc) = (x, 0.0);
            while x < 10.0 {
                acc -= 2.0 / (x * x * x);
                x += 1.0;
            }
            let r = 1.0 / x;
            let r2 = r * r;
            // -[1/x^2 + 1/x^3 + sum_k (2k+1) B_{2k} / x^{2k+2}]
            let series = r2 * r2
                * (0.5
                    - r2 * (1.0 / 6.0
                        - r2 * (1.0 / 6.0 - r2 * (3.0 / 10.0 - r2 * (5.0 / 6.0 - r2 * 691.0 / 210.0)))));
            Ok(acc - (r2 + r2 * r + series))
        }
        _ => Err(Error::Precondition(format!("polygamma order {k} > 2 not supported"))),
    }
}

/// `log prod_{i != j} 1/Gamma(l_i - l_j)`, the non-constant part of the
/// Sklyanin density.
pub fn log_sklyanin_product(lambda: &[C64]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (i, &a) in lambda.iter().enumerate() {
        for (j, &b) in lambda.iter().enumerate() {
            if i != j {
                acc -= log_gamma(a - b)?;
            }
        }
    }
    Ok(acc)
}

/// Sklyanin density `s_n(l) = (2 pi i)^{-n} (n!)^{-1} prod_{i != j} Gamma(l_i - l_j)^{-1}`.
pub fn sklyanin(lambda: &[C64]) -> Result<C64> {
    let n = lambda.len();
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    Ok(log_sklyanin_product(lambda)?.exp() / (two_pi_i.powu(n as u32) * fact))
}

/// `|Gamma(a + ib)| e^{pi |b| / 2} |b|^{1/2 - a}`, which tends to `sqrt(2 pi)`
/// as `|b|` grows; the decay rate behind every vertical-line truncation.
pub fn gamma_asymptotic_ratio(a: f64, b: f64) -> Result<f64> {
    let lg = log_gamma(C64::new(a, b))?;
    Ok((lg.re + PI * b.abs() / 2.0 + (0.5 - a) * b.abs().ln()).exp())
}
